/**
 * Frozen annotation-document grammar (formatVersion 1) and its validator.
 *
 * This mirrors the pipeline's on-disk format exactly; anything this module
 * accepts must be accepted by the pipeline parser and vice versa.  All
 * fields are required, unknown fields are rejected, and every diagnostic
 * carries a JSON-path-style location such as
 * `$.sequences[2].frames[14].rightContact`.
 *
 *     {
 *       "formatVersion": 1,
 *       "videoId": str,
 *       "frameRate": number > 0,
 *       "laneCalibration": {"lineA": [point, point], "lineB": [point, point]},
 *       "sequences": [
 *         {
 *           "personId": int,
 *           "startFrame": int, "endFrame": int, "obstacleFrame": int,
 *           "direction": "leftToRight" | "rightToLeft",
 *           "outcome": "Fall" | "NoFall",
 *           "frames": [              // may be empty: metadata-only sequence
 *             {
 *               "frame": int,
 *               "head": point, "leftFoot": point, "rightFoot": point,
 *               "leftContact": bool, "rightContact": bool
 *             }, ...
 *           ]
 *         }, ...
 *       ]
 *     }
 *
 * where point is {"x": number, "y": number}.
 */

export const FORMAT_VERSION = 1;

export interface Point {
  x: number;
  y: number;
}

export type Direction = "leftToRight" | "rightToLeft";
export type Outcome = "Fall" | "NoFall";

export const DIRECTIONS: readonly Direction[] = ["leftToRight", "rightToLeft"];
export const OUTCOMES: readonly Outcome[] = ["Fall", "NoFall"];

export interface FrameLandmarks {
  frame: number;
  head: Point;
  leftFoot: Point;
  rightFoot: Point;
  leftContact: boolean;
  rightContact: boolean;
}

export interface WalkSequence {
  personId: number;
  startFrame: number;
  endFrame: number;
  obstacleFrame: number;
  direction: Direction;
  outcome: Outcome;
  frames: FrameLandmarks[];
}

export interface LaneCalibration {
  lineA: [Point, Point];
  lineB: [Point, Point];
}

export interface AnnotationDocument {
  formatVersion: typeof FORMAT_VERSION;
  videoId: string;
  frameRate: number;
  laneCalibration: LaneCalibration;
  sequences: WalkSequence[];
}

/** Schema or invariant failure with a JSON-path location. */
export class DocumentError extends Error {
  readonly path: string;

  constructor(message: string, path: string) {
    super(`${path}: ${message}`);
    this.name = "DocumentError";
    this.path = path;
  }
}

type Json = unknown;

function asObject(value: Json, path: string): Record<string, Json> {
  if (typeof value !== "object" || value === null || Array.isArray(value)) {
    throw new DocumentError(`expected an object`, path);
  }
  return value as Record<string, Json>;
}

function require(obj: Record<string, Json>, field: string, path: string): Json {
  if (!(field in obj)) {
    throw new DocumentError(`missing required field '${field}'`, path);
  }
  return obj[field];
}

function requireNumber(
  obj: Record<string, Json>,
  field: string,
  path: string
): number {
  const value = require(obj, field, path);
  if (typeof value !== "number" || !Number.isFinite(value)) {
    throw new DocumentError(`'${field}' must be a finite number`, path);
  }
  return value;
}

function requireInt(
  obj: Record<string, Json>,
  field: string,
  path: string
): number {
  const value = requireNumber(obj, field, path);
  if (!Number.isInteger(value)) {
    throw new DocumentError(`'${field}' must be an integer`, path);
  }
  return value;
}

function requireString(
  obj: Record<string, Json>,
  field: string,
  path: string
): string {
  const value = require(obj, field, path);
  if (typeof value !== "string") {
    throw new DocumentError(`'${field}' must be a string`, path);
  }
  return value;
}

function requireBool(
  obj: Record<string, Json>,
  field: string,
  path: string
): boolean {
  const value = require(obj, field, path);
  if (typeof value !== "boolean") {
    throw new DocumentError(`'${field}' must be a boolean`, path);
  }
  return value;
}

function requireArray(
  obj: Record<string, Json>,
  field: string,
  path: string
): Json[] {
  const value = require(obj, field, path);
  if (!Array.isArray(value)) {
    throw new DocumentError(`'${field}' must be an array`, path);
  }
  return value;
}

function noExtras(
  obj: Record<string, Json>,
  allowed: readonly string[],
  path: string
): void {
  for (const key of Object.keys(obj).sort()) {
    if (!allowed.includes(key)) {
      throw new DocumentError(`unexpected field '${key}'`, path);
    }
  }
}

function parsePoint(value: Json, path: string): Point {
  const obj = asObject(value, path);
  const x = requireNumber(obj, "x", path);
  const y = requireNumber(obj, "y", path);
  noExtras(obj, ["x", "y"], path);
  return { x, y };
}

function parseLine(value: Json, path: string): [Point, Point] {
  if (!Array.isArray(value) || value.length !== 2) {
    throw new DocumentError("must be a list of exactly 2 points", path);
  }
  return [parsePoint(value[0], `${path}[0]`), parsePoint(value[1], `${path}[1]`)];
}

function parseFrame(value: Json, path: string): FrameLandmarks {
  const obj = asObject(value, path);
  const frame = requireInt(obj, "frame", path);
  const head = parsePoint(require(obj, "head", path), `${path}.head`);
  const leftFoot = parsePoint(require(obj, "leftFoot", path), `${path}.leftFoot`);
  const rightFoot = parsePoint(
    require(obj, "rightFoot", path),
    `${path}.rightFoot`
  );
  const leftContact = requireBool(obj, "leftContact", path);
  const rightContact = requireBool(obj, "rightContact", path);
  noExtras(
    obj,
    ["frame", "head", "leftFoot", "rightFoot", "leftContact", "rightContact"],
    path
  );
  if (frame < 0) {
    throw new DocumentError(`frame index must be >= 0, got ${frame}`, path);
  }
  return { frame, head, leftFoot, rightFoot, leftContact, rightContact };
}

function parseSequence(value: Json, path: string): WalkSequence {
  const obj = asObject(value, path);
  const personId = requireInt(obj, "personId", path);
  const startFrame = requireInt(obj, "startFrame", path);
  const endFrame = requireInt(obj, "endFrame", path);
  const obstacleFrame = requireInt(obj, "obstacleFrame", path);
  const direction = requireString(obj, "direction", path);
  const outcome = requireString(obj, "outcome", path);
  const framesRaw = requireArray(obj, "frames", path);
  noExtras(
    obj,
    [
      "personId",
      "startFrame",
      "endFrame",
      "obstacleFrame",
      "direction",
      "outcome",
      "frames",
    ],
    path
  );
  if (!DIRECTIONS.includes(direction as Direction)) {
    throw new DocumentError(
      `'direction' must be one of ${JSON.stringify(DIRECTIONS)}, got '${direction}'`,
      path
    );
  }
  if (!OUTCOMES.includes(outcome as Outcome)) {
    throw new DocumentError(
      `'outcome' must be one of ${JSON.stringify(OUTCOMES)}, got '${outcome}'`,
      path
    );
  }
  const frames = framesRaw.map((f, i) => parseFrame(f, `${path}.frames[${i}]`));

  // obstacleFrame == endFrame + 1 means the whole walk precedes the hazard.
  if (!(startFrame <= obstacleFrame && obstacleFrame <= endFrame + 1)) {
    throw new DocumentError(
      `obstacleFrame ${obstacleFrame} outside [${startFrame}, ${endFrame + 1}]`,
      path
    );
  }
  // An empty frames list is a metadata-only sequence; otherwise the frames
  // must cover [startFrame, endFrame] contiguously.
  if (frames.length > 0) {
    const expectedCount = endFrame - startFrame + 1;
    const contiguous =
      frames.length === expectedCount &&
      frames.every((f, i) => f.frame === startFrame + i);
    if (!contiguous) {
      throw new DocumentError(
        `frames must cover [${startFrame}, ${endFrame}] contiguously`,
        path
      );
    }
  }
  return {
    personId,
    startFrame,
    endFrame,
    obstacleFrame,
    direction: direction as Direction,
    outcome: outcome as Outcome,
    frames,
  };
}

/** Validate a decoded JSON value and return the typed document. */
export function validateDocument(root: Json): AnnotationDocument {
  const obj = asObject(root, "$");
  const version = requireInt(obj, "formatVersion", "$");
  if (version !== FORMAT_VERSION) {
    throw new DocumentError(
      `unsupported formatVersion ${version} (expected ${FORMAT_VERSION})`,
      "$"
    );
  }
  const videoId = requireString(obj, "videoId", "$");
  const frameRate = requireNumber(obj, "frameRate", "$");
  const lanesObj = asObject(
    require(obj, "laneCalibration", "$"),
    "$.laneCalibration"
  );
  noExtras(lanesObj, ["lineA", "lineB"], "$.laneCalibration");
  const laneCalibration: LaneCalibration = {
    lineA: parseLine(
      require(lanesObj, "lineA", "$.laneCalibration"),
      "$.laneCalibration.lineA"
    ),
    lineB: parseLine(
      require(lanesObj, "lineB", "$.laneCalibration"),
      "$.laneCalibration.lineB"
    ),
  };
  const sequencesRaw = requireArray(obj, "sequences", "$");
  noExtras(
    obj,
    ["formatVersion", "videoId", "frameRate", "laneCalibration", "sequences"],
    "$"
  );
  const sequences = sequencesRaw.map((s, i) =>
    parseSequence(s, `$.sequences[${i}]`)
  );

  if (!(frameRate > 0)) {
    throw new DocumentError(`frameRate must be > 0, got ${frameRate}`, "$");
  }
  const ids = sequences.map((s) => s.personId);
  if (new Set(ids).size !== ids.length) {
    throw new DocumentError("sequence personIds must be unique", "$");
  }
  return {
    formatVersion: FORMAT_VERSION,
    videoId,
    frameRate,
    laneCalibration,
    sequences,
  };
}

/** Parse annotation-document text; syntax errors are reported at `$`. */
export function parseDocument(text: string): AnnotationDocument {
  let root: Json;
  try {
    root = JSON.parse(text);
  } catch (err) {
    throw new DocumentError(`invalid JSON: ${(err as Error).message}`, "$");
  }
  return validateDocument(root);
}

/** Serialize a document; inverse of parseDocument for valid documents. */
export function serializeDocument(doc: AnnotationDocument): string {
  return JSON.stringify(doc, null, 2) + "\n";
}
