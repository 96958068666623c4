/**
 * Session -> annotation document export, with a pre-flight checklist,
 * and the inverse import that restores session state from a document.
 *
 * Export only succeeds when the sequence is complete: every frame in
 * [startFrame, endFrame] has all three landmarks (the contact flags
 * always carry a value), both lane lines have two points, and the
 * sequence metadata satisfies the document invariants.  The emitted
 * bytes are validated against the frozen grammar before they leave this
 * module, so an exportable session always yields a parseable document.
 */

import type {
  AnnotationDocument,
  FrameLandmarks,
  Point,
  WalkSequence,
} from "./schema.js";
import { serializeDocument, validateDocument } from "./schema.js";
import type { SessionState } from "./session.js";

/** One unmet precondition, e.g. a frame missing its right-foot point. */
export interface ChecklistItem {
  /** Frame index the item concerns, or null for session-level items. */
  frame: number | null;
  message: string;
}

export class ExportBlockedError extends Error {
  readonly checklist: ChecklistItem[];

  constructor(checklist: ChecklistItem[]) {
    super(
      `export blocked; ${checklist.length} item(s) missing:\n` +
        checklist.map((c) => `  - ${c.message}`).join("\n")
    );
    this.name = "ExportBlockedError";
    this.checklist = checklist;
  }
}

const LANDMARKS = ["head", "leftFoot", "rightFoot"] as const;

/** Everything still missing before the session can be exported. */
export function exportChecklist(state: SessionState): ChecklistItem[] {
  const items: ChecklistItem[] = [];
  const { meta } = state;

  if (meta.endFrame < meta.startFrame) {
    items.push({
      frame: null,
      message: `endFrame ${meta.endFrame} precedes startFrame ${meta.startFrame}`,
    });
  }
  if (!(meta.startFrame <= meta.obstacleFrame && meta.obstacleFrame <= meta.endFrame + 1)) {
    items.push({
      frame: null,
      message:
        `obstacleFrame ${meta.obstacleFrame} outside ` +
        `[${meta.startFrame}, ${meta.endFrame + 1}]`,
    });
  }
  for (const line of ["lineA", "lineB"] as const) {
    const n = state.lanes[line].length;
    if (n !== 2) {
      items.push({
        frame: null,
        message: `lane calibration ${line} has ${n} of 2 points`,
      });
    }
  }
  if (meta.endFrame >= meta.startFrame) {
    for (let f = meta.startFrame; f <= meta.endFrame; f++) {
      const buf = state.frames[f];
      if (buf === undefined) {
        items.push({ frame: f, message: `frame ${f} has no landmarks` });
        continue;
      }
      for (const kind of LANDMARKS) {
        if (buf[kind] === undefined) {
          items.push({ frame: f, message: `frame ${f} missing ${kind}` });
        }
      }
    }
  }
  return items;
}

function asPoint(p: Point): Point {
  return { x: p.x, y: p.y };
}

/** Build the document object for a complete session. */
export function sessionToDocument(state: SessionState): AnnotationDocument {
  const checklist = exportChecklist(state);
  if (checklist.length > 0) {
    throw new ExportBlockedError(checklist);
  }
  const { meta } = state;
  const frames: FrameLandmarks[] = [];
  for (let f = meta.startFrame; f <= meta.endFrame; f++) {
    const buf = state.frames[f]!;
    frames.push({
      frame: f,
      head: asPoint(buf.head!),
      leftFoot: asPoint(buf.leftFoot!),
      rightFoot: asPoint(buf.rightFoot!),
      leftContact: buf.leftContact,
      rightContact: buf.rightContact,
    });
  }
  const sequence: WalkSequence = {
    personId: meta.personId,
    startFrame: meta.startFrame,
    endFrame: meta.endFrame,
    obstacleFrame: meta.obstacleFrame,
    direction: meta.direction,
    outcome: meta.outcome,
    frames,
  };
  const doc: AnnotationDocument = {
    formatVersion: 1,
    videoId: state.videoId,
    frameRate: state.frameRate,
    laneCalibration: {
      lineA: [asPoint(state.lanes.lineA[0]!), asPoint(state.lanes.lineA[1]!)],
      lineB: [asPoint(state.lanes.lineB[0]!), asPoint(state.lanes.lineB[1]!)],
    },
    sequences: [sequence],
  };
  // Contract: anything we hand out passes the frozen grammar.
  return validateDocument(doc);
}

/** Export the session as annotation-document text. */
export function exportDocument(state: SessionState): string {
  return serializeDocument(sessionToDocument(state));
}

/**
 * Rebuild session state from a validated document (one of its sequences).
 * Frame pixel bounds are not part of the document, so the caller supplies
 * them; landmark coordinates are trusted as-is.
 */
export function documentToSession(
  doc: AnnotationDocument,
  frameWidth: number,
  frameHeight: number,
  sequenceIndex = 0
): SessionState {
  const seq = doc.sequences[sequenceIndex];
  if (seq === undefined) {
    throw new RangeError(
      `document has ${doc.sequences.length} sequence(s); ` +
        `index ${sequenceIndex} does not exist`
    );
  }
  const frames: SessionState["frames"] = {};
  for (const f of seq.frames) {
    frames[f.frame] = {
      head: asPoint(f.head),
      leftFoot: asPoint(f.leftFoot),
      rightFoot: asPoint(f.rightFoot),
      leftContact: f.leftContact,
      rightContact: f.rightContact,
    };
  }
  return {
    videoId: doc.videoId,
    frameRate: doc.frameRate,
    frameWidth,
    frameHeight,
    meta: {
      personId: seq.personId,
      startFrame: seq.startFrame,
      endFrame: seq.endFrame,
      obstacleFrame: seq.obstacleFrame,
      direction: seq.direction,
      outcome: seq.outcome,
    },
    frames,
    lanes: {
      lineA: doc.laneCalibration.lineA.map(asPoint),
      lineB: doc.laneCalibration.lineB.map(asPoint),
    },
  };
}
