/**
 * In-progress annotation session: the mutable buffer behind the UI.
 *
 * A session tracks one walk sequence under edit: per-frame landmark
 * placements (possibly incomplete), contact flags, sequence metadata, and
 * the two lane-calibration lines.  Every mutation goes through `apply`,
 * which snapshots the state onto the undo stack, so any edit sequence
 * followed by a full undo restores the initial buffer exactly.
 */

import type { Direction, Outcome, Point } from "./schema.js";

export type LandmarkKind = "head" | "leftFoot" | "rightFoot";
export type FootSide = "left" | "right";
export type LaneLine = "lineA" | "lineB";

/** Landmarks for one frame while still being edited; points are optional. */
export interface FrameBuffer {
  head?: Point;
  leftFoot?: Point;
  rightFoot?: Point;
  leftContact: boolean;
  rightContact: boolean;
}

export interface SequenceMeta {
  personId: number;
  startFrame: number;
  endFrame: number;
  obstacleFrame: number;
  direction: Direction;
  outcome: Outcome;
}

/** Plain serializable session state (see storage.ts for persistence). */
export interface SessionState {
  videoId: string;
  frameRate: number;
  frameWidth: number;
  frameHeight: number;
  meta: SequenceMeta;
  /** frame index -> partial landmark buffer */
  frames: Record<number, FrameBuffer>;
  lanes: { lineA: Point[]; lineB: Point[] }; // 0..2 clicked points each
}

export function emptyFrameBuffer(): FrameBuffer {
  return { leftContact: false, rightContact: false };
}

function clone<T>(value: T): T {
  return JSON.parse(JSON.stringify(value)) as T;
}

export function defaultState(
  videoId: string,
  frameWidth: number,
  frameHeight: number,
  frameRate = 25
): SessionState {
  return {
    videoId,
    frameRate,
    frameWidth,
    frameHeight,
    meta: {
      personId: 1,
      startFrame: 0,
      endFrame: 0,
      obstacleFrame: 0,
      direction: "leftToRight",
      outcome: "NoFall",
    },
    frames: {},
    lanes: { lineA: [], lineB: [] },
  };
}

export class AnnotationSession {
  private state: SessionState;
  private undoStack: SessionState[] = [];
  private redoStack: SessionState[] = [];
  private dirty = false;

  constructor(state: SessionState) {
    this.state = clone(state);
  }

  /** Read-only view of the current state (do not mutate). */
  get current(): SessionState {
    return this.state;
  }

  get isDirty(): boolean {
    return this.dirty;
  }

  /** Mark the buffer as persisted (after autosave or export). */
  markSaved(): void {
    this.dirty = false;
  }

  snapshot(): SessionState {
    return clone(this.state);
  }

  private apply(mutate: (state: SessionState) => void): void {
    this.undoStack.push(clone(this.state));
    this.redoStack = [];
    mutate(this.state);
    this.dirty = true;
  }

  undo(): boolean {
    const prev = this.undoStack.pop();
    if (prev === undefined) return false;
    this.redoStack.push(this.state);
    this.state = prev;
    this.dirty = true;
    return true;
  }

  redo(): boolean {
    const next = this.redoStack.pop();
    if (next === undefined) return false;
    this.undoStack.push(this.state);
    this.state = next;
    this.dirty = true;
    return true;
  }

  /** Clamp a click into the frame's pixel bounds. */
  private clampPoint(p: Point): Point {
    return {
      x: Math.min(Math.max(p.x, 0), this.state.frameWidth),
      y: Math.min(Math.max(p.y, 0), this.state.frameHeight),
    };
  }

  private buffer(state: SessionState, frame: number): FrameBuffer {
    let buf = state.frames[frame];
    if (buf === undefined) {
      buf = emptyFrameBuffer();
      state.frames[frame] = buf;
    }
    return buf;
  }

  /** Place (or re-place) one landmark on a frame; re-click replaces. */
  placeLandmark(frame: number, kind: LandmarkKind, point: Point): void {
    const clamped = this.clampPoint(point);
    this.apply((state) => {
      this.buffer(state, frame)[kind] = clamped;
    });
  }

  toggleContact(frame: number, side: FootSide): void {
    this.apply((state) => {
      const buf = this.buffer(state, frame);
      if (side === "left") buf.leftContact = !buf.leftContact;
      else buf.rightContact = !buf.rightContact;
    });
  }

  /**
   * Copy the previous frame's landmarks onto `frame` as a starting guess.
   * Does nothing when the previous frame has no buffer.
   */
  copyForward(frame: number): boolean {
    const prev = this.state.frames[frame - 1];
    if (prev === undefined) return false;
    const copied = clone(prev);
    this.apply((state) => {
      state.frames[frame] = copied;
    });
    return true;
  }

  clearFrame(frame: number): void {
    this.apply((state) => {
      delete state.frames[frame];
    });
  }

  setMeta(patch: Partial<SequenceMeta>): void {
    this.apply((state) => {
      Object.assign(state.meta, patch);
    });
  }

  setFrameRate(frameRate: number): void {
    if (!(frameRate > 0)) {
      throw new RangeError(`frameRate must be > 0, got ${frameRate}`);
    }
    this.apply((state) => {
      state.frameRate = frameRate;
    });
  }

  /** Append a lane-calibration click; the third click restarts the line. */
  addLanePoint(line: LaneLine, point: Point): void {
    const clamped = this.clampPoint(point);
    this.apply((state) => {
      const pts = state.lanes[line];
      if (pts.length >= 2) pts.length = 0;
      pts.push(clamped);
    });
  }
}
