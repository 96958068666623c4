/**
 * Frame navigation: index clamping and frameRate-based time seeking.
 *
 * Browsers only expose time-based seeking on `<video>`, so frame indexing
 * maps an index to the middle of its display interval,
 * t = (frame + 0.5) / frameRate.  Caveats: this is only frame-exact when
 * the configured frame rate matches the container's true (constant) rate;
 * variable-frame-rate files and browser keyframe snapping can still land
 * on a neighbouring frame.  Seeking mid-interval at least avoids the
 * boundary rounding that plagues t = frame / frameRate exactly on a
 * frame boundary.
 */

export interface ClampResult {
  frame: number;
  /** True when the requested frame was out of range and got clamped. */
  clamped: boolean;
}

/** Clamp a frame index into [0, lastFrame]. */
export function clampFrame(frame: number, lastFrame: number): ClampResult {
  const target = Math.round(frame);
  const clamped = Math.min(Math.max(target, 0), Math.max(lastFrame, 0));
  return { frame: clamped, clamped: clamped !== target };
}

/** Step by a signed number of frames, clamping at the ends. */
export function stepFrame(
  current: number,
  delta: number,
  lastFrame: number
): ClampResult {
  return clampFrame(current + delta, lastFrame);
}

/** Seek time (seconds) for the middle of a frame's display interval. */
export function seekTimeForFrame(frame: number, frameRate: number): number {
  if (!(frameRate > 0)) {
    throw new RangeError(`frameRate must be > 0, got ${frameRate}`);
  }
  return (frame + 0.5) / frameRate;
}

/** Frame index whose display interval contains the given time. */
export function frameForTime(time: number, frameRate: number): number {
  if (!(frameRate > 0)) {
    throw new RangeError(`frameRate must be > 0, got ${frameRate}`);
  }
  // The epsilon absorbs float noise when time sits exactly on a boundary.
  return Math.max(0, Math.floor(time * frameRate + 1e-6));
}

/** Last addressable frame index for a video duration at a frame rate. */
export function lastFrameForDuration(
  duration: number,
  frameRate: number
): number {
  return Math.max(0, Math.ceil(duration * frameRate) - 1);
}
