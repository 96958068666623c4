/**
 * Browser glue: video scrubbing, canvas overlay, keyboard-first editing.
 *
 * All annotation logic lives in session/navigation/exporter/storage; this
 * module only wires them to the DOM.  Keyboard map:
 *
 *   ArrowLeft / ArrowRight   previous / next frame
 *   g                        jump to frame (prompt)
 *   1 / 2 / 3                select head / left foot / right foot
 *   q / w                    toggle left / right ground contact
 *   c                        copy previous frame's landmarks forward
 *   a / b                    lane-line click mode (line A / line B)
 *   z / y                    undo / redo
 *   e                        export annotation document
 */

import {
  clampFrame,
  frameForTime,
  lastFrameForDuration,
  seekTimeForFrame,
  stepFrame,
} from "./navigation.js";
import type { LandmarkKind, LaneLine } from "./session.js";
import { AnnotationSession, defaultState } from "./session.js";
import { ExportBlockedError, exportDocument } from "./exporter.js";
import { loadSession, saveSession } from "./storage.js";
import type { Point } from "./schema.js";

const LANDMARK_COLORS: Record<LandmarkKind, string> = {
  head: "#e6194b",
  leftFoot: "#3cb44b",
  rightFoot: "#4363d8",
};

type ClickMode = LandmarkKind | LaneLine;

export function boot(root: Document = document): void {
  const video = root.getElementById("video") as HTMLVideoElement;
  const overlay = root.getElementById("overlay") as HTMLCanvasElement;
  const fileInput = root.getElementById("file") as HTMLInputElement;
  const frameLabel = root.getElementById("frame-label") as HTMLElement;
  const notice = root.getElementById("notice") as HTMLElement;
  const metaForm = root.getElementById("meta") as HTMLFormElement;
  const exportBtn = root.getElementById("export") as HTMLButtonElement;

  let session: AnnotationSession | null = null;
  let currentFrame = 0;
  let lastFrame = 0;
  let clickMode: ClickMode = "head";

  function showNotice(text: string): void {
    notice.textContent = text;
    if (text) window.setTimeout(() => (notice.textContent = ""), 2500);
  }

  function autosave(): void {
    if (!session) return;
    saveSession(window.localStorage, session.snapshot());
    session.markSaved();
  }

  function redraw(): void {
    const ctx = overlay.getContext("2d");
    if (!ctx || !session) return;
    ctx.clearRect(0, 0, overlay.width, overlay.height);
    const state = session.current;

    for (const line of ["lineA", "lineB"] as const) {
      const pts = state.lanes[line];
      ctx.strokeStyle = line === "lineA" ? "#ffe119" : "#f58231";
      ctx.fillStyle = ctx.strokeStyle;
      for (const p of pts) drawDot(ctx, p, 3);
      const [p0, p1] = pts;
      if (p0 !== undefined && p1 !== undefined) {
        ctx.beginPath();
        ctx.moveTo(p0.x, p0.y);
        ctx.lineTo(p1.x, p1.y);
        ctx.stroke();
      }
    }

    const buf = state.frames[currentFrame];
    if (buf) {
      for (const kind of Object.keys(LANDMARK_COLORS) as LandmarkKind[]) {
        const p = buf[kind];
        if (p) {
          ctx.fillStyle = LANDMARK_COLORS[kind];
          drawDot(ctx, p, 5);
        }
      }
    }
    const contacts = buf
      ? `L:${buf.leftContact ? "▼" : "–"} R:${buf.rightContact ? "▼" : "–"}`
      : "unannotated";
    frameLabel.textContent =
      `frame ${currentFrame}/${lastFrame}  [${clickMode}]  ${contacts}` +
      (session.isDirty ? " *" : "");
  }

  function drawDot(ctx: CanvasRenderingContext2D, p: Point, r: number): void {
    ctx.beginPath();
    ctx.arc(p.x, p.y, r, 0, 2 * Math.PI);
    ctx.fill();
  }

  function seekTo(frame: number): void {
    if (!session) return;
    const result = clampFrame(frame, lastFrame);
    if (result.clamped) showNotice(`frame clamped to ${result.frame}`);
    currentFrame = result.frame;
    video.currentTime = seekTimeForFrame(
      currentFrame,
      session.current.frameRate
    );
    redraw();
  }

  fileInput.addEventListener("change", () => {
    const file = fileInput.files?.[0];
    if (!file) return;
    video.src = URL.createObjectURL(file);
    video.addEventListener(
      "loadedmetadata",
      () => {
        overlay.width = video.videoWidth;
        overlay.height = video.videoHeight;
        const videoId = `${file.name}:${file.size}`;
        const restored = loadSession(window.localStorage, videoId);
        session = new AnnotationSession(
          restored ?? defaultState(videoId, video.videoWidth, video.videoHeight)
        );
        lastFrame = lastFrameForDuration(
          video.duration,
          session.current.frameRate
        );
        if (restored) showNotice("session restored from autosave");
        seekTo(0);
      },
      { once: true }
    );
  });

  overlay.addEventListener("click", (event) => {
    if (!session) return;
    const rect = overlay.getBoundingClientRect();
    const point: Point = {
      x: ((event.clientX - rect.left) / rect.width) * overlay.width,
      y: ((event.clientY - rect.top) / rect.height) * overlay.height,
    };
    if (clickMode === "lineA" || clickMode === "lineB") {
      session.addLanePoint(clickMode, point);
    } else {
      session.placeLandmark(currentFrame, clickMode, point);
    }
    autosave();
    redraw();
  });

  root.addEventListener("keydown", (event) => {
    if (!session) return;
    if ((event.target as HTMLElement).tagName === "INPUT") return;
    const key = event.key;
    if (key === "ArrowLeft" || key === "ArrowRight") {
      const delta = key === "ArrowLeft" ? -1 : 1;
      seekTo(stepFrame(currentFrame, delta, lastFrame).frame);
    } else if (key === "g") {
      const answer = window.prompt("jump to frame:");
      if (answer !== null) seekTo(Number(answer));
    } else if (key === "1") clickMode = "head";
    else if (key === "2") clickMode = "leftFoot";
    else if (key === "3") clickMode = "rightFoot";
    else if (key === "a") clickMode = "lineA";
    else if (key === "b") clickMode = "lineB";
    else if (key === "q" || key === "w") {
      session.toggleContact(currentFrame, key === "q" ? "left" : "right");
      autosave();
    } else if (key === "c") {
      if (!session.copyForward(currentFrame)) {
        showNotice("previous frame has no landmarks to copy");
      }
      autosave();
    } else if (key === "z") {
      if (!session.undo()) showNotice("nothing to undo");
      autosave();
    } else if (key === "y") {
      if (!session.redo()) showNotice("nothing to redo");
      autosave();
    } else if (key === "e") {
      exportBtn.click();
      return;
    } else {
      return;
    }
    event.preventDefault();
    redraw();
  });

  video.addEventListener("seeked", () => {
    if (!session) return;
    currentFrame = clampFrame(
      frameForTime(video.currentTime, session.current.frameRate),
      lastFrame
    ).frame;
    redraw();
  });

  metaForm.addEventListener("change", () => {
    if (!session) return;
    const data = new FormData(metaForm);
    session.setMeta({
      personId: Number(data.get("personId")),
      startFrame: Number(data.get("startFrame")),
      endFrame: Number(data.get("endFrame")),
      obstacleFrame: Number(data.get("obstacleFrame")),
      direction: data.get("direction") as "leftToRight" | "rightToLeft",
      outcome: data.get("outcome") as "Fall" | "NoFall",
    });
    const rate = Number(data.get("frameRate"));
    if (rate > 0 && rate !== session.current.frameRate) {
      session.setFrameRate(rate);
      lastFrame = lastFrameForDuration(video.duration, rate);
    }
    autosave();
    redraw();
  });

  exportBtn.addEventListener("click", () => {
    if (!session) return;
    try {
      const text = exportDocument(session.current);
      const blob = new Blob([text], { type: "application/json" });
      const link = root.createElement("a");
      link.href = URL.createObjectURL(blob);
      link.download = "annotations.json";
      link.click();
      session.markSaved();
      redraw();
    } catch (err) {
      if (err instanceof ExportBlockedError) {
        window.alert(err.message);
      } else {
        throw err;
      }
    }
  });
}
