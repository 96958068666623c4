"""Annotation document model, parser, and emitter.

The on-disk format is a single UTF-8 JSON document (format version 1)
carrying the lane calibration, video metadata, and every annotated walk
with its per-frame landmarks.  The parser validates the full schema and
every domain invariant, reporting failures with a JSON-path-style
location; ``parse_annotations(emit_annotations(doc))`` round-trips every
valid document.

Document grammar (all fields required unless noted):

    {
      "formatVersion": 1,
      "videoId": str,
      "frameRate": number > 0,
      "laneCalibration": {"lineA": [point, point], "lineB": [point, point]},
      "sequences": [
        {
          "personId": int,
          "startFrame": int, "endFrame": int, "obstacleFrame": int,
          "direction": "leftToRight" | "rightToLeft",
          "outcome": "Fall" | "NoFall",
          "frames": [              // may be empty: metadata-only sequence
            {
              "frame": int,
              "head": point, "leftFoot": point, "rightFoot": point,
              "leftContact": bool, "rightContact": bool
            }, ...
          ]
        }, ...
      ]
    }

where point is {"x": number, "y": number}.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

from .errors import AnnotationSyntaxError, InvariantViolation, SchemaError
from .gait import Direction, FrameLandmarks, Outcome, WalkSequence
from .geometry import LanePair, Point2

FORMAT_VERSION = 1


@dataclass(frozen=True)
class AnnotationDocument:
    video_id: str
    frame_rate: float
    lane_calibration: LanePair
    sequences: tuple[WalkSequence, ...]

    def __post_init__(self):
        if self.frame_rate <= 0:
            raise ValueError(f"frameRate must be > 0, got {self.frame_rate}")
        ids = [s.person_id for s in self.sequences]
        if len(ids) != len(set(ids)):
            raise ValueError("sequence personIds must be unique")
        object.__setattr__(self, "sequences", tuple(self.sequences))


def _require(obj, field: str, kind, path: str):
    if not isinstance(obj, dict):
        raise SchemaError(f"expected an object, got {type(obj).__name__}", path)
    if field not in obj:
        raise SchemaError(f"missing required field '{field}'", path)
    value = obj[field]
    if kind is float:
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            raise SchemaError(f"'{field}' must be a number", path)
        return float(value)
    if kind is int:
        if isinstance(value, bool) or not isinstance(value, int):
            raise SchemaError(f"'{field}' must be an integer", path)
        return value
    if not isinstance(value, kind):
        raise SchemaError(
            f"'{field}' must be {kind.__name__}, "
            f"got {type(value).__name__}",
            path,
        )
    return value


def _no_extras(obj: dict, allowed: set, path: str):
    extras = set(obj) - allowed
    if extras:
        raise SchemaError(f"unexpected field '{sorted(extras)[0]}'", path)


def _parse_point(obj, path: str) -> Point2:
    x = _require(obj, "x", float, path)
    y = _require(obj, "y", float, path)
    _no_extras(obj, {"x", "y"}, path)
    if not (math.isfinite(x) and math.isfinite(y)):
        raise InvariantViolation("point coordinates must be finite", path)
    return Point2(x, y)


def _parse_line(obj, path: str) -> tuple[Point2, Point2]:
    if not isinstance(obj, list) or len(obj) != 2:
        raise SchemaError("must be a list of exactly 2 points", path)
    return (
        _parse_point(obj[0], f"{path}[0]"),
        _parse_point(obj[1], f"{path}[1]"),
    )


def _parse_frame(obj, path: str) -> FrameLandmarks:
    frame = _require(obj, "frame", int, path)
    head = _parse_point(_require(obj, "head", dict, path), f"{path}.head")
    left = _parse_point(
        _require(obj, "leftFoot", dict, path), f"{path}.leftFoot"
    )
    right = _parse_point(
        _require(obj, "rightFoot", dict, path), f"{path}.rightFoot"
    )
    left_contact = _require(obj, "leftContact", bool, path)
    right_contact = _require(obj, "rightContact", bool, path)
    _no_extras(
        obj,
        {"frame", "head", "leftFoot", "rightFoot", "leftContact",
         "rightContact"},
        path,
    )
    try:
        return FrameLandmarks(frame, head, left, right, left_contact,
                              right_contact)
    except ValueError as exc:
        raise InvariantViolation(str(exc), path) from exc


def _parse_sequence(obj, path: str) -> WalkSequence:
    person_id = _require(obj, "personId", int, path)
    start = _require(obj, "startFrame", int, path)
    end = _require(obj, "endFrame", int, path)
    obstacle = _require(obj, "obstacleFrame", int, path)
    direction = _require(obj, "direction", str, path)
    outcome = _require(obj, "outcome", str, path)
    frames_raw = _require(obj, "frames", list, path)
    _no_extras(
        obj,
        {"personId", "startFrame", "endFrame", "obstacleFrame", "direction",
         "outcome", "frames"},
        path,
    )
    try:
        direction = Direction(direction)
    except ValueError:
        raise SchemaError(
            f"'direction' must be one of "
            f"{[d.value for d in Direction]}, got {direction!r}",
            path,
        ) from None
    try:
        outcome = Outcome(outcome)
    except ValueError:
        raise SchemaError(
            f"'outcome' must be one of {[o.value for o in Outcome]}, "
            f"got {outcome!r}",
            path,
        ) from None
    frames = [
        _parse_frame(f, f"{path}.frames[{i}]")
        for i, f in enumerate(frames_raw)
    ]
    try:
        return WalkSequence(
            person_id, start, end, obstacle, direction, outcome, tuple(frames)
        )
    except ValueError as exc:
        raise InvariantViolation(str(exc), path) from exc


def parse_annotations(data: bytes | str) -> AnnotationDocument:
    """Parse and fully validate an annotation document."""
    if isinstance(data, bytes):
        try:
            data = data.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise AnnotationSyntaxError(f"not valid UTF-8: {exc}") from exc
    try:
        root = json.loads(data)
    except json.JSONDecodeError as exc:
        raise AnnotationSyntaxError(
            f"invalid JSON at line {exc.lineno}, column {exc.colno}: "
            f"{exc.msg}"
        ) from exc

    version = _require(root, "formatVersion", int, "$")
    if version != FORMAT_VERSION:
        raise SchemaError(
            f"unsupported formatVersion {version} (expected {FORMAT_VERSION})",
            "$",
        )
    video_id = _require(root, "videoId", str, "$")
    frame_rate = _require(root, "frameRate", float, "$")
    lanes_obj = _require(root, "laneCalibration", dict, "$")
    _no_extras(lanes_obj, {"lineA", "lineB"}, "$.laneCalibration")
    lanes = LanePair(
        _parse_line(
            _require(lanes_obj, "lineA", list, "$.laneCalibration"),
            "$.laneCalibration.lineA",
        ),
        _parse_line(
            _require(lanes_obj, "lineB", list, "$.laneCalibration"),
            "$.laneCalibration.lineB",
        ),
    )
    sequences_raw = _require(root, "sequences", list, "$")
    _no_extras(
        root,
        {"formatVersion", "videoId", "frameRate", "laneCalibration",
         "sequences"},
        "$",
    )
    sequences = [
        _parse_sequence(s, f"$.sequences[{i}]")
        for i, s in enumerate(sequences_raw)
    ]
    try:
        return AnnotationDocument(video_id, frame_rate, lanes, tuple(sequences))
    except ValueError as exc:
        raise InvariantViolation(str(exc), "$") from exc


def _point_obj(p: Point2) -> dict:
    return {"x": p.x, "y": p.y}


def document_to_obj(doc: AnnotationDocument) -> dict:
    return {
        "formatVersion": FORMAT_VERSION,
        "videoId": doc.video_id,
        "frameRate": doc.frame_rate,
        "laneCalibration": {
            "lineA": [_point_obj(p) for p in doc.lane_calibration.line_a],
            "lineB": [_point_obj(p) for p in doc.lane_calibration.line_b],
        },
        "sequences": [
            {
                "personId": s.person_id,
                "startFrame": s.start_frame,
                "endFrame": s.end_frame,
                "obstacleFrame": s.obstacle_frame,
                "direction": s.direction.value,
                "outcome": s.outcome.value,
                "frames": [
                    {
                        "frame": f.frame,
                        "head": _point_obj(f.head),
                        "leftFoot": _point_obj(f.left_foot),
                        "rightFoot": _point_obj(f.right_foot),
                        "leftContact": f.left_contact,
                        "rightContact": f.right_contact,
                    }
                    for f in s.frames
                ],
            }
            for s in doc.sequences
        ],
    }


def emit_annotations(doc: AnnotationDocument) -> str:
    """Serialize a document; inverse of parse_annotations."""
    return json.dumps(document_to_obj(doc), indent=2) + "\n"
