"""Gait feature extraction from annotated walks.

Two features are computed per person, both restricted to the frames
before the obstacle: the average stride length L (mean distance between
chronologically successive footfall locations of either foot, in
rectified top-view pixels) and the head-motion range H (max minus min of
the rectified side-view vertical head coordinate, directly in percent of
body height because the side-view rectangle is 100 units tall).
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .errors import InsufficientFrames, InsufficientStances, NoStancesFound
from .geometry import (
    HomographyMatrix,
    Point2,
    SideViewQuad,
    apply_homography_many,
    side_view_homography,
)
from .signal import Series1D, gaussian_smooth, stance_median

DEFAULT_SMOOTHING_SIGMA = 2.0


class Foot(enum.Enum):
    LEFT = "left"
    RIGHT = "right"


class Outcome(enum.Enum):
    FALL = "Fall"
    NO_FALL = "NoFall"

    @property
    def label(self) -> int:
        return 1 if self is Outcome.FALL else -1


class Direction(enum.Enum):
    LEFT_TO_RIGHT = "leftToRight"
    RIGHT_TO_LEFT = "rightToLeft"


@dataclass(frozen=True)
class FrameLandmarks:
    frame: int
    head: Point2
    left_foot: Point2
    right_foot: Point2
    left_contact: bool
    right_contact: bool

    def __post_init__(self):
        if self.frame < 0:
            raise ValueError(f"frame index must be >= 0, got {self.frame}")
        for p in (self.head, self.left_foot, self.right_foot):
            if not (math.isfinite(p[0]) and math.isfinite(p[1])):
                raise ValueError("landmark coordinates must be finite")

    def foot(self, which: Foot) -> Point2:
        return self.left_foot if which is Foot.LEFT else self.right_foot

    def contact(self, which: Foot) -> bool:
        return self.left_contact if which is Foot.LEFT else self.right_contact


@dataclass(frozen=True)
class WalkSequence:
    person_id: int
    start_frame: int
    end_frame: int
    obstacle_frame: int
    direction: Direction
    outcome: Outcome
    frames: tuple[FrameLandmarks, ...]

    def __post_init__(self):
        # obstacle_frame == end_frame + 1 means the whole walk precedes
        # the hazard (first frame at/after the hazard is past the walk).
        if not (self.start_frame <= self.obstacle_frame <= self.end_frame + 1):
            raise ValueError(
                f"obstacleFrame {self.obstacle_frame} outside "
                f"[{self.start_frame}, {self.end_frame + 1}]"
            )
        # An empty frame list is a metadata-only sequence (outcome and
        # frame bounds known, raw landmarks not bundled).
        if self.frames:
            expected = range(self.start_frame, self.end_frame + 1)
            got = [f.frame for f in self.frames]
            if got != list(expected):
                raise ValueError(
                    f"frames must cover [{self.start_frame}, "
                    f"{self.end_frame}] contiguously"
                )
        object.__setattr__(self, "frames", tuple(self.frames))


@dataclass(frozen=True)
class Stance:
    """Maximal run of consecutive ground-contact frames for one foot."""

    foot: Foot
    first_frame: int
    last_frame: int
    footfall: Point2  # median rectified top-view position


@dataclass(frozen=True)
class GaitFeatures:
    stride_length: float  # L, rectified top-view pixels
    head_range: float  # H, percent of body height
    stride_count: int

    def as_vector(self) -> np.ndarray:
        return np.array([self.stride_length, self.head_range])


def _contact_runs(walk: WalkSequence, foot: Foot) -> list[tuple[int, int]]:
    runs = []
    start = None
    for lm in walk.frames:
        if lm.contact(foot):
            if start is None:
                start = lm.frame
        elif start is not None:
            runs.append((start, lm.frame - 1))
            start = None
    if start is not None:
        runs.append((start, walk.end_frame))
    return runs


def extract_stances(
    walk: WalkSequence, h_top: HomographyMatrix
) -> list[Stance]:
    """Pre-obstacle footfalls, rectified to the top view.

    A stance counts as before the obstacle iff its first frame precedes
    obstacle_frame.  Foot points are rectified per frame, then reduced to
    their component-wise median.
    """
    stances = []
    for foot in (Foot.LEFT, Foot.RIGHT):
        for first, last in _contact_runs(walk, foot):
            if first >= walk.obstacle_frame:
                continue
            pts = [
                lm.foot(foot)
                for lm in walk.frames
                if first <= lm.frame <= last
            ]
            rectified = apply_homography_many(h_top, pts)
            footfall = stance_median([Point2(*p) for p in rectified])
            stances.append(Stance(foot, first, last, footfall))
    if not stances:
        raise NoStancesFound(
            f"no ground-contact frames before the obstacle "
            f"(person {walk.person_id})"
        )
    return sorted(stances, key=lambda s: (s.first_frame, s.foot.value))


def average_stride_length(stances: list[Stance]) -> tuple[float, int]:
    """Mean distance between successive footfalls of either foot."""
    if len(stances) < 2:
        raise InsufficientStances(
            f"need at least 2 stances, got {len(stances)}"
        )
    pts = np.asarray([s.footfall for s in stances])
    gaps = np.linalg.norm(np.diff(pts, axis=0), axis=1)
    return float(gaps.mean()), len(gaps)


def side_view_quad(walk: WalkSequence) -> SideViewQuad:
    """Head and mean-feet corners at the first and last frame of the walk."""
    first, last = walk.frames[0], walk.frames[-1]

    def feet_mean(lm: FrameLandmarks) -> Point2:
        return Point2(
            0.5 * (lm.left_foot.x + lm.right_foot.x),
            0.5 * (lm.left_foot.y + lm.right_foot.y),
        )

    return SideViewQuad(
        head_start=first.head,
        head_end=last.head,
        feet_start=feet_mean(first),
        feet_end=feet_mean(last),
    )


def head_motion_range(
    walk: WalkSequence,
    h_side: HomographyMatrix,
    sigma: float = DEFAULT_SMOOTHING_SIGMA,
) -> float:
    """Range of rectified vertical head motion, percent of body height.

    Head x/y series are Gaussian-smoothed in image coordinates, then
    rectified with the side-view homography; H is the max minus min of
    the rectified vertical over the frames up to the obstacle.
    """
    frames = [lm for lm in walk.frames if lm.frame <= walk.obstacle_frame]
    if len(frames) < 2:
        raise InsufficientFrames(
            f"need at least 2 pre-obstacle frames, got {len(frames)}",
            person_id=walk.person_id,
        )
    xs = Series1D(tuple(lm.head.x for lm in frames), frames[0].frame)
    ys = Series1D(tuple(lm.head.y for lm in frames), frames[0].frame)
    sx = gaussian_smooth(xs, sigma).values
    sy = gaussian_smooth(ys, sigma).values
    rectified = apply_homography_many(h_side, list(zip(sx, sy)))
    vertical = rectified[:, 1]
    return float(vertical.max() - vertical.min())


def extract_features(
    walk: WalkSequence,
    h_top: HomographyMatrix,
    sigma: float = DEFAULT_SMOOTHING_SIGMA,
) -> GaitFeatures:
    """Both gait features for one walk; errors carry the person id."""
    try:
        stances = extract_stances(walk, h_top)
        stride, count = average_stride_length(stances)
    except (NoStancesFound, InsufficientStances) as exc:
        raise InsufficientStances(
            f"person {walk.person_id}: {exc}", person_id=walk.person_id
        ) from exc
    h_side = side_view_homography(side_view_quad(walk))
    head_range = head_motion_range(walk, h_side, sigma)
    return GaitFeatures(stride, head_range, count)
