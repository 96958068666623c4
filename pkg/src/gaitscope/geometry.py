"""Planar homography estimation and application.

Homographies are estimated with the normalized direct linear transform
(Hartley-style isotropic normalization of both point sets, smallest
singular vector of the stacked constraint matrix, denormalize).  Two
scene-specific constructors build the synthetic top view (from a pair of
lane markings that must come out parallel) and the per-person side view
(head/feet quadrilateral mapped to a rectangle of height 100, so that
rectified vertical coordinates read directly as percent of body height).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, NamedTuple, Sequence

import numpy as np

from .errors import (
    DegenerateConfiguration,
    PointAtInfinity,
    SingularMatrix,
    TooFewCorrespondences,
)

# Rectified side-view rectangle height: verticals read directly as % of height.
SIDE_VIEW_HEIGHT = 100.0

_DEGENERACY_RATIO = 1e-10  # second-smallest / largest singular value
_INFINITY_TOL = 1e-12


class Point2(NamedTuple):
    """Image point; y grows downward per image convention."""

    x: float
    y: float


class Correspondence(NamedTuple):
    src: Point2
    dst: Point2


@dataclass(frozen=True)
class LanePair:
    """Endpoints of the two lane markings used for the top-view homography."""

    line_a: tuple[Point2, Point2]
    line_b: tuple[Point2, Point2]


@dataclass(frozen=True)
class SideViewQuad:
    """Head/feet corners bounding one person's walk in the image."""

    head_start: Point2
    head_end: Point2
    feet_start: Point2
    feet_end: Point2


@dataclass(frozen=True)
class HomographyMatrix:
    """3x3 projective map, stored in canonical normalization.

    The matrix is scaled so the bottom-right entry equals 1 when it is
    nonzero, otherwise to unit Frobenius norm; this makes equality
    comparisons well-defined.
    """

    m: np.ndarray = field(repr=False)

    def __post_init__(self):
        a = np.asarray(self.m, dtype=float)
        if a.shape != (3, 3) or not np.all(np.isfinite(a)):
            raise ValueError("homography must be a finite 3x3 matrix")
        a = _canonicalize(a)
        if abs(np.linalg.det(a)) < 1e-12:
            raise SingularMatrix("homography matrix is singular")
        object.__setattr__(self, "m", a)
        self.m.setflags(write=False)

    @classmethod
    def identity(cls) -> "HomographyMatrix":
        return cls(np.eye(3))


def _canonicalize(a: np.ndarray) -> np.ndarray:
    if abs(a[2, 2]) > 0.0:
        return a / a[2, 2]
    return a / np.linalg.norm(a)


def _as_xy(points) -> np.ndarray:
    pts = np.asarray([(p[0], p[1]) for p in points], dtype=float)
    if not np.all(np.isfinite(pts)):
        raise ValueError("points must be finite")
    return pts


def _normalization(pts: np.ndarray) -> np.ndarray:
    """Similarity moving the centroid to the origin, mean radius to sqrt(2)."""
    centroid = pts.mean(axis=0)
    mean_dist = np.mean(np.linalg.norm(pts - centroid, axis=1))
    scale = np.sqrt(2.0) / mean_dist if mean_dist > 0 else 1.0
    return np.array([
        [scale, 0.0, -scale * centroid[0]],
        [0.0, scale, -scale * centroid[1]],
        [0.0, 0.0, 1.0],
    ])


def estimate_homography(pairs: Sequence[Correspondence]) -> HomographyMatrix:
    """Least-squares homography from >= 4 point correspondences (DLT).

    Raises TooFewCorrespondences with fewer than 4 pairs and
    DegenerateConfiguration when the correspondences do not determine a
    unique map (collinear or duplicated points).
    """
    if len(pairs) < 4:
        raise TooFewCorrespondences(
            f"need at least 4 correspondences, got {len(pairs)}"
        )
    src = _as_xy([c.src for c in pairs])
    dst = _as_xy([c.dst for c in pairs])

    t_src = _normalization(src)
    t_dst = _normalization(dst)
    ns = _apply_matrix(t_src, src)
    nd = _apply_matrix(t_dst, dst)

    rows = []
    for (x, y), (u, v) in zip(ns, nd):
        rows.append([-x, -y, -1.0, 0.0, 0.0, 0.0, u * x, u * y, u])
        rows.append([0.0, 0.0, 0.0, -x, -y, -1.0, v * x, v * y, v])
    a = np.asarray(rows)

    _, s, vt = np.linalg.svd(a)
    if s[-2] < _DEGENERACY_RATIO * s[0]:
        raise DegenerateConfiguration(
            "correspondences do not determine a unique homography"
        )
    h_norm = vt[-1].reshape(3, 3)
    h = np.linalg.inv(t_dst) @ h_norm @ t_src
    try:
        return HomographyMatrix(h)
    except SingularMatrix as exc:
        raise DegenerateConfiguration(str(exc)) from exc


def _apply_matrix(m: np.ndarray, pts: np.ndarray) -> np.ndarray:
    homog = np.column_stack([pts, np.ones(len(pts))]) @ m.T
    w = homog[:, 2]
    if np.any(np.abs(w) <= _INFINITY_TOL):
        raise PointAtInfinity("point maps to the line at infinity")
    return homog[:, :2] / w[:, None]


def apply_homography(h: HomographyMatrix, p) -> Point2:
    """Map a single point through the homography."""
    out = _apply_matrix(h.m, _as_xy([p]))
    return Point2(float(out[0, 0]), float(out[0, 1]))


def apply_homography_many(h: HomographyMatrix, points) -> np.ndarray:
    """Vectorized apply; returns an (n, 2) array."""
    return _apply_matrix(h.m, _as_xy(points))


def invert(h: HomographyMatrix) -> HomographyMatrix:
    try:
        inv = np.linalg.inv(h.m)
    except np.linalg.LinAlgError as exc:  # pragma: no cover - guarded by type
        raise SingularMatrix("cannot invert singular homography") from exc
    return HomographyMatrix(inv)


def _segment(points: tuple[Point2, Point2]) -> np.ndarray:
    seg = _as_xy(points)
    if np.linalg.norm(seg[1] - seg[0]) < 1e-12:
        raise DegenerateConfiguration("lane line endpoints coincide")
    return seg


def top_view_homography(lanes: LanePair) -> HomographyMatrix:
    """Homography sending the two lane markings to parallel vertical lines.

    The lane quadrilateral is mapped to a rectangle whose height is the
    mean of the two segment pixel lengths and whose width is the distance
    between the segment midpoints, keeping rectified units commensurate
    with source pixels.
    """
    a = _segment(lanes.line_a)
    b = _segment(lanes.line_b)

    # Pair lane-B endpoints with the nearer lane-A endpoints so the
    # resulting quadrilateral is not self-crossing.
    straight = np.linalg.norm(a[0] - b[0]) + np.linalg.norm(a[1] - b[1])
    crossed = np.linalg.norm(a[0] - b[1]) + np.linalg.norm(a[1] - b[0])
    if crossed < straight:
        b = b[::-1]

    height = 0.5 * (np.linalg.norm(a[1] - a[0]) + np.linalg.norm(b[1] - b[0]))
    width = np.linalg.norm(0.5 * (a[0] + a[1]) - 0.5 * (b[0] + b[1]))
    if width < 1e-12:
        raise DegenerateConfiguration("lane lines are identical")

    pairs = [
        Correspondence(Point2(*a[0]), Point2(0.0, 0.0)),
        Correspondence(Point2(*a[1]), Point2(0.0, height)),
        Correspondence(Point2(*b[0]), Point2(width, 0.0)),
        Correspondence(Point2(*b[1]), Point2(width, height)),
    ]
    return estimate_homography(pairs)


def _quad_area(pts: np.ndarray) -> float:
    x, y = pts[:, 0], pts[:, 1]
    return 0.5 * abs(np.dot(x, np.roll(y, -1)) - np.dot(y, np.roll(x, -1)))


def side_view_homography(quad: SideViewQuad) -> HomographyMatrix:
    """Map the walk's head/feet quadrilateral to an axis-aligned rectangle.

    The head edge lands at vertical coordinate 0 and the feet edge at
    SIDE_VIEW_HEIGHT; the width equals the pixel distance between the two
    feet corners.  Only vertical motion is meaningful in this view.
    """
    corners = _as_xy(
        [quad.head_start, quad.head_end, quad.feet_end, quad.feet_start]
    )
    scale = max(1.0, float(np.abs(corners).max()))
    if _quad_area(corners) < 1e-9 * scale * scale:
        raise DegenerateConfiguration("side-view quadrilateral is degenerate")

    width = np.linalg.norm(corners[2] - corners[3])
    pairs = [
        Correspondence(quad.head_start, Point2(0.0, 0.0)),
        Correspondence(quad.head_end, Point2(width, 0.0)),
        Correspondence(quad.feet_end, Point2(width, SIDE_VIEW_HEIGHT)),
        Correspondence(quad.feet_start, Point2(0.0, SIDE_VIEW_HEIGHT)),
    ]
    return estimate_homography(pairs)
