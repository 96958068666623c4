"""Trajectory conditioning: Gaussian smoothing and per-stance medians.

The Gaussian kernel is truncated at radius ceil(3*sigma) and renormalized
at the series boundaries instead of padding, so no samples are invented
beyond the first/last annotated frame.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import EmptySeries, EmptyStance, NonpositiveSigma
from .geometry import Point2


@dataclass(frozen=True)
class Series1D:
    """One scalar sample per frame, starting at frame_offset."""

    values: tuple[float, ...]
    frame_offset: int = 0

    def __post_init__(self):
        vals = tuple(float(v) for v in self.values)
        if not vals:
            raise EmptySeries("series must contain at least one sample")
        if not all(math.isfinite(v) for v in vals):
            raise ValueError("series values must be finite")
        object.__setattr__(self, "values", vals)


def gaussian_kernel(sigma: float) -> np.ndarray:
    """Symmetric truncated Gaussian weights, radius ceil(3*sigma), sum 1."""
    if sigma <= 0:
        raise NonpositiveSigma(f"sigma must be positive, got {sigma}")
    radius = math.ceil(3.0 * sigma)
    offsets = np.arange(-radius, radius + 1)
    w = np.exp(-0.5 * (offsets / sigma) ** 2)
    return w / w.sum()


def smoothing_weights(n: int, sigma: float) -> np.ndarray:
    """Per-output-index weight rows (n x n); rows renormalized to sum 1."""
    kernel = gaussian_kernel(sigma)
    radius = len(kernel) // 2
    weights = np.zeros((n, n))
    for i in range(n):
        lo = max(0, i - radius)
        hi = min(n, i + radius + 1)
        row = kernel[lo - i + radius : hi - i + radius]
        weights[i, lo:hi] = row / row.sum()
    return weights


def gaussian_smooth(s: Series1D, sigma: float) -> Series1D:
    """Gaussian-weighted moving average with boundary renormalization.

    Evaluated in deviation form, out_i = x_i + sum_j w_ij (x_j - x_i),
    which is algebraically identical (rows sum to 1) but keeps constant
    series exactly unchanged in floating point.
    """
    x = np.asarray(s.values)
    w = smoothing_weights(len(x), sigma)
    deviations = x[None, :] - x[:, None]
    smoothed = x + (w * deviations).sum(axis=1)
    return Series1D(tuple(smoothed), s.frame_offset)


def stance_median(points: list[Point2]) -> Point2:
    """Component-wise median of the foot positions over one stance."""
    if not points:
        raise EmptyStance("stance must contain at least one point")
    pts = np.asarray([(p[0], p[1]) for p in points], dtype=float)
    med = np.median(pts, axis=0)
    return Point2(float(med[0]), float(med[1]))
