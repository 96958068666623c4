"""Batch orchestration: extraction over a document, classification, outputs.

The top-view homography is built once from the document's lane
calibration and reused for every sequence; persons with too little
pre-obstacle data are reported as skipped rather than aborting the batch.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from xml.sax.saxutils import escape

from .annotations import AnnotationDocument
from .classify import LoocvReport, evaluate
from .errors import GaitscopeError
from .fixtures import FeatureRow, FeatureTable
from .gait import (
    extract_features,
    extract_stances,
    side_view_quad,
)
from .geometry import (
    apply_homography_many,
    side_view_homography,
    top_view_homography,
)
from .signal import Series1D, gaussian_smooth


@dataclass(frozen=True)
class ExtractionResult:
    table: FeatureTable
    skipped: tuple[tuple[int, str], ...]  # (personId, reason)


def run_extract(doc: AnnotationDocument) -> ExtractionResult:
    """Gait features for every sequence in the document."""
    h_top = top_view_homography(doc.lane_calibration)
    rows = []
    skipped = []
    for walk in sorted(doc.sequences, key=lambda s: s.person_id):
        if not walk.frames:
            skipped.append((walk.person_id, "no raw landmark frames"))
            continue
        try:
            features = extract_features(walk, h_top)
        except GaitscopeError as exc:
            skipped.append((walk.person_id, str(exc)))
            continue
        rows.append(
            FeatureRow(
                walk.person_id,
                features.stride_length,
                features.head_range,
                walk.outcome,
                features.stride_count,
            )
        )
    return ExtractionResult(FeatureTable(tuple(rows)), tuple(skipped))


def run_classify(
    table: FeatureTable,
    method: str,
    scaling: str | None = None,
    C: float = 1.0,
    k: int = 3,
) -> LoocvReport:
    """Leave-one-out evaluation of the feature table."""
    return evaluate(table.to_samples(), method, scaling=scaling, C=C, k=k)


def rectified_tracks(doc: AnnotationDocument) -> tuple[str, str]:
    """(footfalls CSV, head tracks CSV) in rectified coordinates."""
    h_top = top_view_homography(doc.lane_calibration)
    foot_buf = io.StringIO()
    head_buf = io.StringIO()
    foot_csv = csv.writer(foot_buf, lineterminator="\n")
    head_csv = csv.writer(head_buf, lineterminator="\n")
    foot_csv.writerow(
        ["personId", "stanceIndex", "foot", "firstFrame", "lastFrame",
         "x", "y"]
    )
    head_csv.writerow(["personId", "frame", "vertical"])
    for walk in sorted(doc.sequences, key=lambda s: s.person_id):
        if not walk.frames:
            continue
        for i, stance in enumerate(extract_stances(walk, h_top)):
            foot_csv.writerow(
                [walk.person_id, i, stance.foot.value, stance.first_frame,
                 stance.last_frame, repr(stance.footfall.x),
                 repr(stance.footfall.y)]
            )
        h_side = side_view_homography(side_view_quad(walk))
        frames = [f for f in walk.frames if f.frame <= walk.obstacle_frame]
        sx = gaussian_smooth(
            Series1D(tuple(f.head.x for f in frames)), 2.0
        ).values
        sy = gaussian_smooth(
            Series1D(tuple(f.head.y for f in frames)), 2.0
        ).values
        rect = apply_homography_many(h_side, list(zip(sx, sy)))
        for f, v in zip(frames, rect[:, 1]):
            head_csv.writerow([walk.person_id, f.frame, repr(float(v))])
    return foot_buf.getvalue(), head_buf.getvalue()


def predictions_csv(report: LoocvReport) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["personId", "trueLabel", "predictedLabel", "score"])
    for r in report.per_person:
        writer.writerow(
            [r.person_id, r.true_label, r.predicted_label, repr(r.score)]
        )
    return buf.getvalue()


_SVG_SIZE = 400
_SVG_MARGIN = 50


def _svg_coord(fpr: float, tpr: float) -> tuple[float, float]:
    x = _SVG_MARGIN + fpr * _SVG_SIZE
    y = _SVG_MARGIN + (1.0 - tpr) * _SVG_SIZE
    return x, y


def roc_svg(report: LoocvReport) -> str:
    """ROC staircase as an SVG document with a fixed element structure.

    Contains, in order: an axes rectangle, the diagonal chance line
    (class "chance"), the ROC polyline (class "roc"), and a text element
    (class "auc-label") stating the AUC.
    """
    pts = " ".join(
        f"{x:.3f},{y:.3f}"
        for x, y in (_svg_coord(f, t) for f, t in report.roc_points)
    )
    x0, y0 = _svg_coord(0.0, 0.0)
    x1, y1 = _svg_coord(1.0, 1.0)
    side = _SVG_SIZE + 2 * _SVG_MARGIN
    title = escape(
        f"{report.method or 'classifier'} ({report.scaling} scaling)"
    )
    return f"""<svg xmlns="http://www.w3.org/2000/svg" width="{side}" height="{side}" viewBox="0 0 {side} {side}">
  <rect class="axes" x="{_SVG_MARGIN}" y="{_SVG_MARGIN}" width="{_SVG_SIZE}" height="{_SVG_SIZE}" fill="none" stroke="black"/>
  <line class="chance" x1="{x0}" y1="{y0}" x2="{x1}" y2="{y1}" stroke="gray" stroke-dasharray="4 4"/>
  <polyline class="roc" points="{pts}" fill="none" stroke="crimson" stroke-width="2"/>
  <text class="auc-label" x="{_SVG_MARGIN + 10}" y="{_SVG_MARGIN + 20}">AUC = {report.auc:.3f} ({title})</text>
  <text class="x-label" x="{side / 2}" y="{side - 10}" text-anchor="middle">False Positive Rate</text>
  <text class="y-label" x="15" y="{side / 2}" transform="rotate(-90 15 {side / 2})" text-anchor="middle">True Positive Rate</text>
</svg>
"""
