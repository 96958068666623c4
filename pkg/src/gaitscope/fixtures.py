"""Bundled study data: the published 14-person cohort.

Two fixture tiers ship with the package: the cohort metadata and feature
table below (authoritative, used by the classify command), and a fully
synthetic raw-landmark document with known ground truth (see
``gaitscope.synthetic``, used to exercise extraction end to end).
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass
from importlib import resources

from .annotations import AnnotationDocument
from .classify import LabeledSample
from .errors import SchemaError
from .gait import Direction, GaitFeatures, Outcome, WalkSequence
from .geometry import LanePair, Point2

# Per person: (id, start frame, end frame, direction, outcome,
#              steps before obstacle, frames before obstacle)
_COHORT_METADATA = (
    (1, 1, 54, "rightToLeft", "Fall", 2, 54),
    (2, 351, 385, "leftToRight", "Fall", 1, 35),
    (3, 1063, 1100, "leftToRight", "NoFall", 2, 38),
    (4, 1117, 1155, "leftToRight", "Fall", 2, 39),
    (5, 1600, 1608, "leftToRight", "Fall", 1, 9),
    (6, 2940, 2990, "leftToRight", "NoFall", 4, 51),
    (7, 3050, 3075, "rightToLeft", "NoFall", 1, 26),
    (8, 3241, 3285, "leftToRight", "NoFall", 2, 45),
    (9, 3340, 3368, "leftToRight", "Fall", 2, 29),
    (10, 3544, 3630, "leftToRight", "NoFall", 3, 87),
    (11, 3643, 3672, "leftToRight", "NoFall", 2, 30),
    (12, 3922, 3945, "leftToRight", "Fall", 2, 24),
    (13, 3957, 4013, "leftToRight", "NoFall", 3, 57),
    (14, 4080, 4110, "rightToLeft", "NoFall", 2, 31),
)

# Per person: (id, stride length L in rectified pixels, head range H in %)
_COHORT_FEATURES = (
    (1, 85.2, 7.6),
    (2, 81.9, 2.3),
    (3, 73.4, 7.1),
    (4, 86.0, 5.6),
    (5, 36.2, 2.1),
    (6, 114.9, 6.5),
    (7, 130.2, 7.1),
    (8, 115.8, 4.0),
    (9, 78.2, 2.9),
    (10, 97.9, 5.4),
    (11, 83.3, 3.1),
    (12, 101.1, 1.7),
    (13, 69.1, 6.4),
    (14, 80.0, 5.4),
)

FRAME_RATE = 25.0


@dataclass(frozen=True)
class FeatureRow:
    person_id: int
    stride_length: float
    head_range: float
    outcome: Outcome
    stride_count: int

    def __post_init__(self):
        if self.stride_length <= 0 or self.head_range < 0:
            raise ValueError("L must be > 0 and H >= 0")
        if self.stride_count < 1:
            raise ValueError("strideCount must be >= 1")


@dataclass(frozen=True)
class FeatureTable:
    rows: tuple[FeatureRow, ...]

    def __post_init__(self):
        ids = [r.person_id for r in self.rows]
        if len(ids) != len(set(ids)):
            raise ValueError("personIds must be unique")
        object.__setattr__(self, "rows", tuple(self.rows))

    def to_samples(self) -> list[LabeledSample]:
        return [
            LabeledSample(
                r.person_id,
                GaitFeatures(r.stride_length, r.head_range, r.stride_count),
                r.outcome.label,
            )
            for r in self.rows
        ]


def load_feature_fixture() -> FeatureTable:
    """The published 14-person feature table with outcomes."""
    meta = {m[0]: m for m in _COHORT_METADATA}
    rows = []
    for person_id, stride, head in _COHORT_FEATURES:
        _, _, _, _, outcome, steps, _ = meta[person_id]
        rows.append(
            FeatureRow(person_id, stride, head, Outcome(outcome), steps)
        )
    return FeatureTable(tuple(rows))


def load_cohort_document() -> AnnotationDocument:
    """The cohort as a metadata-only annotation document.

    Sequences carry frame bounds, directions, and outcomes but no raw
    landmarks (those accompany the original video, not the tables).  The
    lane calibration is a nominal placeholder.
    """
    sequences = []
    for person_id, start, end, direction, outcome, _, frames_before in (
        _COHORT_METADATA
    ):
        sequences.append(
            WalkSequence(
                person_id=person_id,
                start_frame=start,
                end_frame=end,
                obstacle_frame=start + frames_before,
                direction=Direction(direction),
                outcome=Outcome(outcome),
                frames=(),
            )
        )
    lanes = LanePair(
        (Point2(50.0, 120.0), Point2(10.0, 300.0)),
        (Point2(140.0, 125.0), Point2(130.0, 310.0)),
    )
    return AnnotationDocument("youtube-street-curb", FRAME_RATE, lanes,
                              tuple(sequences))


def _fixture_text(name: str) -> str:
    return (resources.files("gaitscope") / "fixtures" / name).read_text()


def load_cohort_json() -> str:
    """The cohort document serialized in the annotation format."""
    return _fixture_text("paper_cohort.json")


def load_synthetic_document() -> AnnotationDocument:
    """Bundled synthetic raw-landmark document with known ground truth."""
    from .annotations import parse_annotations

    return parse_annotations(_fixture_text("synthetic_walkers.json"))


def load_synthetic_truth() -> dict[int, dict]:
    """Expected features for the bundled synthetic document."""
    raw = json.loads(_fixture_text("synthetic_walkers_truth.json"))
    return {int(k): v for k, v in raw.items()}


CSV_COLUMNS = ("personId", "L", "H", "outcome", "strideCount")


def feature_table_to_csv(table: FeatureTable) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for r in table.rows:
        writer.writerow(
            [r.person_id, repr(r.stride_length), repr(r.head_range),
             r.outcome.value, r.stride_count]
        )
    return buf.getvalue()


def feature_table_from_csv(text: str) -> FeatureTable:
    reader = csv.reader(io.StringIO(text))
    try:
        header = next(reader)
    except StopIteration:
        raise SchemaError("empty feature CSV") from None
    if tuple(header) != CSV_COLUMNS:
        raise SchemaError(
            f"feature CSV header must be {','.join(CSV_COLUMNS)}, "
            f"got {','.join(header)}"
        )
    rows = []
    for i, record in enumerate(reader, start=2):
        if len(record) != len(CSV_COLUMNS):
            raise SchemaError(f"line {i}: expected {len(CSV_COLUMNS)} fields")
        try:
            rows.append(
                FeatureRow(
                    int(record[0]),
                    float(record[1]),
                    float(record[2]),
                    Outcome(record[3]),
                    int(record[4]),
                )
            )
        except ValueError as exc:
            raise SchemaError(f"line {i}: {exc}") from exc
    return FeatureTable(tuple(rows))
