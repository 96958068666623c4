"""Perspective-corrected gait features and fall prediction."""

from .annotations import (
    AnnotationDocument,
    emit_annotations,
    parse_annotations,
)
from .classify import (
    FeatureScaler,
    HingeSVC,
    KNeighborsVote,
    LabeledSample,
    LoocvReport,
    auc,
    evaluate,
    loocv,
    roc_curve,
)
from .fixtures import FeatureRow, FeatureTable, load_feature_fixture
from .pipeline import run_classify, run_extract
from .gait import (
    FrameLandmarks,
    GaitFeatures,
    Outcome,
    Stance,
    WalkSequence,
    average_stride_length,
    extract_features,
    extract_stances,
    head_motion_range,
)
from .geometry import (
    Correspondence,
    HomographyMatrix,
    LanePair,
    Point2,
    SideViewQuad,
    apply_homography,
    estimate_homography,
    invert,
    side_view_homography,
    top_view_homography,
)
from .signal import Series1D, gaussian_smooth, stance_median

__version__ = "0.1.0"
