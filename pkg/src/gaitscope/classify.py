"""Fall/no-fall classifiers, leave-one-out cross-validation, ROC/AUC.

Estimators follow the scikit-learn fit/predict convention (and inherit
its base classes, so get_params/set_params and pipeline composition work)
but the training math is self-contained: the linear SVM minimizes the
primal hinge-loss objective 0.5*||w||^2 + C*sum(hinge) as a small QP, and
the kNN vote uses deterministic distance tie-breaking by sample id.

The positive class is Fall (+1) throughout; a decision score of exactly 0
predicts Fall, and kNN distance ties go to the lower person id.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Sequence

import cvxpy as cp
import numpy as np
from sklearn.base import BaseEstimator, ClassifierMixin, TransformerMixin

from .errors import (
    FoldDegenerate,
    SingleClassScores,
    SingleClassTrainingSet,
    ZeroVariance,
)
from .gait import GaitFeatures

SCALING_METHODS = ("none", "minmax", "zscore")

# Empirically determined best-matching preprocessing per classifier (see
# README): raw features for the SVM, z-scores for kNN.
DEFAULT_SCALING = {"svm": "none", "knn": "zscore"}


@dataclass(frozen=True)
class LabeledSample:
    person_id: int
    features: GaitFeatures
    label: int  # Fall = +1, NoFall = -1

    def __post_init__(self):
        if self.label not in (-1, 1):
            raise ValueError(f"label must be +1 or -1, got {self.label}")


def _check_features(X) -> np.ndarray:
    X = np.asarray(X, dtype=float)
    if X.ndim == 1:
        X = X.reshape(1, -1)
    if X.ndim != 2 or not np.all(np.isfinite(X)):
        raise ValueError("features must be a finite 2-D array")
    return X


def _check_labels(y) -> np.ndarray:
    y = np.asarray(y)
    if not np.all(np.isin(y, (-1, 1))):
        raise ValueError("labels must be +1/-1")
    return y.astype(float)


class FeatureScaler(TransformerMixin, BaseEstimator):
    """Per-feature scaling: 'none', 'minmax', or 'zscore'.

    The z-score uses the population standard deviation (divide by n).
    """

    def __init__(self, method: str = "zscore"):
        self.method = method

    def fit(self, X, y=None):
        X = _check_features(X)
        if self.method not in SCALING_METHODS:
            raise ValueError(f"unknown scaling method {self.method!r}")
        if self.method == "zscore":
            self.center_ = X.mean(axis=0)
            self.scale_ = X.std(axis=0)
        elif self.method == "minmax":
            self.center_ = X.min(axis=0)
            self.scale_ = X.max(axis=0) - X.min(axis=0)
        else:
            self.center_ = np.zeros(X.shape[1])
            self.scale_ = np.ones(X.shape[1])
        if np.any(self.scale_ <= 0):
            bad = int(np.argmin(self.scale_))
            raise ZeroVariance(f"feature {bad} has zero variance")
        return self

    def transform(self, X):
        X = _check_features(X)
        return (X - self.center_) / self.scale_


def svm_objective(w, b: float, X, y, C: float = 1.0) -> float:
    """Primal hinge-loss objective; shared by the trainer and test oracles."""
    w = np.asarray(w, dtype=float)
    X = _check_features(X)
    y = _check_labels(y)
    margins = 1.0 - y * (X @ w + b)
    return 0.5 * float(w @ w) + C * float(np.maximum(margins, 0.0).sum())


class HingeSVC(ClassifierMixin, BaseEstimator):
    """Linear SVM trained by solving the primal QP directly.

    With only a handful of samples and two features the problem is tiny,
    so it is handed to a convex solver and polished to high precision.
    """

    def __init__(self, C: float = 1.0):
        self.C = C

    def fit(self, X, y):
        X = _check_features(X)
        y = _check_labels(y)
        if len(set(y)) < 2:
            raise SingleClassTrainingSet(
                "training data must contain both Fall and NoFall"
            )
        n_features = X.shape[1]
        w = cp.Variable(n_features)
        b = cp.Variable()
        hinge = cp.pos(1.0 - cp.multiply(y, X @ w + b))
        problem = cp.Problem(
            cp.Minimize(0.5 * cp.sum_squares(w) + self.C * cp.sum(hinge))
        )
        problem.solve(solver=cp.CLARABEL)
        if w.value is None:
            problem.solve(solver=cp.ECOS)
        self.w_ = np.asarray(w.value, dtype=float)
        self.b_ = float(b.value)
        self._polish(X, y)
        return self

    def _polish(self, X, y):
        # The objective is piecewise linear and convex in b for fixed w;
        # its minimum lies at a hinge breakpoint.  Snapping b there
        # removes the solver's residual error in the non-smooth direction.
        scores = X @ self.w_
        breakpoints = y - scores
        best_b, best_obj = self.b_, svm_objective(self.w_, self.b_, X, y, self.C)
        for cand in breakpoints:
            obj = svm_objective(self.w_, cand, X, y, self.C)
            if obj < best_obj:
                best_b, best_obj = float(cand), obj
        self.b_ = best_b

    def decision_function(self, X):
        X = _check_features(X)
        return X @ self.w_ + self.b_

    def predict(self, X):
        return np.where(self.decision_function(X) >= 0, 1, -1)

    def objective_(self, X, y) -> float:
        return svm_objective(self.w_, self.b_, X, y, self.C)


class KNeighborsVote(ClassifierMixin, BaseEstimator):
    """k-nearest-neighbour vote with deterministic tie handling.

    The score is the fraction of Fall neighbours among the k nearest by
    Euclidean distance; equal distances are broken by lower sample id.
    """

    def __init__(self, k: int = 3):
        self.k = k

    def fit(self, X, y, sample_ids=None):
        X = _check_features(X)
        y = _check_labels(y)
        if self.k % 2 == 0 or self.k < 1:
            raise ValueError(f"k must be odd and positive, got {self.k}")
        if self.k > len(X):
            raise ValueError(f"k={self.k} exceeds training size {len(X)}")
        self.X_ = X
        self.y_ = y
        self.ids_ = (
            np.arange(len(X)) if sample_ids is None else np.asarray(sample_ids)
        )
        return self

    def decision_function(self, X):
        X = _check_features(X)
        scores = np.empty(len(X))
        for i, q in enumerate(X):
            dist = np.linalg.norm(self.X_ - q, axis=1)
            order = sorted(range(len(dist)), key=lambda j: (dist[j], self.ids_[j]))
            nearest = order[: self.k]
            scores[i] = np.mean(self.y_[nearest] > 0)
        return scores

    def predict(self, X):
        return np.where(self.decision_function(X) > 0.5, 1, -1)


@dataclass(frozen=True)
class PersonResult:
    person_id: int
    true_label: int
    predicted_label: int
    score: float


@dataclass(frozen=True)
class LoocvReport:
    per_person: tuple[PersonResult, ...]
    accuracy: float
    roc_points: tuple[tuple[float, float], ...]
    auc: float
    method: str = ""
    scaling: str = ""

    @property
    def misclassified_ids(self) -> tuple[int, ...]:
        return tuple(
            r.person_id
            for r in self.per_person
            if r.predicted_label != r.true_label
        )


def roc_curve(scores, labels) -> tuple[tuple[tuple[float, float], ...], float]:
    """(FPR, TPR) staircase and its trapezoidal AUC.

    Thresholds sweep the unique score values from +inf down; tied scores
    enter the curve together, so the trapezoidal area equals the
    Mann-Whitney pair statistic with half credit for ties.  The area is
    accumulated over integer TP/FP counts, which keeps it exactly equal
    to pair counting.
    """
    scores = np.asarray(scores, dtype=float)
    labels = np.asarray(labels)
    n_pos = int(np.sum(labels == 1))
    n_neg = int(np.sum(labels == -1))
    if n_pos == 0 or n_neg == 0:
        raise SingleClassScores("ROC needs both positive and negative labels")

    points = [(0.0, 0.0)]
    tp = fp = 0
    area2 = 0  # 2 * area in count space
    for threshold in sorted(set(scores), reverse=True):
        at = scores == threshold
        dtp = int(np.sum(at & (labels == 1)))
        dfp = int(np.sum(at & (labels == -1)))
        area2 += dfp * (2 * tp + dtp)
        tp += dtp
        fp += dfp
        points.append((fp / n_neg, tp / n_pos))
    return tuple(points), area2 / (2 * n_pos * n_neg)


def auc(roc_points: Sequence[tuple[float, float]]) -> float:
    """Trapezoidal area under an (FPR, TPR) staircase."""
    pts = np.asarray(roc_points, dtype=float)
    return float(np.trapezoid(pts[:, 1], pts[:, 0]))


def loocv(
    samples: Sequence[LabeledSample],
    make_model: Callable[[], ClassifierMixin],
    scaling: str = "zscore",
    method: str = "",
) -> LoocvReport:
    """Leave-one-out evaluation with per-fold scaling.

    Every fold fits the scaler and the model on the n-1 remaining
    samples only, then scores the held-out person.
    """
    samples = sorted(samples, key=lambda s: s.person_id)
    if len(samples) < 3:
        raise ValueError(f"need at least 3 samples, got {len(samples)}")
    X = np.asarray([s.features.as_vector() for s in samples])
    y = np.asarray([s.label for s in samples])
    ids = np.asarray([s.person_id for s in samples])

    results = []
    for i in range(len(samples)):
        train = np.arange(len(samples)) != i
        try:
            scaler = FeatureScaler(scaling).fit(X[train])
            model = make_model()
            if isinstance(model, KNeighborsVote):
                model.fit(scaler.transform(X[train]), y[train], ids[train])
            else:
                model.fit(scaler.transform(X[train]), y[train])
        except (SingleClassTrainingSet, ZeroVariance, ValueError) as exc:
            raise FoldDegenerate(
                f"fold leaving out person {ids[i]}: {exc}"
            ) from exc
        score = float(model.decision_function(scaler.transform(X[i]))[0])
        if isinstance(model, KNeighborsVote):
            predicted = 1 if score > 0.5 else -1
        else:
            predicted = 1 if score >= 0 else -1
        results.append(PersonResult(int(ids[i]), int(y[i]), predicted, score))

    accuracy = sum(r.predicted_label == r.true_label for r in results) / len(
        results
    )
    points, area = roc_curve(
        [r.score for r in results], [r.true_label for r in results]
    )
    return LoocvReport(
        per_person=tuple(results),
        accuracy=accuracy,
        roc_points=points,
        auc=area,
        method=method,
        scaling=scaling,
    )


def evaluate(
    samples: Sequence[LabeledSample],
    method: str,
    scaling: str | None = None,
    C: float = 1.0,
    k: int = 3,
) -> LoocvReport:
    """LOOCV with the named classifier and its default scaling."""
    if method not in DEFAULT_SCALING:
        raise ValueError(f"unknown method {method!r}")
    if scaling is None:
        scaling = DEFAULT_SCALING[method]
    factory = (lambda: HingeSVC(C=C)) if method == "svm" else (lambda: KNeighborsVote(k=k))
    return loocv(samples, factory, scaling=scaling, method=method)
