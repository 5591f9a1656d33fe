"""Fold plans, classification metrics, annotator agreement and cross-validation."""

from __future__ import annotations

import warnings
from collections import Counter
from dataclasses import dataclass, field
from typing import Hashable, Sequence

import numpy as np
import scipy.sparse as sp

from .errors import (
    ClassTooSmallWarning,
    EmptyInputError,
    KTooLargeError,
    LengthMismatchError,
    UndefinedMetricWarning,
)
from .features import FeatureSpace
from .models import Dataset, Hyperparams, ModelKind, train, undersample_indices


# -- splitting -------------------------------------------------------------------

@dataclass
class FoldPlan:
    k: int
    assignment: np.ndarray  # fold index of each example
    seed: int

    def test_indices(self, fold: int) -> np.ndarray:
        return np.flatnonzero(self.assignment == fold)

    def train_indices(self, fold: int) -> np.ndarray:
        return np.flatnonzero(self.assignment != fold)


def stratified_kfold(labels: Sequence, k: int, seed: int) -> FoldPlan:
    """Seeded shuffle within each class, then round-robin over the folds.

    The round-robin position carries over from one class to the next so
    fold sizes stay within one of each other overall as well as per class.
    """
    labels = np.asarray(labels)
    n = len(labels)
    if k < 2:
        raise ValueError("k must be >= 2")
    if k > n:
        raise KTooLargeError(f"k={k} folds for {n} examples")
    rng = np.random.default_rng(seed)
    assignment = np.empty(n, dtype=np.int64)
    offset = 0
    for c in np.unique(labels):
        idx = np.flatnonzero(labels == c)
        if len(idx) < k:
            warnings.warn(f"class {c!r} has {len(idx)} < {k} examples", ClassTooSmallWarning,
                          stacklevel=2)
        idx = idx[rng.permutation(len(idx))]
        assignment[idx] = (offset + np.arange(len(idx))) % k
        offset = (offset + len(idx)) % k
    return FoldPlan(k, assignment, seed)


def stratified_split(labels: Sequence, ratios=(0.8, 0.1, 0.1), seed: int = 0) -> list[np.ndarray]:
    """Seeded stratified split into parts with the given ratios (default 8:1:1).

    Each class is shuffled and cut by largest-remainder rounding of its size
    times the ratios. Returned index arrays are sorted.
    """
    ratios = np.asarray(ratios, dtype=float)
    if np.any(ratios < 0) or abs(ratios.sum() - 1.0) > 1e-9:
        raise ValueError(f"split ratios must be nonnegative and sum to 1, got {ratios.tolist()}")
    labels = np.asarray(labels)
    rng = np.random.default_rng(seed)
    parts: list[list[np.ndarray]] = [[] for _ in ratios]
    for c in np.unique(labels):
        idx = np.flatnonzero(labels == c)
        idx = idx[rng.permutation(len(idx))]
        raw = ratios * len(idx)
        sizes = np.floor(raw).astype(int)
        short = len(idx) - sizes.sum()
        for j in np.argsort(-(raw - sizes), kind="stable")[:short]:
            sizes[j] += 1
        bounds = np.concatenate([[0], np.cumsum(sizes)])
        for j in range(len(ratios)):
            parts[j].append(idx[bounds[j] : bounds[j + 1]])
    return [np.sort(np.concatenate(p)) if p else np.array([], dtype=np.int64) for p in parts]


# -- metrics ---------------------------------------------------------------------

@dataclass
class EvalReport:
    class_names: list[str]
    confusion: np.ndarray  # rows: true class, columns: predicted class
    precision: np.ndarray
    recall: np.ndarray
    f1: np.ndarray
    support: np.ndarray
    macro_avg: tuple[float, float, float]
    weighted_avg: tuple[float, float, float]
    extra: dict = field(default_factory=dict)

    @property
    def accuracy(self) -> float:
        n = self.confusion.sum()
        return float(np.trace(self.confusion) / n) if n else 0.0

    @property
    def macro_f1(self) -> float:
        return self.macro_avg[2]

    @property
    def weighted_f1(self) -> float:
        return self.weighted_avg[2]

    def rows(self) -> list[tuple]:
        """Table rows: one per class, then ``Macro_avg`` and ``Weighted_avg``."""
        out = [
            (name, float(p), float(r), float(f), int(s))
            for name, p, r, f, s in zip(self.class_names, self.precision, self.recall,
                                        self.f1, self.support)
        ]
        total = int(self.support.sum())
        out.append(("Macro_avg", *self.macro_avg, total))
        out.append(("Weighted_avg", *self.weighted_avg, total))
        return out

    def text_table(self) -> str:
        width = max(len(r[0]) for r in self.rows())
        lines = [f"{'':{width}}  precision  recall     f1  support"]
        for name, p, r, f, s in self.rows():
            lines.append(f"{name:{width}}  {p:9.4f}  {r:6.4f}  {f:6.4f}  {s:7d}")
        return "\n".join(lines)


REPORT_HEADER = ("class", "precision", "recall", "f1", "support")


def confusion_matrix(y_true, y_pred, n_classes: int) -> np.ndarray:
    m = np.zeros((n_classes, n_classes), dtype=np.int64)
    np.add.at(m, (np.asarray(y_true, dtype=np.int64), np.asarray(y_pred, dtype=np.int64)), 1)
    return m


def _safe_div(num: np.ndarray, den: np.ndarray, what: str, names) -> np.ndarray:
    zero = den == 0
    if zero.any():
        bad = ", ".join(str(names[i]) for i in np.flatnonzero(zero))
        warnings.warn(f"{what} undefined for {bad}; set to 0", UndefinedMetricWarning, stacklevel=3)
    return np.where(zero, 0.0, num / np.where(zero, 1, den))


def metrics(y_true: Sequence[int], y_pred: Sequence[int], class_names: Sequence[str]) -> EvalReport:
    """Per-class precision/recall/F1 plus macro and support-weighted averages.

    Labels are indices into ``class_names``. A zero denominator gives 0 and an
    :class:`UndefinedMetricWarning`.
    """
    if len(y_true) != len(y_pred):
        raise LengthMismatchError(f"{len(y_true)} true labels vs {len(y_pred)} predictions")
    names = list(class_names)
    cm = confusion_matrix(y_true, y_pred, len(names))
    tp = np.diag(cm).astype(float)
    support = cm.sum(axis=1)
    predicted = cm.sum(axis=0)
    precision = _safe_div(tp, predicted.astype(float), "precision", names)
    recall = _safe_div(tp, support.astype(float), "recall", names)
    pr = precision + recall
    f1 = np.where(pr == 0, 0.0, 2 * precision * recall / np.where(pr == 0, 1, pr))
    macro = (float(precision.mean()), float(recall.mean()), float(f1.mean()))
    total = support.sum()
    if total:
        wts = support / total
        weighted = (float(precision @ wts), float(recall @ wts), float(f1 @ wts))
    else:
        weighted = (0.0, 0.0, 0.0)
    return EvalReport(names, cm, precision, recall, f1, support, macro, weighted)


# -- agreement -------------------------------------------------------------------

@dataclass(frozen=True)
class AgreementReport:
    observed: float
    expected: float
    kappa: float
    n: int


def cohens_kappa(labels_a: Sequence[Hashable], labels_b: Sequence[Hashable]) -> AgreementReport:
    """Cohen's kappa between two annotators over the same items.

    Perfect observed agreement gives kappa = 1, including the degenerate case
    where both annotators use a single label (expected agreement 1).
    """
    if len(labels_a) != len(labels_b):
        raise LengthMismatchError(f"{len(labels_a)} vs {len(labels_b)} annotations")
    n = len(labels_a)
    if n == 0:
        raise EmptyInputError("no annotations")
    agree = sum(a == b for a, b in zip(labels_a, labels_b))
    ca, cb = Counter(labels_a), Counter(labels_b)
    # sorted for a fixed summation order, so kappa(a, b) == kappa(b, a) bitwise
    keys = sorted(set(ca) | set(cb), key=repr)
    p_o = agree / n
    p_e = sum((ca[k] / n) * (cb[k] / n) for k in keys)
    if agree == n:
        return AgreementReport(1.0, p_e, 1.0, n)
    return AgreementReport(p_o, p_e, (p_o - p_e) / (1.0 - p_e), n)


# -- cross-validation ---------------------------------------------------------------

@dataclass
class FoldRecord:
    fold: int
    test_indices: np.ndarray
    fit_indices: np.ndarray  # training rows after undersampling
    n_features: int


@dataclass
class CVResult:
    report: EvalReport
    predictions: np.ndarray
    folds: list[FoldRecord]
    per_fold: list[EvalReport]

    def per_fold_mean(self) -> tuple[float, float, float]:
        """Mean over folds of each fold's macro (P, R, F1)."""
        arr = np.array([r.macro_avg for r in self.per_fold])
        return tuple(float(x) for x in arr.mean(axis=0))


def global_counts(docs: Sequence[Sequence[str]]):
    """Count matrix over every gram in ``docs`` plus the shared term list.

    Columns are only an id space; per-fold vocabularies, document
    frequencies and feature selection are computed from training rows only.
    """
    from .features import build_vocabulary, count_matrix

    vocab = build_vocabulary(docs)
    return count_matrix(docs, vocab), vocab.terms


def cross_validate(
    kind: ModelKind | str,
    docs: Sequence[Sequence[str]],
    labels: Sequence[int],
    class_names: Sequence[str],
    hyper: Hyperparams | None = None,
    k: int = 10,
    seed: int = 0,
    undersample: bool = False,
    chi2_k: int | None = None,
    counts=None,
) -> CVResult:
    """k-fold stratified CV with fold-local TF-IDF, chi-square selection and undersampling.

    Predictions of all held-out folds are pooled before computing the report.
    ``counts`` may carry a precomputed ``global_counts(docs)`` to share work
    across grid points.
    """
    labels = np.asarray(labels, dtype=np.int64)
    if counts is None:
        counts = global_counts(docs)
    C, terms = counts
    C = sp.csr_matrix(C)
    plan = stratified_kfold(labels, k, seed)
    predictions = np.full(len(labels), -1, dtype=np.int64)
    folds, per_fold = [], []
    for f in range(k):
        test = plan.test_indices(f)
        train_idx = plan.train_indices(f)
        if undersample:
            train_idx = train_idx[undersample_indices(labels[train_idx], seed + f)]
        space, keep, X_train = FeatureSpace.fit_counts(C[train_idx], terms, labels[train_idx], chi2_k)
        model = train(kind, Dataset(X_train, labels[train_idx], list(class_names)), hyper, seed)
        X_test = space.transform_counts(C[test][:, keep])
        pred = model.predict_labels(X_test)
        predictions[test] = pred
        folds.append(FoldRecord(f, test, np.sort(train_idx), space.dimension))
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", UndefinedMetricWarning)
            per_fold.append(metrics(labels[test], pred, class_names))
    report = metrics(labels, predictions, class_names)
    report.extra.update(k=k, seed=seed, undersample=undersample, chi2_k=chi2_k,
                        kind=ModelKind(kind).value)
    return CVResult(report, predictions, folds, per_fold)


def holdout_evaluate(
    kind: ModelKind | str,
    docs: Sequence[Sequence[str]],
    labels: Sequence[int],
    class_names: Sequence[str],
    hyper: Hyperparams | None = None,
    seed: int = 0,
    ratios=(0.8, 0.1, 0.1),
    chi2_k: int | None = None,
    counts=None,
) -> tuple[EvalReport, EvalReport, list[np.ndarray]]:
    """Train on the first split part; report on the validation and test parts."""
    labels = np.asarray(labels, dtype=np.int64)
    if counts is None:
        counts = global_counts(docs)
    C, terms = counts
    C = sp.csr_matrix(C)
    tr, va, te = stratified_split(labels, ratios, seed)
    space, keep, X_train = FeatureSpace.fit_counts(C[tr], terms, labels[tr], chi2_k)
    model = train(kind, Dataset(X_train, labels[tr], list(class_names)), hyper, seed)
    reports = []
    for part in (va, te):
        pred = model.predict_labels(space.transform_counts(C[part][:, keep]))
        reports.append(metrics(labels[part], pred, class_names))
    return reports[0], reports[1], [tr, va, te]
