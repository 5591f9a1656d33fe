"""N-gram vocabulary, TF-IDF weighting and chi-square feature selection.

Single-document helpers (:func:`tfidf_vector`, :func:`project`) work on
:class:`SparseVector`; the batch paths used for training work on CSR
matrices with one row per document and give identical numbers.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
import scipy.sparse as sp

from .errors import DimensionMismatchError, EmptyCorpusError, SingleClassError


@dataclass
class Vocabulary:
    terms: list[str]
    document_frequency: np.ndarray
    n_documents: int
    index: dict[str, int] = field(default=None, repr=False)

    def __post_init__(self):
        if self.index is None:
            self.index = {t: i for i, t in enumerate(self.terms)}
        self.document_frequency = np.asarray(self.document_frequency, dtype=np.int64)

    def __len__(self):
        return len(self.terms)

    @property
    def idf(self) -> np.ndarray:
        # smoothed idf: ln((1 + N) / (1 + df)) + 1, always >= 1
        return np.log((1.0 + self.n_documents) / (1.0 + self.document_frequency)) + 1.0


@dataclass(frozen=True)
class SparseVector:
    indices: tuple[int, ...]
    weights: tuple[float, ...]
    dimension: int

    def __post_init__(self):
        if len(self.indices) != len(self.weights):
            raise ValueError("indices and weights differ in length")
        if any(b <= a for a, b in zip(self.indices, self.indices[1:])):
            raise ValueError("indices must be strictly increasing")
        if self.indices and not (0 <= self.indices[0] and self.indices[-1] < self.dimension):
            raise ValueError("index out of range")

    @classmethod
    def from_dict(cls, d: dict[int, float], dimension: int) -> "SparseVector":
        keys = sorted(k for k, v in d.items() if v != 0)
        return cls(tuple(keys), tuple(float(d[k]) for k in keys), dimension)

    @classmethod
    def from_row(cls, row: sp.spmatrix) -> "SparseVector":
        row = sp.csr_matrix(row)
        row.sort_indices()
        keep = row.data != 0
        return cls(tuple(int(i) for i in row.indices[keep]),
                   tuple(float(x) for x in row.data[keep]), row.shape[1])

    def to_row(self) -> sp.csr_matrix:
        return sp.csr_matrix(
            (np.array(self.weights, dtype=float), np.array(self.indices, dtype=np.int64),
             np.array([0, len(self.indices)])),
            shape=(1, self.dimension),
        )

    def norm(self) -> float:
        return math.sqrt(sum(w * w for w in self.weights))

    def normalized(self) -> "SparseVector":
        n = self.norm()
        if n == 0:
            return self
        return SparseVector(self.indices, tuple(w / n for w in self.weights), self.dimension)


@dataclass(frozen=True)
class FeatureMask:
    selected: tuple[int, ...]
    k: int

    @property
    def size(self) -> int:
        return len(self.selected)


def build_vocabulary(docs: Sequence[Sequence[str]]) -> Vocabulary:
    """Index every distinct gram in first-seen order and count document frequency."""
    if len(docs) == 0:
        raise EmptyCorpusError("cannot build a vocabulary from zero documents")
    index: dict[str, int] = {}
    df: list[int] = []
    for doc in docs:
        for g in dict.fromkeys(doc):
            i = index.get(g)
            if i is None:
                index[g] = len(df)
                df.append(1)
            else:
                df[i] += 1
    return Vocabulary(list(index), np.array(df, dtype=np.int64), len(docs), index)


def tfidf_vector(doc: Sequence[str], vocab: Vocabulary) -> SparseVector:
    counts = Counter(g for g in doc if g in vocab.index)
    idf = vocab.idf
    weights = {vocab.index[g]: c * idf[vocab.index[g]] for g, c in counts.items()}
    return SparseVector.from_dict(weights, len(vocab)).normalized()


def count_matrix(docs: Sequence[Sequence[str]], vocab: Vocabulary) -> sp.csr_matrix:
    """Raw gram counts, one row per document; out-of-vocabulary grams dropped."""
    index = vocab.index
    indptr = [0]
    indices: list[int] = []
    data: list[int] = []
    for doc in docs:
        c = Counter(index[g] for g in doc if g in index)
        indices.extend(c.keys())
        data.extend(c.values())
        indptr.append(len(indices))
    m = sp.csr_matrix(
        (np.array(data, dtype=float), np.array(indices, dtype=np.int64), np.array(indptr)),
        shape=(len(docs), len(vocab)),
    )
    m.sort_indices()
    return m


def l2_normalize_rows(m: sp.csr_matrix) -> sp.csr_matrix:
    m = sp.csr_matrix(m, dtype=float, copy=True)
    norms = np.sqrt(np.asarray(m.multiply(m).sum(axis=1)).ravel())
    norms[norms == 0] = 1.0
    m.data /= np.repeat(norms, np.diff(m.indptr))
    return m


def tfidf_matrix(counts: sp.csr_matrix, vocab: Vocabulary) -> sp.csr_matrix:
    if counts.shape[1] != len(vocab):
        raise DimensionMismatchError(f"{counts.shape[1]} columns vs {len(vocab)} terms")
    weighted = sp.csr_matrix(counts, dtype=float, copy=True)
    weighted.data *= vocab.idf[weighted.indices]
    return l2_normalize_rows(weighted)


def contingency(X, y: Sequence[int], n_classes: int | None = None) -> tuple[np.ndarray, np.ndarray]:
    """Per-class present/absent document counts for every feature.

    Returns ``(present, absent)``, each of shape ``(n_classes, n_features)``.
    """
    X = sp.csr_matrix(X)
    y = np.asarray(y)
    if X.shape[0] != len(y):
        raise DimensionMismatchError(f"{X.shape[0]} rows vs {len(y)} labels")
    n_classes = int(y.max()) + 1 if n_classes is None else n_classes
    presence = sp.csr_matrix((X != 0).astype(np.float64))
    onehot = sp.csr_matrix(
        (np.ones(len(y)), (y, np.arange(len(y)))), shape=(n_classes, len(y))
    )
    present = np.asarray((onehot @ presence).todense())
    class_sizes = np.bincount(y, minlength=n_classes).astype(float)
    absent = class_sizes[:, None] - present
    return present, absent


def chi_square_scores(X, y: Sequence[int]) -> np.ndarray:
    """Chi-square of each feature's binary presence against the class labels.

    The table for a feature has one row per class and two columns (present,
    absent); expected counts come from the row and column marginals. Cells
    with zero expectation contribute nothing, so features present in no
    document (or in every document) score 0.
    """
    y = np.asarray(y)
    if len(y) == 0:
        raise EmptyCorpusError("no documents")
    if len(np.unique(y)) < 2:
        raise SingleClassError("chi-square needs at least two classes")
    present, absent = contingency(X, y)
    n = float(len(y))
    class_sizes = np.bincount(y, minlength=present.shape[0]).astype(float)
    col_present = present.sum(axis=0)
    col_absent = n - col_present
    scores = np.zeros(present.shape[1])
    for observed, col in ((present, col_present), (absent, col_absent)):
        expected = np.outer(class_sizes, col) / n
        with np.errstate(divide="ignore", invalid="ignore"):
            cell = np.where(expected > 0, (observed - expected) ** 2 / expected, 0.0)
        scores += cell.sum(axis=0)
    return scores


def select_top_k(scores: Sequence[float], k: int | None) -> FeatureMask:
    """Indices of the ``k`` highest scores (lower index wins ties), sorted.

    ``k=None`` keeps every feature.
    """
    scores = np.asarray(scores, dtype=float)
    if k is None:
        k = len(scores)
    if k < 1:
        raise ValueError("k must be >= 1")
    order = np.argsort(-scores, kind="stable")[:k]
    return FeatureMask(tuple(int(i) for i in np.sort(order)), k)


def project(v: SparseVector, mask: FeatureMask, vocab_size: int | None = None) -> SparseVector:
    if vocab_size is not None and v.dimension != vocab_size:
        raise DimensionMismatchError(f"vector dimension {v.dimension} != vocabulary size {vocab_size}")
    position = {j: i for i, j in enumerate(mask.selected)}
    if mask.selected and mask.selected[-1] >= v.dimension:
        raise DimensionMismatchError("mask refers to indices beyond the vector dimension")
    kept = {position[i]: w for i, w in zip(v.indices, v.weights) if i in position}
    return SparseVector.from_dict(kept, len(mask.selected)).normalized()


def project_matrix(X: sp.csr_matrix, mask: FeatureMask) -> sp.csr_matrix:
    return l2_normalize_rows(sp.csr_matrix(X)[:, list(mask.selected)])


@dataclass
class FeatureSpace:
    """A frozen vocabulary plus chi-square mask; maps gram lists to model inputs."""

    vocabulary: Vocabulary
    mask: FeatureMask
    ngram_min: int = 1
    ngram_max: int = 3

    @property
    def dimension(self) -> int:
        return self.mask.size

    @classmethod
    def fit(cls, docs, y, k: int | None, ngram_min=1, ngram_max=3) -> "FeatureSpace":
        vocab = build_vocabulary(docs)
        X = tfidf_matrix(count_matrix(docs, vocab), vocab)
        mask = select_top_k(chi_square_scores(X, y), k)
        return cls(vocab, mask, ngram_min, ngram_max)

    @classmethod
    def fit_counts(cls, counts: sp.csr_matrix, terms: Sequence[str], y, k: int | None,
                   ngram_min=1, ngram_max=3):
        """Fit from a count matrix indexed by a larger, shared term list.

        Only terms occurring in ``counts`` enter the vocabulary, kept in the
        shared order. Returns the space, the kept column indices, and the
        projected training matrix.
        """
        counts = sp.csr_matrix(counts)
        df = np.asarray((counts != 0).sum(axis=0)).ravel()
        keep = np.flatnonzero(df)
        vocab = Vocabulary([terms[i] for i in keep], df[keep], counts.shape[0])
        X = tfidf_matrix(counts[:, keep], vocab)
        mask = select_top_k(chi_square_scores(X, y), k)
        return cls(vocab, mask, ngram_min, ngram_max), keep, project_matrix(X, mask)

    def transform_counts(self, counts: sp.csr_matrix) -> sp.csr_matrix:
        """Counts already restricted to this space's vocabulary columns."""
        return project_matrix(tfidf_matrix(counts, self.vocabulary), self.mask)

    def full_vectors(self, docs) -> sp.csr_matrix:
        return tfidf_matrix(count_matrix(docs, self.vocabulary), self.vocabulary)

    def transform(self, docs) -> sp.csr_matrix:
        return project_matrix(self.full_vectors(docs), self.mask)
