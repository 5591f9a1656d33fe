"""Yearly keyword vectors, FWS-to-abstract similarity, and FWS type distributions."""

from __future__ import annotations

import math
from collections import Counter, defaultdict
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

import numpy as np

from .corpus import FWS_TYPE_NAMES, Paper
from .errors import DimensionMismatchError, NoOverlapError
from .keywords import KeywordRecord, stem_phrase
from .preprocess import clean_text, stem_all, tokenize


@dataclass
class YearKeywordVector:
    year: int
    source: str  # "FWS" or "Abstract"
    counts: dict[str, int] = field(default_factory=dict)

    @property
    def total(self) -> int:
        return sum(self.counts.values())

    @property
    def proportions(self) -> dict[str, float]:
        t = self.total
        return {w: c / t for w, c in self.counts.items()} if t else {}


def yearly_vector(records: Iterable[KeywordRecord], year: int, source: str = "FWS") -> YearKeywordVector:
    """Keyword counts for one year, each phrase counted at most once per paper.

    Entries are ordered by count (descending), then phrase.
    """
    seen = set()
    c: Counter = Counter()
    for r in records:
        if r.year != year or (r.paper_id, r.phrase) in seen:
            continue
        seen.add((r.paper_id, r.phrase))
        c[r.phrase] += 1
    ordered = dict(sorted(c.items(), key=lambda kv: (-kv[1], kv[0])))
    return YearKeywordVector(year, source, ordered)


def yearly_vectors(records: Sequence[KeywordRecord], source: str) -> dict[int, YearKeywordVector]:
    return {y: yearly_vector(records, y, source) for y in sorted({r.year for r in records})}


def align(f: YearKeywordVector, a: YearKeywordVector) -> tuple[np.ndarray, np.ndarray, list[str]]:
    """Dense proportion vectors over the union of both keyword sets.

    The union lists ``f``'s keywords first, then ``a``'s new ones; a keyword
    missing from one side gets 0 there.
    """
    words = list(f.counts) + [w for w in a.counts if w not in f.counts]
    pf, pa = f.proportions, a.proportions
    return (np.array([pf.get(w, 0.0) for w in words]),
            np.array([pa.get(w, 0.0) for w in words]), words)


def cosine(v1: Sequence[float], v2: Sequence[float]) -> float:
    v1 = np.asarray(v1, dtype=float)
    v2 = np.asarray(v2, dtype=float)
    if v1.shape != v2.shape:
        raise DimensionMismatchError(f"{v1.shape} vs {v2.shape}")
    n1, n2 = math.sqrt(float(v1 @ v1)), math.sqrt(float(v2 @ v2))
    if n1 == 0 or n2 == 0:
        return 0.0
    return float(v1 @ v2) / (n1 * n2)


@dataclass
class SimilarityMatrix:
    base_years: list[int]
    horizons: list[int]
    cells: dict[tuple[int, int], float]

    def get(self, year: int, n: int) -> float | None:
        return self.cells.get((year, n))

    def rows(self) -> list[list]:
        return [[y] + [self.cells.get((y, n)) for n in self.horizons] for y in self.base_years]

    def row_max(self, year: int) -> float | None:
        vals = [v for (y, _), v in self.cells.items() if y == year]
        return max(vals) if vals else None


def similarity_matrix(fws: Mapping[int, YearKeywordVector], abstracts: Mapping[int, YearKeywordVector],
                      horizons: Iterable[int] = range(1, 22)) -> SimilarityMatrix:
    """Cosine similarity between year-k FWS keywords and year-(k+n) abstract keywords.

    Cells where either year has no keywords are left out.
    """
    horizons = sorted(set(horizons))
    if any(n < 1 for n in horizons):
        raise ValueError("horizons must be >= 1")
    cells = {}
    for k in sorted(fws):
        if fws[k].total == 0:
            continue
        for n in horizons:
            a = abstracts.get(k + n)
            if a is None or a.total == 0:
                continue
            vf, va, _ = align(fws[k], a)
            cells[(k, n)] = cosine(vf, va)
    if not cells:
        raise NoOverlapError("no base year has abstract keywords at any requested horizon")
    return SimilarityMatrix(sorted(fws), horizons, cells)


# -- type distributions ----------------------------------------------------------------

@dataclass(frozen=True)
class TypeRow:
    year: int
    fws_type: str
    fws_count: int
    fws_pct: float
    papers_with_type: int
    total_papers: int

    @property
    def ratio(self) -> float:
        return self.papers_with_type / self.total_papers if self.total_papers else 0.0


TYPE_HEADER = ("year", "type", "fws_count", "fws_pct", "papers_with_type", "total_papers", "ratio")


def _contains(tokens: list[str], key: list[str]) -> bool:
    L = len(key)
    return any(tokens[i : i + L] == key for i in range(len(tokens) - L + 1))


def type_distribution(papers: Iterable[Paper], venue: str | None = None,
                      keyword: str | None = None) -> list[TypeRow]:
    """Per-year, per-type FWS counts, shares and papers-with-type ratios.

    ``fws_pct`` is the type's share of the year's FWS; ``ratio`` is the
    fraction of the year's papers with at least one FWS of the type. With
    ``keyword`` only FWS mentioning it (by stem) are counted; the paper
    totals still cover every paper of the year.
    """
    key = stem_phrase(keyword).split(" ") if keyword else None
    fws_counts: dict[int, Counter] = defaultdict(Counter)
    papers_with: dict[int, Counter] = defaultdict(Counter)
    totals: Counter = Counter()
    for p in papers:
        if venue is not None and p.venue.value.lower() != venue.lower():
            continue
        totals[p.year] += 1
        types_here = set()
        for s in p.sentences():
            if not s.is_fws or s.fws_type is None:
                continue
            if key and not _contains(stem_all(tokenize(clean_text(s.text))), key):
                continue
            fws_counts[p.year][s.fws_type.value] += 1
            types_here.add(s.fws_type.value)
        for t in types_here:
            papers_with[p.year][t] += 1
    rows = []
    for year in sorted(totals):
        n_fws = sum(fws_counts[year].values())
        for t in FWS_TYPE_NAMES:
            c = fws_counts[year][t]
            rows.append(TypeRow(year, t, c, c / n_fws if n_fws else 0.0,
                                papers_with[year][t], totals[year]))
    return rows


def mean_ratio(rows: Iterable[TypeRow], fws_type: str) -> float:
    vals = [r.ratio for r in rows if r.fws_type == fws_type]
    return float(np.mean(vals)) if vals else 0.0
