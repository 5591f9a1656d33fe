"""Keyword extraction from future work sentences and adjacent-verb mining.

Candidates are maximal stopword-delimited token runs (capped at four
tokens); each sentence keeps its top three candidates by RAKE
degree/frequency score. Keywords are stored stemmed so that inflected
variants count together.
"""

from __future__ import annotations

import re
from collections import Counter, defaultdict
from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import KeywordAbsentError
from .preprocess import clean_text, stem, stem_all, tokenize
from .resources import load_list

_PHRASE_DELIMITERS = re.compile(r"[.,;:!?()\[\]{}\"]+")

MAX_PHRASE_LEN = 4
TOP_N = 3
WINDOW = 5


@dataclass(frozen=True)
class KeywordRecord:
    phrase: str  # stemmed
    paper_id: str
    year: int
    venue: str = ""
    fws_type: str | None = None
    surface: str = ""


@dataclass(frozen=True)
class VerbAdjacency:
    keyword: str
    verb: str
    count: int


def stem_phrase(phrase: str) -> str:
    return " ".join(stem_all(tokenize(clean_text(phrase))))


def load_stopwords(path=None) -> frozenset[str]:
    return frozenset(w.lower() for w in load_list("stopwords", path))


def load_stop_phrases(path=None) -> frozenset[str]:
    return frozenset(stem_phrase(p) for p in load_list("stop_phrases", path))


def load_verbs(path=None) -> tuple[str, ...]:
    return load_list("verbs", path)


def extract_candidates(tokens: Sequence[str], stopwords: Iterable[str],
                       max_len: int = MAX_PHRASE_LEN) -> list[str]:
    """Maximal runs of non-stopword tokens, in order.

    Runs longer than ``max_len`` are cut into consecutive pieces of at most
    ``max_len`` tokens.
    """
    stop = stopwords if isinstance(stopwords, (set, frozenset)) else set(stopwords)
    out: list[str] = []
    run: list[str] = []

    def flush():
        for i in range(0, len(run), max_len):
            out.append(" ".join(run[i : i + max_len]))
        run.clear()

    for t in tokens:
        if t in stop:
            flush()
        else:
            run.append(t)
    flush()
    return out


def rake_scores(candidates: Sequence[str]) -> dict[str, float]:
    """Sum of degree/frequency of each candidate's words, over ``candidates``.

    A word's frequency is its number of occurrences across the candidates and
    its degree sums the lengths of the candidates it occurs in.
    """
    freq: Counter = Counter()
    degree: Counter = Counter()
    for c in candidates:
        words = c.split(" ")
        for w in words:
            freq[w] += 1
            degree[w] += len(words)
    return {c: sum(degree[w] / freq[w] for w in c.split(" ")) for c in dict.fromkeys(candidates)}


def candidate_document_frequency(candidate_lists: Iterable[Sequence[str]]) -> Counter:
    """Number of sentences in which each candidate phrase occurs."""
    df: Counter = Counter()
    for cands in candidate_lists:
        df.update(set(cands))
    return df


def score_and_select(candidates: Sequence[str], corpus_df: Counter | dict | None = None,
                     n: int = TOP_N) -> list[str]:
    """Top ``n`` distinct candidates by RAKE score.

    Ties go to the phrase rarer in ``corpus_df``, then to the earlier one in
    the sentence.
    """
    corpus_df = corpus_df or {}
    scores = rake_scores(candidates)
    order = {c: i for i, c in reversed(list(enumerate(candidates)))}
    ranked = sorted(scores, key=lambda c: (-scores[c], corpus_df.get(c, 0), order[c]))
    return ranked[:n]


def filter_stop_phrases(phrases: Iterable[str], stop_phrases: Iterable[str]) -> list[str]:
    stop = set(stop_phrases)
    return [p for p in phrases if p not in stop]


def _occurrences(stems: Sequence[str], key: Sequence[str]) -> list[int]:
    L = len(key)
    return [i for i in range(len(stems) - L + 1) if list(stems[i : i + L]) == list(key)]


def adjacent_verbs(tokens: Sequence[str], keyword: str, verb_lexicon: Iterable[str],
                   window: int = WINDOW) -> list[str]:
    """Lexicon verbs within ``window`` tokens either side of each keyword occurrence.

    Matching is by stem and returned verbs are the lexicon entries. For each
    occurrence the verbs are listed nearest first (left before right at equal
    distance) without repeats; occurrences are concatenated in order.
    """
    if window < 1:
        raise ValueError("window must be >= 1")
    stems = stem_all(list(tokens))
    key = stem_phrase(keyword).split(" ")
    hits = _occurrences(stems, key)
    if not hits:
        raise KeywordAbsentError(f"{keyword!r} does not occur in the sentence")
    lexicon: dict[str, str] = {}
    for v in verb_lexicon:
        lexicon.setdefault(stem(v.lower()), v)
    out: list[str] = []
    for start in hits:
        end = start + len(key) - 1
        found: list[tuple[int, int, str]] = []
        for j in range(max(0, start - window), min(len(stems), end + window + 1)):
            if start <= j <= end or stems[j] not in lexicon:
                continue
            dist = start - j if j < start else j - end
            found.append((dist, 0 if j < start else 1, lexicon[stems[j]]))
        seen = set()
        for _, _, verb in sorted(found):
            if verb not in seen:
                seen.add(verb)
                out.append(verb)
    return out


# -- corpus level -------------------------------------------------------------------

@dataclass
class KeywordExtractor:
    """Sentence-level keyword pipeline with fixed word lists."""

    stopwords: frozenset[str]
    stop_phrases: frozenset[str]
    top_n: int = TOP_N

    @classmethod
    def default(cls, top_n: int = TOP_N, stopwords_path=None, stop_phrases_path=None):
        return cls(load_stopwords(stopwords_path), load_stop_phrases(stop_phrases_path), top_n)

    def candidates(self, text: str) -> list[str]:
        """Candidates of every punctuation-delimited fragment of ``text``."""
        out = []
        for frag in _PHRASE_DELIMITERS.split(text):
            out.extend(extract_candidates(tokenize(clean_text(frag)), self.stopwords))
        return out

    def select(self, candidates: Sequence[str], corpus_df=None) -> list[tuple[str, str]]:
        """(stemmed phrase, surface form) pairs for one sentence's candidates."""
        top = score_and_select(candidates, corpus_df, self.top_n)
        out = []
        for surface in top:
            stemmed = stem_phrase(surface)
            if stemmed and stemmed not in self.stop_phrases:
                out.append((stemmed, surface))
        return out

    def extract_corpus(self, items: Sequence[tuple[str, dict]]) -> list[KeywordRecord]:
        """Keyword records for ``(text, metadata)`` items.

        Metadata carries ``paper_id``, ``year`` and optionally ``venue`` and
        ``fws_type``. Candidate rarity for tie-breaks is computed over all items.
        """
        cands = [self.candidates(text) for text, _ in items]
        df = candidate_document_frequency(cands)
        records = []
        for c, (_, meta) in zip(cands, items):
            for stemmed, surface in self.select(c, df):
                records.append(KeywordRecord(stemmed, meta["paper_id"], meta["year"],
                                             meta.get("venue", ""), meta.get("fws_type"), surface))
        return records


GROUP_FIELDS = ("year", "fws_type", "venue")


def aggregate_keywords(records: Iterable[KeywordRecord], group_by: Sequence[str] = (),
                       dedup: bool = True) -> dict[tuple, list[tuple[str, int]]]:
    """Keyword counts per group, sorted by count (descending) then phrase.

    With ``dedup`` a phrase counts at most once per paper within a group.
    """
    for g in group_by:
        if g not in GROUP_FIELDS:
            raise ValueError(f"cannot group by {g!r}; choose from {GROUP_FIELDS}")
    counts: dict[tuple, Counter] = defaultdict(Counter)
    seen = set()
    for r in records:
        group = tuple(getattr(r, g) for g in group_by)
        if dedup:
            key = (group, r.phrase, r.paper_id)
            if key in seen:
                continue
            seen.add(key)
        counts[group][r.phrase] += 1
    return {
        g: sorted(c.items(), key=lambda kv: (-kv[1], kv[0]))
        for g, c in sorted(counts.items(), key=lambda kv: tuple(str(x) for x in kv[0]))
    }


def surface_forms(records: Iterable[KeywordRecord]) -> dict[str, str]:
    """Most frequent surface form for each stemmed phrase (ties alphabetical)."""
    forms: dict[str, Counter] = defaultdict(Counter)
    for r in records:
        forms[r.phrase][r.surface or r.phrase] += 1
    return {p: min(c.items(), key=lambda kv: (-kv[1], kv[0]))[0] for p, c in forms.items()}


def verb_table(sentences: Iterable[tuple[str, Sequence[str]]], verb_lexicon: Sequence[str],
               window: int = WINDOW) -> dict[str, list[tuple[str, int, float]]]:
    """Adjacent-verb counts per keyword with each verb's share of that keyword's verbs.

    ``sentences`` yields ``(text, stemmed keywords of that sentence)``.
    """
    counts: dict[str, Counter] = defaultdict(Counter)
    for text, kws in sentences:
        tokens = tokenize(clean_text(text))
        for kw in kws:
            try:
                verbs = adjacent_verbs(tokens, kw, verb_lexicon, window)
            except KeywordAbsentError:
                continue
            counts[kw].update(verbs)
    table = {}
    for kw, c in sorted(counts.items()):
        total = sum(c.values())
        table[kw] = [(v, n, n / total) for v, n in sorted(c.items(), key=lambda kv: (-kv[1], kv[0]))]
    return table
