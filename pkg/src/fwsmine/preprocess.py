"""Sentence normalization, tokenization, stemming and n-gram generation.

Grams are represented by their canonical key, the words joined by a single
space (``"we plan"``); the arity is ``key.count(" ") + 1``.
"""

from __future__ import annotations

import re
from functools import lru_cache

from nltk.stem.porter import PorterStemmer

from .errors import InvalidRangeError
from .resources import load_list

_NON_LETTER = re.compile(r"[^A-Za-z ]+")
_SPACES = re.compile(r" +")
_porter = PorterStemmer(mode=PorterStemmer.ORIGINAL_ALGORITHM)


def clean_text(text: str) -> str:
    """Replace anything outside ``[A-Za-z ]`` with a space, lowercase, squeeze."""
    text = _NON_LETTER.sub(" ", text).lower()
    return _SPACES.sub(" ", text).strip()


def tokenize(cleaned: str) -> list[str]:
    return [t for t in cleaned.split(" ") if t]


@lru_cache(maxsize=1)
def _overrides() -> dict[str, str]:
    table = {}
    for line in load_list("stem_overrides"):
        word, _, stem_ = line.partition("\t")
        if stem_:
            table[word.strip()] = stem_.strip()
    return table


@lru_cache(maxsize=200_000)
def stem(token: str) -> str:
    """Porter stem, iterated to a fixed point so that ``stem`` is idempotent.

    A single Porter pass is not idempotent (``proposed -> propos -> propo``);
    repeating it converges within a handful of passes on English text.
    """
    s = _overrides().get(token, token)
    for _ in range(20):
        nxt = _porter.stem(s, to_lowercase=False)
        if nxt == s:
            break
        s = nxt
    return s


def stem_all(tokens: list[str]) -> list[str]:
    return [stem(t) for t in tokens]


def ngrams(tokens: list[str], nmin: int = 1, nmax: int = 3) -> list[str]:
    """All contiguous windows of length ``nmin..nmax``, shortest first.

    Duplicates are kept; counting happens downstream.
    """
    if not (1 <= nmin <= nmax <= 3):
        raise InvalidRangeError(f"need 1 <= nmin <= nmax <= 3, got [{nmin}, {nmax}]")
    out = []
    for n in range(nmin, nmax + 1):
        for i in range(len(tokens) - n + 1):
            out.append(" ".join(tokens[i : i + n]))
    return out


def sentence_grams(text: str, nmin: int = 1, nmax: int = 3) -> list[str]:
    """Full featurization front end: clean, tokenize, stem, n-grams."""
    return ngrams(stem_all(tokenize(clean_text(text))), nmin, nmax)
