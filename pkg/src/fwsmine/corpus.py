"""Corpus data model, annotation parsing and chapter selection.

Raw input is JSON lines, one paper per line::

    {"id": ..., "venue": ..., "year": ..., "title": ..., "abstract": ...,
     "chapters": [{"heading": ..., "text": ...}]}

where ``text`` may carry ``<FW>...</FW>`` spans marking future work
sentences. ``<FW type="method">`` additionally records the sentence type.
Parsed corpora use the same layout but each chapter holds ``sentences``
records instead of ``text``; both forms are accepted by :func:`read_papers`.
"""

from __future__ import annotations

import enum
import json
import re
from collections import Counter
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Iterator

from .errors import UnbalancedTagsError
from .preprocess import stem
from .resources import load_list


class Venue(str, enum.Enum):
    ACL = "ACL"
    EMNLP = "EMNLP"
    NAACL = "NAACL"
    OTHER = "Other"

    @classmethod
    def parse(cls, value: str | None) -> "Venue":
        if not value:
            return cls.OTHER
        for v in cls:
            if v.value.lower() == str(value).strip().lower():
                return v
        return cls.OTHER


class HeadingClass(str, enum.Enum):
    CONCLUSION = "Conclusion"
    CONCLUSION_AND_FUTURE_WORK = "Conclusion and future work"
    DISCUSSION = "Discussion"
    FUTURE_WORK = "Future work"
    DISCUSSION_AND_CONCLUSION = "Discussion and conclusion"
    DISCUSSION_AND_FUTURE_WORK = "Discussion and future work"
    OTHER = "Other"


class FwsType(str, enum.Enum):
    METHOD = "Method"
    RESOURCES = "Resources"
    EVALUATION = "Evaluation"
    APPLICATION = "Application"
    PROBLEM = "Problem"
    OTHER = "Other"

    @classmethod
    def parse(cls, value: str) -> "FwsType":
        for t in cls:
            if t.value.lower() == value.strip().lower():
                return t
        raise ValueError(f"unknown FWS type {value!r}")


FWS_TYPE_NAMES = [t.value for t in FwsType]


@dataclass
class Sentence:
    text: str
    is_fws: bool | None = None
    fws_type: FwsType | None = None
    source_paper: str = ""
    position: int = 0

    def __post_init__(self):
        if self.fws_type is not None and self.is_fws is not True:
            raise ValueError("fws_type requires is_fws = True")

    def to_json(self) -> dict:
        return {
            "text": self.text,
            "is_fws": self.is_fws,
            "fws_type": self.fws_type.value if self.fws_type else None,
            "position": self.position,
        }


@dataclass
class Chapter:
    raw_heading: str
    sentences: list[Sentence] = field(default_factory=list)

    @property
    def heading_class(self) -> HeadingClass:
        return normalize_heading(self.raw_heading)

    @property
    def text(self) -> str:
        return " ".join(s.text for s in self.sentences)


@dataclass
class Paper:
    id: str
    venue: Venue
    year: int
    title: str = ""
    chapters: list[Chapter] = field(default_factory=list)
    abstract: str | None = None

    def __post_init__(self):
        if not self.id:
            raise ValueError("paper id must be nonempty")
        if not 2000 <= self.year <= 2099:
            raise ValueError(f"paper {self.id}: year {self.year} outside 2000-2099")

    def sentences(self) -> Iterator[Sentence]:
        for ch in self.chapters:
            yield from ch.sentences

    def to_json(self) -> dict:
        return {
            "id": self.id,
            "venue": self.venue.value,
            "year": self.year,
            "title": self.title,
            "abstract": self.abstract,
            "chapters": [
                {
                    "heading": ch.raw_heading,
                    "heading_class": ch.heading_class.value,
                    "sentences": [s.to_json() for s in ch.sentences],
                }
                for ch in self.chapters
            ],
        }


# -- headings ---------------------------------------------------------------

_LEADING_NUMBERING = re.compile(r"^[^a-z]+|^[ivxlc]+[.)]\s*")


def _heading_key(raw: str) -> tuple[str, ...]:
    text = raw.casefold().replace("&", " and ")
    text = _LEADING_NUMBERING.sub("", text.strip(), count=2)
    return tuple(sorted(stem(w) for w in re.findall(r"[a-z]+", text)))


_CANONICAL = {
    _heading_key(h.value): h for h in HeadingClass if h is not HeadingClass.OTHER
}


def normalize_heading(raw: str) -> HeadingClass:
    """Map a raw chapter heading to one of the seven heading classes.

    Leading section numbers are dropped and the remaining words are stemmed;
    the heading matches a class when its stemmed word multiset equals that
    class's canonical multiset, so word order and inflection do not matter.
    """
    return _CANONICAL.get(_heading_key(raw or ""), HeadingClass.OTHER)


_FAMILIES = (
    (HeadingClass.FUTURE_WORK, HeadingClass.CONCLUSION_AND_FUTURE_WORK,
     HeadingClass.DISCUSSION_AND_FUTURE_WORK),
    (HeadingClass.CONCLUSION, HeadingClass.DISCUSSION_AND_CONCLUSION),
    (HeadingClass.DISCUSSION,),
)


def select_target_chapter(paper: Paper) -> Chapter | None:
    """Pick the chapter to harvest sentences from.

    Any future-work chapter wins, then the conclusion family, then a plain
    discussion; within a family the first in document order is taken.
    """
    classes = [ch.heading_class for ch in paper.chapters]
    for family in _FAMILIES:
        for ch, cls in zip(paper.chapters, classes):
            if cls in family:
                return ch
    return None


# -- sentence splitting -------------------------------------------------------

_CANDIDATE_BREAK = re.compile(r"[.!?][\"')\]]*\s+(?=[A-Z])")


def split_sentences(text: str, abbreviations: Iterable[str] | None = None) -> list[str]:
    """Split on ``.``/``!``/``?`` followed by whitespace and an uppercase letter.

    Breaks after protected abbreviations (``et al.``, ``e.g.``, ...) and after
    single-letter initials are suppressed.
    """
    abbrevs = {a.lower() for a in (abbreviations or load_list("abbreviations"))}
    out = []
    start = 0
    for m in _CANDIDATE_BREAK.finditer(text):
        head = text[start : m.start() + 1]
        last = head.split()[-1] if head.split() else ""
        if last.lower() in abbrevs or re.fullmatch(r"\(?[A-Z]\.", last):
            continue
        piece = text[start : m.end()].strip()
        if piece:
            out.append(piece)
        start = m.end()
    tail = text[start:].strip()
    if tail:
        out.append(tail)
    return out


# -- annotation parsing --------------------------------------------------------

_TAG = re.compile(r"<FW(?:\s+type\s*=\s*\"([^\"]*)\")?\s*>|</FW\s*>")


def parse_annotated_text(
    text: str, labeled: bool = True, paper_id: str = "", abbreviations=None
) -> list[Sentence]:
    """Split ``text`` into sentences, labelling those inside ``<FW>`` spans.

    With ``labeled=False`` the text must be tag-free and every sentence keeps
    ``is_fws = None``.
    """
    segments: list[tuple[str, bool, FwsType | None]] = []
    pos = 0
    open_at = None
    open_type = None
    for m in _TAG.finditer(text):
        is_open = not m.group(0).startswith("</")
        if is_open:
            if open_at is not None:
                raise UnbalancedTagsError(f"nested <FW> at offset {m.start()}")
            segments.append((text[pos : m.start()], False, None))
            open_at = m.start()
            open_type = FwsType.parse(m.group(1)) if m.group(1) else None
        else:
            if open_at is None:
                raise UnbalancedTagsError(f"</FW> without opener at offset {m.start()}")
            segments.append((text[pos : m.start()], True, open_type))
            open_at = None
            open_type = None
        pos = m.end()
    if open_at is not None:
        raise UnbalancedTagsError(f"<FW> at offset {open_at} is never closed")
    segments.append((text[pos:], False, None))
    if not labeled and any(inside for _, inside, _ in segments):
        raise ValueError("labeled=False but the text contains <FW> spans")

    sentences: list[Sentence] = []
    for chunk, inside, ftype in segments:
        for s in split_sentences(chunk, abbreviations):
            sentences.append(
                Sentence(
                    text=s,
                    is_fws=inside if labeled else None,
                    fws_type=ftype if inside else None,
                    source_paper=paper_id,
                    position=len(sentences),
                )
            )
    return sentences


# -- JSON lines -----------------------------------------------------------------

def _sentence_from_json(rec: dict, paper_id: str, position: int) -> Sentence:
    ftype = rec.get("fws_type")
    return Sentence(
        text=rec["text"],
        is_fws=rec.get("is_fws"),
        fws_type=FwsType.parse(ftype) if ftype else None,
        source_paper=paper_id,
        position=rec.get("position", position),
    )


def paper_from_json(rec: dict, labeled: bool = True, abbreviations=None) -> Paper:
    pid = str(rec["id"])
    chapters = []
    for ch in rec.get("chapters", []):
        if "sentences" in ch:
            sents = [_sentence_from_json(s, pid, i) for i, s in enumerate(ch["sentences"])]
        else:
            sents = parse_annotated_text(ch.get("text", ""), labeled=labeled, paper_id=pid,
                                         abbreviations=abbreviations)
        chapters.append(Chapter(raw_heading=ch.get("heading", ""), sentences=sents))
    return Paper(
        id=pid,
        venue=Venue.parse(rec.get("venue")),
        year=int(rec["year"]),
        title=rec.get("title", ""),
        chapters=chapters,
        abstract=rec.get("abstract"),
    )


def read_papers(path: str | Path, labeled: bool = True, abbreviations=None) -> list[Paper]:
    papers = []
    seen = set()
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            if not line.strip() or line.startswith("#"):
                continue
            try:
                paper = paper_from_json(json.loads(line), labeled, abbreviations)
            except UnbalancedTagsError as exc:
                raise UnbalancedTagsError(f"{path}:{lineno}: {exc}") from None
            if paper.id in seen:
                raise ValueError(f"{path}:{lineno}: duplicate paper id {paper.id!r}")
            seen.add(paper.id)
            papers.append(paper)
    return papers


def dumps_papers(papers: Iterable[Paper]) -> str:
    return "".join(json.dumps(p.to_json(), ensure_ascii=False) + "\n" for p in papers)


def restrict_to_target(papers: Iterable[Paper]) -> list[Paper]:
    """Keep only the target chapter of each paper; drop papers without one."""
    out = []
    for p in papers:
        ch = select_target_chapter(p)
        if ch is not None:
            out.append(Paper(p.id, p.venue, p.year, p.title, [ch], p.abstract))
    return out


def heading_table(papers: Iterable[Paper]) -> Counter:
    """Frequency of heading classes over the target chapters of ``papers``."""
    counts: Counter = Counter()
    for p in papers:
        ch = select_target_chapter(p)
        counts[ch.heading_class if ch is not None else HeadingClass.OTHER] += 1
    return counts
