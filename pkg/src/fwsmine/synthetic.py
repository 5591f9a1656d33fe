"""Seeded generator of small annotated corpora in the raw JSONL layout.

The generated papers are obviously artificial, but they exercise every
code path: varied chapter headings, ``<FW type=...>`` spans of all six
types at a realistic imbalance, abstracts, and a topic mix that drifts over
the years so FWS keywords anticipate later abstracts.
"""

from __future__ import annotations

import json
import random

TOPICS = [
    "machine translation", "language model", "dependency parser", "word embedding",
    "entity recognition", "sentiment analysis", "knowledge graph", "question answering",
    "text summarization", "topic model", "attention mechanism", "neural network",
    "semantic role labeling", "coreference resolution", "speech recognition",
    "relation extraction", "dialogue system", "text classification", "word alignment",
    "graph neural network", "reading comprehension", "pretrained encoder",
]

_FWS = {
    "Method": [
        "We plan to improve the {t} with richer {u} features.",
        "In future work, we will extend our {t} to incorporate {u}.",
        "We intend to explore better training objectives for the {t}.",
        "Future work includes combining the {t} with a {u}.",
        "We would like to investigate alternative decoding strategies for the {t}.",
    ],
    "Resources": [
        "Future work involves scaling the {t} up to larger data and more features.",
        "We plan to collect a larger annotated {t} corpus in several languages.",
        "In the future we would like to build more training resources for {t}.",
    ],
    "Evaluation": [
        "We would like to explore other evaluation metrics for the {t}.",
        "In future work we plan to evaluate the {t} with human judgments.",
    ],
    "Application": [
        "We are also planning to apply the {t} to other tasks such as {u}.",
        "In the future, we hope to adapt the {t} to the {u} setting.",
    ],
    "Problem": [
        "We suggest that {t} may become an appealing open problem for future research.",
        "How to handle noisy input for {t} remains an open question for future study.",
    ],
    "Other": [
        "There are at least two potential future directions.",
        "We leave a deeper analysis of these issues to future work.",
    ],
}
_TYPE_WEIGHTS = {"Method": 0.54, "Resources": 0.11, "Evaluation": 0.09,
                 "Application": 0.11, "Problem": 0.11, "Other": 0.04}

_NON_FWS = [
    "Table {n} shows the results of the {t} experiments.",
    "Our {t} outperforms the strongest baseline by {n} points.",
    "In this paper, we presented a novel approach to {t}.",
    "The results show that the {t} benefits substantially from {u}.",
    "We described a simple {t} that relies on {u}.",
    "Experiments on {n} benchmark datasets confirm the effectiveness of the {t}.",
    "Previous work on {t} relied heavily on handcrafted rules.",
    "The {t} is trained on the standard split of the corpus.",
    "Error analysis reveals that most mistakes of the {t} involve rare words.",
    "We thank the anonymous reviewers for their helpful comments.",
]

_HEADINGS = [
    ("Conclusion", 0.55), ("Conclusions and Future Work", 0.2), ("Discussion", 0.06),
    ("Future Work", 0.04), ("Discussion and Conclusion", 0.05),
    ("Discussion and Future Work", 0.03), ("Concluding Remarks", 0.07),
]

_VENUES = ["ACL", "EMNLP", "NAACL"]


def _topic_weights(year: int) -> list[float]:
    # every topic peaks once over 2000-2021; width ~3 years
    span = 22.0
    w = []
    for i in range(len(TOPICS)):
        peak = 2000 + (i * 7) % 22
        d = min(abs(year - peak), span - abs(year - peak))
        w.append(0.05 + 2.0 ** (-(d / 1.5) ** 2))
    return w


def _pick_topic(rng: random.Random, year: int, exclude: str | None = None) -> str:
    while True:
        t = rng.choices(TOPICS, weights=_topic_weights(year))[0]
        if t != exclude:
            return t


def _fill(rng, template: str, year: int) -> str:
    t = _pick_topic(rng, year)
    return template.format(t=t, u=_pick_topic(rng, year, exclude=t), n=rng.randint(2, 9))


def make_paper(rng: random.Random, pid: str, year: int, venue: str, fws_lead: int = 2,
               noise: float = 0.0) -> dict:
    """One raw paper record; ``noise`` is the rate of flipped FWS tags and types."""
    heading = rng.choices([h for h, _ in _HEADINGS], weights=[w for _, w in _HEADINGS])[0]
    parts = []
    for _ in range(rng.randint(3, 7)):
        parts.append(_fill(rng, rng.choice(_NON_FWS), year))
    for _ in range(rng.choices([0, 1, 2, 3], weights=[0.15, 0.45, 0.3, 0.1])[0]):
        ftype = rng.choices(list(_TYPE_WEIGHTS), weights=list(_TYPE_WEIGHTS.values()))[0]
        sent = _fill(rng, rng.choice(_FWS[ftype]), year + fws_lead)
        if rng.random() < noise:
            ftype = rng.choice(list(_TYPE_WEIGHTS))
        if rng.random() < noise:
            parts.insert(rng.randint(1, len(parts)), sent)
        else:
            parts.insert(rng.randint(1, len(parts)), f'<FW type="{ftype}">{sent}</FW>')
    if rng.random() < noise:
        sent = _fill(rng, rng.choice(_NON_FWS), year)
        parts.insert(rng.randint(1, len(parts)), f'<FW type="Other">{sent}</FW>')
    abstract = " ".join(_fill(rng, rng.choice(_NON_FWS[:6]), year) for _ in range(3))
    chapters = [{"heading": "1 Introduction", "text": _fill(rng, _NON_FWS[2], year)}]
    chapters.append({"heading": f"{rng.randint(5, 8)} {heading}", "text": " ".join(parts)})
    if rng.random() < 0.1:
        chapters.append({"heading": "Acknowledgments", "text": _NON_FWS[-1]})
    return {"id": pid, "venue": venue, "year": year, "title": f"Paper {pid}",
            "abstract": abstract, "chapters": chapters}


def generate_papers(n_per_year: int = 20, years=range(2000, 2021), seed: int = 0,
                    venues=_VENUES, noise: float = 0.1) -> list[dict]:
    rng = random.Random(seed)
    papers = []
    for year in years:
        for i in range(n_per_year):
            venue = venues[i % len(venues)]
            papers.append(make_paper(rng, f"{venue}-{year}-{i:03d}", year, venue, noise=noise))
    return papers


def abstracts_only(years=range(2000, 2022), n_per_year: int = 20, seed: int = 1) -> list[dict]:
    """Papers that contribute only an abstract (e.g. the year after the FWS corpus ends)."""
    rng = random.Random(seed)
    out = []
    for year in years:
        for i in range(n_per_year):
            abstract = " ".join(_fill(rng, rng.choice(_NON_FWS[:6]), year) for _ in range(3))
            out.append({"id": f"ABS-{year}-{i:03d}", "venue": "Other", "year": year,
                        "title": "", "abstract": abstract, "chapters": []})
    return out


def write_jsonl(records, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for r in records:
            fh.write(json.dumps(r) + "\n")
