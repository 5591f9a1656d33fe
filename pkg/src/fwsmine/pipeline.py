"""Corpus-level studies built from the module operations.

Each ``*_study`` function returns plain data; the matching ``write_*``
function emits it as CSV with a provenance comment row. The CLI is a thin
layer over these.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

import numpy as np

from .config import PipelineConfig
from .corpus import FWS_TYPE_NAMES, FwsType, Paper, Sentence, read_papers, restrict_to_target
from .errors import UndefinedMetricWarning
from .evaluation import (
    REPORT_HEADER,
    CVResult,
    EvalReport,
    cross_validate,
    global_counts,
    holdout_evaluate,
)
from .features import FeatureSpace
from .io import provenance_line, write_csv
from .keywords import (
    KeywordExtractor,
    KeywordRecord,
    aggregate_keywords,
    candidate_document_frequency,
    load_verbs,
    surface_forms,
    verb_table,
)
from .models import Dataset, ModelKind, TrainedModel, sentence_docs, train, undersample_indices
from .resources import load_list
from .trends import TYPE_HEADER, similarity_matrix, type_distribution, yearly_vectors

RECOGNITION_CLASSES = ["non-FWS", "FWS"]


def load_corpus(path, cfg: PipelineConfig | None = None, labeled: bool = True,
                target_only: bool = True) -> list[Paper]:
    abbrevs = load_list("abbreviations", cfg.abbreviations) if cfg else None
    papers = read_papers(path, labeled=labeled, abbreviations=abbrevs)
    return restrict_to_target(papers) if target_only else papers


def recognition_examples(papers: Sequence[Paper]) -> tuple[list[Sentence], np.ndarray]:
    sents = [s for p in papers for s in p.sentences() if s.is_fws is not None]
    return sents, np.array([int(s.is_fws) for s in sents], dtype=np.int64)


def typing_examples(papers: Sequence[Paper]) -> tuple[list[Sentence], np.ndarray]:
    sents = [s for p in papers for s in p.sentences() if s.is_fws and s.fws_type is not None]
    return sents, np.array([FWS_TYPE_NAMES.index(s.fws_type.value) for s in sents], dtype=np.int64)


# -- model selection -------------------------------------------------------------------

@dataclass
class GridRow:
    model: str
    chi2_k: int | None
    n_features: int
    report: EvalReport

    def cells(self) -> list:
        return [self.model, "all" if self.chi2_k is None else self.chi2_k, self.n_features,
                *self.report.macro_avg, *self.report.weighted_avg, self.report.accuracy]


GRID_HEADER = ("model", "chi2_k", "n_features", "macro_precision", "macro_recall", "macro_f1",
               "weighted_precision", "weighted_recall", "weighted_f1", "accuracy")


def best_row(rows: Sequence[GridRow], model: str | None = None) -> GridRow:
    """Highest macro F1; ties go to the smaller k ('all' counts as largest)."""
    cand = [r for r in rows if model is None or r.model == model]
    return min(cand, key=lambda r: (-round(r.report.macro_f1, 12),
                                    np.inf if r.chi2_k is None else r.chi2_k))


def recognition_study(papers: Sequence[Paper], cfg: PipelineConfig) -> tuple[list[GridRow], dict]:
    """k-fold CV over the model x chi2_k grid for FWS recognition.

    Returns the grid rows and, per model, the CV result at its best grid point.
    """
    sents, y = recognition_examples(papers)
    docs = sentence_docs(sents, cfg.ngram_min, cfg.ngram_max)
    counts = global_counts(docs)
    rows, results = [], {}
    for model in cfg.model:
        for k in cfg.chi2_k:
            with warnings.catch_warnings():
                warnings.simplefilter("ignore", UndefinedMetricWarning)
                res = cross_validate(model, docs, y, RECOGNITION_CLASSES, cfg.hyper, cfg.cv_folds,
                                     cfg.seed, cfg.undersample, k, counts)
            n_feat = int(np.mean([f.n_features for f in res.folds]))
            rows.append(GridRow(model, k, n_feat, res.report))
            results[(model, k)] = res
    best = {m: results[(m, best_row(rows, m).chi2_k)] for m in cfg.model}
    return rows, best


def typing_study(papers: Sequence[Paper], cfg: PipelineConfig) -> tuple[list[GridRow], dict]:
    """Stratified train/validation/test split for the six-way typing task.

    The grid is scored on the validation part; per model the test report at
    the best validation point is returned.
    """
    sents, y = typing_examples(papers)
    docs = sentence_docs(sents, cfg.ngram_min, cfg.ngram_max)
    counts = global_counts(docs)
    rows, tests = [], {}
    for model in cfg.model:
        for k in cfg.chi2_k:
            with warnings.catch_warnings():
                warnings.simplefilter("ignore", UndefinedMetricWarning)
                val, test, parts = holdout_evaluate(model, docs, y, FWS_TYPE_NAMES, cfg.hyper,
                                                    cfg.seed, cfg.split, k, counts)
            rows.append(GridRow(model, k, 0, val))
            tests[(model, k)] = test
    best = {m: tests[(m, best_row(rows, m).chi2_k)] for m in cfg.model}
    return rows, best


def train_final(papers: Sequence[Paper], cfg: PipelineConfig, task: str, model: str,
                chi2_k: int | None) -> TrainedModel:
    """Fit a model on all labelled sentences (undersampled for recognition if configured)."""
    if task == "recognize":
        sents, y = recognition_examples(papers)
        names = RECOGNITION_CLASSES
        if cfg.undersample:
            idx = undersample_indices(y, cfg.seed)
            sents, y = [sents[i] for i in idx], y[idx]
    else:
        sents, y = typing_examples(papers)
        names = FWS_TYPE_NAMES
    docs = sentence_docs(sents, cfg.ngram_min, cfg.ngram_max)
    space = FeatureSpace.fit(docs, y, chi2_k, cfg.ngram_min, cfg.ngram_max)
    data = Dataset(space.transform(docs), y, list(names))
    return train(model, data, cfg.hyper, cfg.seed, space, task)


# -- keywords and trends -----------------------------------------------------------------

def _extractor(cfg: PipelineConfig) -> KeywordExtractor:
    return KeywordExtractor.default(cfg.top_n, cfg.stopwords, cfg.stop_phrases)


def fws_keywords(papers: Sequence[Paper], cfg: PipelineConfig) -> tuple[list[KeywordRecord], list]:
    """Keyword records for every FWS plus ``(text, keywords, type)`` per sentence."""
    fws = [(p, s) for p in papers for s in p.sentences() if s.is_fws]
    ext = _extractor(cfg)
    cands = [ext.candidates(s.text) for _, s in fws]
    df = candidate_document_frequency(cands)
    records, per_sentence = [], []
    for c, (p, s) in zip(cands, fws):
        ftype = s.fws_type.value if s.fws_type else None
        picked = ext.select(c, df)
        per_sentence.append((s.text, [ph for ph, _ in picked], ftype))
        for stemmed, surface in picked:
            records.append(KeywordRecord(stemmed, p.id, p.year, p.venue.value, ftype, surface))
    return records, per_sentence


def abstract_keywords(papers: Sequence[Paper], cfg: PipelineConfig) -> list[KeywordRecord]:
    items = [(p.abstract, {"paper_id": p.id, "year": p.year, "venue": p.venue.value})
             for p in papers if p.abstract]
    return _extractor(cfg).extract_corpus(items)


def keyword_study(papers: Sequence[Paper], cfg: PipelineConfig, group_by=("year",),
                  verb_type: str | None = "Method"):
    """Keyword frequency table plus the adjacent-verb table for one FWS type."""
    records, per_sentence = fws_keywords(papers, cfg)
    table = aggregate_keywords(records, group_by, dedup=False)
    wanted = FwsType.parse(verb_type).value if verb_type else None
    typed = [(t, kws) for t, kws, ftype in per_sentence if wanted is None or ftype == wanted]
    verbs = verb_table(typed, load_verbs(cfg.verbs), cfg.window)
    return records, table, verbs


def trend_study(papers: Sequence[Paper], cfg: PipelineConfig, abstract_papers=None):
    fws_records, _ = fws_keywords(papers, cfg)
    abs_records = abstract_keywords(abstract_papers if abstract_papers is not None else papers, cfg)
    matrix = similarity_matrix(yearly_vectors(fws_records, "FWS"),
                               yearly_vectors(abs_records, "Abstract"), cfg.horizons)
    return matrix, type_distribution(papers)


# -- writers ---------------------------------------------------------------------------

def _prov(cfg: PipelineConfig) -> str:
    return provenance_line(cfg.digest(), cfg.seed)


def write_grid(path, rows: Sequence[GridRow], cfg: PipelineConfig) -> None:
    write_csv(path, GRID_HEADER, [r.cells() for r in rows], _prov(cfg))


def write_report(path, report: EvalReport, cfg: PipelineConfig) -> None:
    write_csv(path, REPORT_HEADER, report.rows(), _prov(cfg))


def write_confusion(path, report: EvalReport, cfg: PipelineConfig) -> None:
    rows = [[name, *map(int, row)] for name, row in zip(report.class_names, report.confusion)]
    write_csv(path, ["true\\pred", *report.class_names], rows, _prov(cfg))


def write_model_summary(path, best: dict[str, CVResult | EvalReport], cfg: PipelineConfig) -> None:
    """One row per model at its best grid point (Table 5 layout)."""
    rows = []
    for model, res in best.items():
        rep = res.report if isinstance(res, CVResult) else res
        rows.append([model, *rep.macro_avg, *rep.weighted_avg])
    write_csv(path, ("model", "macro_precision", "macro_recall", "macro_f1",
                     "weighted_precision", "weighted_recall", "weighted_f1"), rows, _prov(cfg))


def write_keywords(path, records, table, cfg: PipelineConfig, group_by=("year",)) -> None:
    forms = surface_forms(records)
    rows = []
    for group, counts in table.items():
        label = "/".join(str(g) for g in group) if group else "all"
        for phrase, n in counts:
            rows.append([label, phrase, forms.get(phrase, phrase), n])
    header = ("group" if not group_by else "+".join(group_by), "phrase", "surface", "count")
    write_csv(path, header, rows, _prov(cfg))


def write_verbs(path, verbs, records, cfg: PipelineConfig) -> None:
    forms = surface_forms(records)
    rows = [[kw, forms.get(kw, kw), v, n, share]
            for kw, entries in verbs.items() for v, n, share in entries]
    write_csv(path, ("keyword", "surface", "verb", "count", "proportion"), rows, _prov(cfg))


def write_similarity(path, matrix, cfg: PipelineConfig) -> None:
    write_csv(path, ["base_year", *[f"n={n}" for n in matrix.horizons]], matrix.rows(), _prov(cfg))


def write_type_distribution(path, rows, cfg: PipelineConfig) -> None:
    write_csv(path, TYPE_HEADER, [[r.year, r.fws_type, r.fws_count, r.fws_pct, r.papers_with_type,
                                   r.total_papers, r.ratio] for r in rows], _prov(cfg))


def write_headings(path, papers_all: Sequence[Paper], cfg: PipelineConfig) -> None:
    from .corpus import HeadingClass, heading_table
    counts = heading_table(papers_all)
    total = sum(counts.values()) or 1
    rows = [[h.value, counts.get(h, 0), counts.get(h, 0) / total] for h in HeadingClass]
    write_csv(path, ("heading", "frequency", "ratio"), rows, _prov(cfg))


def run_report(cfg: PipelineConfig, out_dir: str | Path, log=print) -> dict[str, Path]:
    """Every corpus study in one pass; returns the written files by name."""
    out = Path(out_dir)
    all_papers = load_corpus(cfg.input, cfg, target_only=False)
    papers = restrict_to_target(all_papers)
    abstracts = load_corpus(cfg.abstracts, cfg, target_only=False) if cfg.abstracts else None
    files = {}

    def emit(name):
        files[name] = out / name
        return files[name]

    write_headings(emit("headings.csv"), all_papers, cfg)
    log(f"[report] {len(papers)} papers with a target chapter")

    rows, best = recognition_study(papers, cfg)
    write_grid(emit("recognition_grid.csv"), rows, cfg)
    write_model_summary(emit("recognition_models.csv"), best, cfg)
    for m, res in best.items():
        write_report(emit(f"recognition_report_{m}.csv"), res.report, cfg)
        write_confusion(emit(f"recognition_confusion_{m}.csv"), res.report, cfg)
    log("[report] recognition done")

    trows, tbest = typing_study(papers, cfg)
    write_grid(emit("typing_grid.csv"), trows, cfg)
    write_model_summary(emit("typing_models.csv"), tbest, cfg)
    for m, rep in tbest.items():
        write_report(emit(f"typing_report_{m}.csv"), rep, cfg)
    log("[report] typing done")

    records, table, verbs = keyword_study(papers, cfg, ("year",))
    write_keywords(emit("keywords_by_year.csv"), records, table, cfg, ("year",))
    write_keywords(emit("keywords_by_type.csv"), records,
                   aggregate_keywords(records, ("fws_type",), dedup=False), cfg, ("fws_type",))
    write_verbs(emit("adjacent_verbs_method.csv"), verbs, records, cfg)

    matrix, dist = trend_study(papers, cfg, abstracts)
    write_similarity(emit("similarity_matrix.csv"), matrix, cfg)
    write_type_distribution(emit("type_distribution.csv"), dist, cfg)
    log("[report] keywords and trends done")
    return files
