"""``fwsmine`` command line.

Every subcommand accepts ``--config FILE`` plus flags that override single
config keys. Library errors end the process with exit status 1 and a
one-line ``error: <ErrorClass>: message`` diagnostic on stderr.
"""

from __future__ import annotations

import argparse
import sys
import warnings
from pathlib import Path

import numpy as np

from . import __version__
from .config import PipelineConfig, load_config
from .corpus import Chapter, Paper, dumps_papers, read_papers, restrict_to_target
from .errors import FwsError, LengthMismatchError, UndefinedMetricWarning
from .evaluation import cohens_kappa
from .io import atomic_write_text, provenance_line, write_csv
from .models import TrainedModel, predict_batch
from .resources import load_list
from . import pipeline as pl


def _out_dir(args, cfg: PipelineConfig) -> Path:
    d = Path(args.out_dir or cfg.output or ".")
    d.mkdir(parents=True, exist_ok=True)
    return d


def _need(value, flag: str):
    if not value:
        raise FwsError(f"missing input: pass {flag} or set it in the config")
    return value


def _write_corpus(path, papers, cfg: PipelineConfig) -> None:
    atomic_write_text(path, provenance_line(cfg.digest(), cfg.seed) + "\n" + dumps_papers(papers))


# -- subcommands --------------------------------------------------------------------

def cmd_ingest(args, cfg: PipelineConfig) -> None:
    papers = pl.load_corpus(_need(cfg.input, "--in"), cfg, labeled=not args.unlabeled,
                            target_only=False)
    kept = papers if args.all_chapters else restrict_to_target(papers)
    _write_corpus(_need(args.out, "--out"), kept, cfg)
    n_sent = sum(1 for p in kept for _ in p.sentences())
    n_fws = sum(1 for p in kept for s in p.sentences() if s.is_fws)
    print(f"ingest: {len(papers)} papers read, {len(kept)} written, "
          f"{n_sent} sentences ({n_fws} FWS)")
    if args.headings:
        pl.write_headings(args.headings, papers, cfg)


def cmd_train(args, cfg: PipelineConfig) -> None:
    papers = pl.load_corpus(_need(cfg.input, "--in"), cfg)
    if len(cfg.chi2_k) != 1:
        raise FwsError("train needs a single --chi2-k value (use evaluate for a grid)")
    if len(cfg.model) != 1:
        raise FwsError("train needs a single --model")
    model = pl.train_final(papers, cfg, args.task, cfg.model[0], cfg.chi2_k[0])
    out = _need(args.out, "--out")
    model.save(out, {"tool": f"fwsmine {__version__}", "config_hash": cfg.digest(), "seed": cfg.seed})
    print(f"train: {model.kind.value} ({args.task}) on {model.n_features} features -> {out}")


def cmd_evaluate(args, cfg: PipelineConfig) -> None:
    papers = pl.load_corpus(_need(cfg.input, "--in"), cfg)
    out = _out_dir(args, cfg)
    if args.task == "recognize":
        rows, best = pl.recognition_study(papers, cfg)
        reports = {m: r.report for m, r in best.items()}
        prefix = "recognition"
    else:
        rows, reports = pl.typing_study(papers, cfg)
        best = reports
        prefix = "typing"
    pl.write_grid(out / f"{prefix}_grid.csv", rows, cfg)
    pl.write_model_summary(out / f"{prefix}_models.csv", best, cfg)
    for m, rep in reports.items():
        pl.write_report(out / f"{prefix}_report_{m}.csv", rep, cfg)
        pl.write_confusion(out / f"{prefix}_confusion_{m}.csv", rep, cfg)
        k = pl.best_row(rows, m).chi2_k
        print(f"== {m} (best chi2_k={'all' if k is None else k})")
        print(rep.text_table())
    if args.per_fold_mean and args.task == "recognize":
        per = [[m, *best[m].per_fold_mean()] for m in best]
        write_csv(out / "recognition_per_fold_mean.csv",
                  ("model", "macro_precision", "macro_recall", "macro_f1"), per,
                  provenance_line(cfg.digest(), cfg.seed))


def cmd_predict(args, cfg: PipelineConfig) -> None:
    papers = pl.load_corpus(_need(cfg.input, "--in"), cfg, labeled=False)
    models = [TrainedModel.load(args.model_file)]
    if args.type_model_file:
        models.append(TrainedModel.load(args.type_model_file))
    out_papers = []
    n_fws = 0
    for p in papers:
        chapters = []
        for ch in p.chapters:
            sents = ch.sentences
            for m in models:
                sents = predict_batch(m, sents)
            n_fws += sum(1 for s in sents if s.is_fws)
            chapters.append(Chapter(ch.raw_heading, sents))
        out_papers.append(Paper(p.id, p.venue, p.year, p.title, chapters, p.abstract))
    _write_corpus(_need(args.out, "--out"), out_papers, cfg)
    print(f"predict: {len(out_papers)} papers, {n_fws} sentences predicted FWS")


_GROUP_ALIASES = {"type": "fws_type", "fws_type": "fws_type", "year": "year", "venue": "venue"}


def _group_by(text: str) -> tuple[str, ...]:
    out = []
    for g in (text or "").split(","):
        g = g.strip()
        if not g:
            continue
        if g not in _GROUP_ALIASES:
            raise FwsError(f"cannot group by {g!r}; choose from year, type, venue")
        out.append(_GROUP_ALIASES[g])
    return tuple(out)


def cmd_keywords(args, cfg: PipelineConfig) -> None:
    papers = pl.load_corpus(_need(cfg.input, "--in"), cfg)
    group_by = _group_by(args.group_by)
    records, table, verbs = pl.keyword_study(papers, cfg, group_by, args.verb_type or None)
    out = _out_dir(args, cfg)
    name = "keywords_by_" + ("_".join(group_by) if group_by else "all") + ".csv"
    pl.write_keywords(out / name, records, table, cfg, group_by)
    pl.write_verbs(out / "adjacent_verbs.csv", verbs, records, cfg)
    print(f"keywords: {len(records)} keyword occurrences -> {out / name}")


def cmd_trends(args, cfg: PipelineConfig) -> None:
    papers = pl.load_corpus(_need(cfg.input, "--in"), cfg)
    abstracts = pl.load_corpus(cfg.abstracts, cfg, target_only=False) if cfg.abstracts else None
    matrix, dist = pl.trend_study(papers, cfg, abstracts)
    out = _out_dir(args, cfg)
    pl.write_similarity(out / "similarity_matrix.csv", matrix, cfg)
    pl.write_type_distribution(out / "type_distribution.csv", dist, cfg)
    if args.venue or args.keyword:
        from .trends import type_distribution
        sub = type_distribution(papers, args.venue, args.keyword)
        tag = "_".join(x.replace(" ", "-") for x in (args.venue, args.keyword) if x)
        pl.write_type_distribution(out / f"type_distribution_{tag}.csv", sub, cfg)
    print(f"trends: {len(matrix.cells)} similarity cells over {len(matrix.base_years)} base years")


def _annotation_labels(papers: list[Paper], level: str) -> dict[str, list[str]]:
    out = {}
    for p in papers:
        labels = []
        for s in p.sentences():
            if not s.is_fws:
                labels.append("non-FWS")
            elif level == "fws":
                labels.append("FWS")
            else:
                labels.append(s.fws_type.value if s.fws_type else "FWS")
        out[p.id] = labels
    return out


def cmd_agreement(args, cfg: PipelineConfig) -> None:
    abbrevs = load_list("abbreviations", cfg.abbreviations)
    a = _annotation_labels(restrict_to_target(read_papers(args.a, abbreviations=abbrevs)), args.level)
    b = _annotation_labels(restrict_to_target(read_papers(args.b, abbreviations=abbrevs)), args.level)
    if set(a) != set(b):
        raise LengthMismatchError(f"annotation files cover different papers "
                                  f"({len(set(a) ^ set(b))} ids differ)")
    la, lb = [], []
    for pid in sorted(a):
        if len(a[pid]) != len(b[pid]):
            raise LengthMismatchError(f"paper {pid}: {len(a[pid])} vs {len(b[pid])} sentences")
        la.extend(a[pid])
        lb.extend(b[pid])
    rep = cohens_kappa(la, lb)
    print(f"agreement ({args.level}): n={rep.n} p_o={rep.observed:.6f} "
          f"p_e={rep.expected:.6f} kappa={rep.kappa:.6f}")
    if args.out:
        write_csv(args.out, ("level", "n", "observed", "expected", "kappa"),
                  [[args.level, rep.n, rep.observed, rep.expected, rep.kappa]],
                  provenance_line(cfg.digest(), cfg.seed))


def cmd_report(args, cfg: PipelineConfig) -> None:
    _need(cfg.input, "--in")
    files = pl.run_report(cfg, _out_dir(args, cfg), log=lambda m: print(m, file=sys.stderr))
    for name in files:
        print(name)


# -- argument parsing ---------------------------------------------------------------

# flag -> config key; every flag defaults to None so only given flags override
_CONFIG_FLAGS = {
    "--seed": "seed", "--chi2-k": "chi2_k", "--model": "model", "--alpha": "alpha",
    "--l2": "l2", "--max-epochs": "max_epochs", "--tol": "tol",
    "--learning-rate": "learning_rate", "--cv": "cv_folds", "--split": "split",
    "--top-n": "top_n", "--window": "window", "--horizons": "horizons",
    "--ngram-min": "ngram_min", "--ngram-max": "ngram_max", "--stopwords": "stopwords",
    "--stop-phrases": "stop_phrases", "--verbs": "verbs", "--abbreviations": "abbreviations",
    "--in": "input", "--abstracts": "abstracts",
}


def _common(sub: argparse.ArgumentParser, flags: list[str]) -> None:
    sub.add_argument("--config", help="flat key = value config file")
    for flag in flags:
        sub.add_argument(flag, dest="cfg_" + _CONFIG_FLAGS[flag], default=None)


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="fwsmine", description="Future work sentence mining")
    p.add_argument("--version", action="version", version=f"fwsmine {__version__}")
    subs = p.add_subparsers(dest="command", required=True)
    model_flags = ["--seed", "--chi2-k", "--model", "--alpha", "--l2", "--max-epochs", "--tol",
                   "--learning-rate", "--ngram-min", "--ngram-max", "--abbreviations", "--in"]
    kw_flags = ["--top-n", "--window", "--stopwords", "--stop-phrases", "--verbs",
                "--abbreviations", "--in"]

    s = subs.add_parser("ingest", help="parse raw papers into the normalized corpus")
    _common(s, ["--in", "--abbreviations"])
    s.add_argument("--out", required=True)
    s.add_argument("--unlabeled", action="store_true", help="input has no <FW> tags")
    s.add_argument("--all-chapters", action="store_true",
                   help="keep every chapter instead of only the target chapter")
    s.add_argument("--headings", help="also write the heading frequency table here")

    s = subs.add_parser("train", help="fit one model on all labelled sentences")
    _common(s, model_flags)
    s.add_argument("--task", choices=["recognize", "classify"], default="recognize")
    _undersample_flags(s)
    s.add_argument("--out", required=True, help="model JSON file")

    s = subs.add_parser("evaluate", help="cross-validate (recognize) or hold out (classify)")
    _common(s, model_flags + ["--cv", "--split"])
    s.add_argument("--task", choices=["recognize", "classify"], default="recognize")
    _undersample_flags(s)
    s.add_argument("--per-fold-mean", action="store_true",
                   help="also write the mean of per-fold macro scores")
    s.add_argument("--out-dir")

    s = subs.add_parser("predict", help="label an untagged corpus with trained models")
    _common(s, ["--in", "--abbreviations"])
    s.add_argument("--model-file", required=True)
    s.add_argument("--type-model-file", help="classify model applied to predicted FWS")
    s.add_argument("--out", required=True)

    s = subs.add_parser("keywords", help="FWS keyword tables and adjacent verbs")
    _common(s, kw_flags)
    s.add_argument("--group-by", default="year", help="comma list of year, type, venue")
    s.add_argument("--verb-type", default="Method",
                   help="FWS type whose sentences feed the verb table ('' for all)")
    s.add_argument("--out-dir")

    s = subs.add_parser("trends", help="FWS-to-abstract similarity and type distributions")
    _common(s, kw_flags + ["--horizons", "--abstracts"])
    s.add_argument("--venue")
    s.add_argument("--keyword")
    s.add_argument("--out-dir")

    s = subs.add_parser("agreement", help="Cohen's kappa between two annotated copies")
    _common(s, ["--abbreviations"])
    s.add_argument("--a", required=True)
    s.add_argument("--b", required=True)
    s.add_argument("--level", choices=["type", "fws"], default="type")
    s.add_argument("--out")

    s = subs.add_parser("report", help="the full corpus study as CSV files")
    _common(s, list(dict.fromkeys(model_flags + kw_flags + ["--cv", "--split", "--horizons",
                                                              "--abstracts"])))
    _undersample_flags(s)
    s.add_argument("--out-dir")
    return p


def _undersample_flags(sub) -> None:
    g = sub.add_mutually_exclusive_group()
    g.add_argument("--undersample", dest="cfg_undersample", action="store_const", const="true",
                   default=None)
    g.add_argument("--no-undersample", dest="cfg_undersample", action="store_const", const="false")


COMMANDS = {
    "ingest": cmd_ingest, "train": cmd_train, "evaluate": cmd_evaluate, "predict": cmd_predict,
    "keywords": cmd_keywords, "trends": cmd_trends, "agreement": cmd_agreement,
    "report": cmd_report,
}


def config_from_args(args) -> PipelineConfig:
    overrides = {k[4:]: v for k, v in vars(args).items() if k.startswith("cfg_") and v is not None}
    return load_config(args.config, overrides)


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = config_from_args(args)
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", UndefinedMetricWarning)
            np.seterr(all="ignore")
            COMMANDS[args.command](args, cfg)
    except (FwsError, ValueError, OSError, KeyError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
