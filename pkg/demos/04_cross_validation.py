"""
Cross-validated recognition over a chi-square grid
==================================================

Each fold builds its vocabulary, TF-IDF weights and chi-square mask from its
own training rows, undersamples them, and predicts the held-out fold.
"""

from fwsmine import pipeline as pl
from fwsmine.config import load_config
from fwsmine.corpus import paper_from_json, restrict_to_target
from fwsmine.synthetic import generate_papers

papers = restrict_to_target(paper_from_json(r) for r in generate_papers(n_per_year=15,
                                                                         years=range(2010, 2016)))
cfg = load_config(overrides={"model": "bnb,mnb,logreg,svm", "chi2_k": "300,1000,all",
                             "cv_folds": 5, "max_epochs": 300})

rows, best = pl.recognition_study(papers, cfg)
print(f"{'model':7} {'k':>5} {'macro F1':>9}")
for r in rows:
    print(f"{r.model:7} {str(r.chi2_k or 'all'):>5} {r.report.macro_f1:9.4f}")

winner = pl.best_row(rows)
print(f"\nbest: {winner.model} at k={winner.chi2_k or 'all'}")
print(best[winner.model].report.text_table())
