"""
Do future work keywords anticipate later abstracts?
===================================================

Yearly FWS keyword proportions are compared with abstract keyword
proportions n years later by cosine similarity.
"""

from fwsmine import pipeline as pl
from fwsmine.config import load_config
from fwsmine.corpus import paper_from_json, restrict_to_target
from fwsmine.synthetic import abstracts_only, generate_papers
from fwsmine.trends import mean_ratio

papers = restrict_to_target(paper_from_json(r) for r in generate_papers(n_per_year=25,
                                                                         years=range(2005, 2016)))
abstracts = [paper_from_json(r) for r in abstracts_only(years=range(2005, 2019), n_per_year=25)]
cfg = load_config(overrides={"horizons": "1..3"})

matrix, dist = pl.trend_study(papers, cfg, abstracts)
print("base   " + "  ".join(f"n={n}" for n in matrix.horizons))
for row in matrix.rows():
    print(row[0], "  ".join("  -  " if v is None else f"{v:.3f}" for v in row[1:]))

print("\nshare of papers with a Method-type FWS:", round(mean_ratio(dist, "Method"), 3))
