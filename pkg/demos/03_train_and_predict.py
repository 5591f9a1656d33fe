"""
Training a recognizer and labelling unseen sentences
====================================================

Uses the bundled synthetic corpus generator so the script runs anywhere.
"""

import random

from fwsmine import pipeline as pl
from fwsmine.config import load_config
from fwsmine.corpus import paper_from_json, parse_annotated_text, restrict_to_target
from fwsmine.models import predict_batch
from fwsmine.synthetic import generate_papers

papers = restrict_to_target(paper_from_json(r) for r in generate_papers(n_per_year=20,
                                                                         years=range(2010, 2016)))
cfg = load_config(overrides={"chi2_k": "1000", "seed": 1})

recognizer = pl.train_final(papers, cfg, "recognize", "bnb", 1000)
typer = pl.train_final(papers, cfg, "classify", "mnb", None)
print(f"recognizer: {recognizer.n_features} features, typer: {typer.n_features} features")

text = ("We described a new dependency parser. Table 2 shows the results. "
        "In future work, we will extend our parser to incorporate word embeddings. "
        "We plan to collect a larger annotated corpus in several languages.")
sents = parse_annotated_text(text, labeled=False, paper_id="new")
for s in predict_batch(typer, predict_batch(recognizer, sents)):
    print(f"  {'FWS' if s.is_fws else '---'} {s.fws_type.value if s.fws_type else '':10} {s.text}")

# the model file is plain JSON and round-trips exactly
recognizer.save("/tmp/fwsmine_demo_model.json")
