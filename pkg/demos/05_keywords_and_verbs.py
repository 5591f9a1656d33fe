"""
Keywords of future work sentences and the verbs around them
===========================================================
"""

from fwsmine.keywords import KeywordExtractor, adjacent_verbs, load_verbs
from fwsmine.preprocess import clean_text, tokenize

ext = KeywordExtractor.default()
sentence = ("In future work, we plan to improve the neural machine translation system "
            "by incorporating syntactic information.")

cands = ext.candidates(sentence)
print("candidates:", cands)
for stemmed, surface in ext.select(cands):
    verbs = adjacent_verbs(tokenize(clean_text(sentence)), surface, load_verbs())
    print(f"  {surface!r:40} stem={stemmed!r:32} verbs={verbs}")
