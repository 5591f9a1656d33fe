"""
TF-IDF n-gram vectors and chi-square feature selection
======================================================
"""

import numpy as np

from fwsmine.features import (build_vocabulary, chi_square_scores, count_matrix,
                              select_top_k, tfidf_matrix)
from fwsmine.preprocess import sentence_grams

sentences = [
    ("We plan to extend this model to other languages.", 1),
    ("In future work we will explore richer features.", 1),
    ("Table 3 shows the results on the test set.", 0),
    ("Our model outperforms the baseline by two points.", 0),
]
docs = [sentence_grams(text) for text, _ in sentences]
y = np.array([label for _, label in sentences])

vocab = build_vocabulary(docs)
X = tfidf_matrix(count_matrix(docs, vocab), vocab)
print(f"{len(vocab)} n-grams (1-3) over {vocab.n_documents} sentences")
print("row norms:", np.sqrt(X.multiply(X).sum(axis=1)).A.ravel().round(6))

scores = chi_square_scores(X, y)
mask = select_top_k(scores, 8)
print("\ntop features by chi-square:")
for i in sorted(mask.selected, key=lambda i: -scores[i]):
    print(f"  {scores[i]:.3f}  {vocab.terms[i]}")
