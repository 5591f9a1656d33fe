import math

import numpy as np
import pytest
import scipy.sparse as sp

from fwsmine.errors import DimensionMismatchError, EmptyCorpusError, SingleClassError
from fwsmine.features import (
    FeatureMask,
    FeatureSpace,
    SparseVector,
    build_vocabulary,
    chi_square_scores,
    count_matrix,
    project,
    select_top_k,
    tfidf_matrix,
    tfidf_vector,
)


def test_vocabulary_counts_documents():
    v = build_vocabulary([["a"], ["a", "b"]])
    assert v.index == {"a": 0, "b": 1}
    assert v.document_frequency.tolist() == [2, 1]
    assert v.n_documents == 2
    assert build_vocabulary([["a", "a"]]).document_frequency.tolist() == [1]
    with pytest.raises(EmptyCorpusError):
        build_vocabulary([])


def test_tfidf_hand_computed():
    v = build_vocabulary([["a"], ["a", "b"]])
    pre = np.array([1.0, math.log(3 / 2) + 1.0])
    assert pre[1] == pytest.approx(1.4055, abs=1e-4)
    vec = tfidf_vector(["a", "b"], v)
    assert vec.indices == (0, 1)
    np.testing.assert_allclose(vec.weights, pre / np.linalg.norm(pre), rtol=0, atol=1e-15)
    assert vec.weights == pytest.approx((0.580, 0.815), abs=5e-4)


def test_tfidf_oov_and_single():
    v = build_vocabulary([["a"], ["a", "b"]])
    assert tfidf_vector(["zzz"], v).indices == ()
    single = tfidf_vector(["a", "a"], build_vocabulary([["a", "a"]]))
    assert single.weights == (1.0,)


def test_tfidf_matrix_matches_vector_path():
    docs = [["a", "b", "b"], ["b", "c"], ["c", "c", "d", "a"]]
    v = build_vocabulary(docs)
    M = tfidf_matrix(count_matrix(docs, v), v)
    for i, d in enumerate(docs):
        np.testing.assert_allclose(M[i].toarray().ravel(), tfidf_vector(d, v).to_row().toarray().ravel(),
                                   atol=1e-15)


def test_chi_square_worked_example():
    y = np.array([1] * 10 + [0] * 10)
    x = np.array([1] * 8 + [0] * 2 + [1] * 2 + [0] * 8, dtype=float)
    scores = chi_square_scores(sp.csr_matrix(x[:, None]), y)
    assert scores[0] == 7.2


def test_chi_square_degenerate_features():
    y = np.array([0, 0, 1, 1])
    X = np.array([[1, 0], [1, 0], [1, 0], [1, 0]], dtype=float)
    assert chi_square_scores(X, y).tolist() == [0.0, 0.0]
    with pytest.raises(SingleClassError):
        chi_square_scores(X, np.zeros(4, dtype=int))


def test_select_top_k():
    assert select_top_k([0.1, 7.2, 3.0], 2).selected == (1, 2)
    assert select_top_k([1.0, 2.0], 10).selected == (0, 1)
    assert select_top_k([5, 5], 1).selected == (0,)
    assert select_top_k([3, 1, 2], None).selected == (0, 1, 2)


def test_project():
    v = SparseVector((1, 5), (0.6, 0.8), 6)
    p = project(v, FeatureMask((1,), 1))
    assert p.indices == (0,) and p.weights == (1.0,)
    assert project(v, FeatureMask((0, 2), 2)).indices == ()
    full = project(v, FeatureMask(tuple(range(6)), 6))
    np.testing.assert_allclose(full.weights, (0.6, 0.8))
    with pytest.raises(DimensionMismatchError):
        project(v, FeatureMask((1,), 1), vocab_size=7)


def test_sparse_vector_validation():
    with pytest.raises(ValueError):
        SparseVector((2, 1), (1.0, 1.0), 3)
    with pytest.raises(ValueError):
        SparseVector((3,), (1.0,), 3)


def test_feature_space_transform_rows_unit_or_zero():
    docs = [["a", "b"], ["b", "c"], ["c", "d"], ["d", "e"]]
    y = [0, 1, 0, 1]
    fs = FeatureSpace.fit(docs, y, 2)
    X = fs.transform(docs + [["zzz"]])
    norms = np.sqrt(np.asarray(X.multiply(X).sum(axis=1)).ravel())
    assert X.shape[1] == 2
    assert all(abs(n - 1) < 1e-12 or n == 0 for n in norms)
    assert norms[-1] == 0


def test_fit_counts_uses_training_vocabulary_only():
    docs = [["a", "b"], ["b", "c"], ["x", "y"]]
    v = build_vocabulary(docs)
    C = count_matrix(docs, v)
    space, keep, X = FeatureSpace.fit_counts(C[:2], v.terms, [0, 1], None)
    assert space.vocabulary.terms == ["a", "b", "c"]
    assert space.vocabulary.document_frequency.tolist() == [1, 2, 1]
    direct = FeatureSpace.fit(docs[:2], [0, 1], None)
    np.testing.assert_allclose(X.toarray(), direct.transform(docs[:2]).toarray(), atol=1e-15)
