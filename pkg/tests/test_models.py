import math

import numpy as np
import pytest
import scipy.sparse as sp

from fwsmine.corpus import FwsType, Sentence
from fwsmine.errors import SingleClassError
from fwsmine.features import FeatureSpace, SparseVector
from fwsmine.models import (
    Dataset,
    Hyperparams,
    ModelKind,
    TrainedModel,
    logistic_loss_grad,
    predict,
    predict_batch,
    sentence_docs,
    softmax,
    train,
    undersample_indices,
)


def test_undersample_counts():
    y = np.array([0] * 100 + [1] * 20)
    idx = undersample_indices(y, 0)
    assert np.bincount(y[idx]).tolist() == [20, 20]
    assert len(set(idx.tolist())) == 40


def test_undersample_balanced_is_identity_multiset():
    y = np.array([0, 1, 0, 1, 2, 2])
    assert sorted(undersample_indices(y, 5).tolist()) == list(range(6))


def test_undersample_deterministic():
    y = np.random.default_rng(1).integers(0, 3, 200)
    assert undersample_indices(y, 9).tolist() == undersample_indices(y, 9).tolist()


TOY_DOCS = [["we", "plan", "we plan"], ["future", "work", "future work"],
            ["result", "show", "result show"], ["tabl", "show", "tabl show"]]


def _nb_toy():
    docs = TOY_DOCS
    y = np.array([1, 1, 0, 0])
    fs = FeatureSpace.fit(docs, y, None)
    return fs, Dataset(fs.transform(docs), y, ["neg", "pos"])


def test_bernoulli_nb_toy_posterior_matches_hand_oracle():
    fs, data = _nb_toy()
    model = train("bnb", data, feature_space=fs)
    query = ["we", "plan", "future", "we plan", "plan future", "we plan future"]
    x = fs.transform([query])
    cls, post = predict(model, x)
    assert model.class_names[cls] == "pos"
    # hand oracle: Laplace-smoothed presence probabilities, both presence and
    # absence terms, equal priors
    terms = fs.vocabulary.terms
    present = {t for t in query if t in fs.vocabulary.index}
    logp = []
    for label in (0, 1):
        rows = [set(d) for d, yy in zip(TOY_DOCS, [1, 1, 0, 0]) if yy == label]
        lp = math.log(0.5)
        for t in terms:
            p = (sum(t in r for r in rows) + 1) / (len(rows) + 2)
            lp += math.log(p if t in present else 1 - p)
        logp.append(lp)
    oracle = np.exp(np.array(logp) - max(logp))
    oracle /= oracle.sum()
    np.testing.assert_allclose(post, oracle, atol=1e-12)
    assert post[1] > 0.5


def test_multinomial_nb_toy():
    fs, data = _nb_toy()
    model = train("mnb", data)
    cls, post = predict(model, fs.transform([["we", "plan", "future"]]))
    assert cls == 1 and post[1] > 0.5


def test_nb_zero_vector_uses_priors():
    X = sp.csr_matrix(np.array([[1.0, 0], [1.0, 0], [0, 1.0]]))
    model = train("mnb", Dataset(X, [0, 0, 1], ["a", "b"]))
    cls, post = predict(model, sp.csr_matrix((1, 2)))
    assert cls == 0
    np.testing.assert_allclose(post, [2 / 3, 1 / 3])


def test_nb_tie_goes_to_class_zero():
    X = sp.csr_matrix(np.array([[1.0, 0], [1.0, 0]]))
    model = train("bnb", Dataset(X, [0, 1], ["a", "b"]))
    assert predict(model, X[:1])[0] == 0


@pytest.mark.parametrize("kind", ["logreg", "svm"])
def test_linear_models_fit_separable_data(kind):
    rng = np.random.default_rng(0)
    X = np.vstack([rng.normal(2, 0.3, (20, 3)), rng.normal(-2, 0.3, (20, 3))])
    y = np.array([1] * 20 + [0] * 20)
    model = train(kind, Dataset(sp.csr_matrix(X), y, ["n", "p"]), Hyperparams(max_epochs=500))
    assert (model.predict_labels(sp.csr_matrix(X)) == y).all()


@pytest.mark.parametrize("kind", ["logreg", "svm", "bnb", "mnb"])
def test_multiclass_separable(kind):
    X = sp.csr_matrix(np.eye(3).repeat(5, axis=0))
    y = np.repeat([0, 1, 2], 5)
    model = train(kind, Dataset(X, y, ["a", "b", "c"]), Hyperparams(max_epochs=500))
    assert (model.predict_labels(X) == y).all()


def test_single_class_rejected():
    with pytest.raises(SingleClassError):
        train("bnb", Dataset(sp.csr_matrix(np.eye(2)), [1, 1], ["a", "b"]))


def test_logistic_gradient_central_differences():
    rng = np.random.default_rng(3)
    X = sp.random(30, 8, density=0.3, random_state=3, format="csr")
    s = rng.choice([-1.0, 1.0], 30)
    w, b = rng.normal(size=8), 0.3
    _, gw, gb = logistic_loss_grad(w, b, X, s, 0.01)
    h = 1e-6
    num = np.array([(logistic_loss_grad(w + h * e, b, X, s, 0.01)[0]
                     - logistic_loss_grad(w - h * e, b, X, s, 0.01)[0]) / (2 * h) for e in np.eye(8)])
    np.testing.assert_allclose(gw, num, rtol=1e-5, atol=1e-9)
    nb = (logistic_loss_grad(w, b + h, X, s, 0.01)[0] - logistic_loss_grad(w, b - h, X, s, 0.01)[0]) / (2 * h)
    assert gb == pytest.approx(nb, rel=1e-5)


def test_softmax_shift_invariance():
    s = np.array([[1.0, 3.0, -2.0]])
    np.testing.assert_allclose(softmax(s), softmax(s + 100.0), atol=1e-15)
    assert np.argmax(softmax(s)) == np.argmax(s + 7)


@pytest.mark.parametrize("kind", list(ModelKind))
def test_model_json_round_trip(kind, tmp_path):
    fs, data = _nb_toy()
    model = train(kind, data, Hyperparams(max_epochs=50), seed=4, feature_space=fs)
    path = tmp_path / "m.json"
    model.save(path, {"config_hash": "abc"})
    back = TrainedModel.load(path)
    X = fs.transform([["we", "plan"], ["tabl", "show"], []])
    np.testing.assert_array_equal(model.decision_scores(X), back.decision_scores(X))
    assert back.training_seed == 4 and back.kind is kind
    assert back.feature_space.vocabulary.terms == fs.vocabulary.terms


def test_predict_accepts_sparse_vector_in_full_space():
    fs, data = _nb_toy()
    model = train("bnb", data, feature_space=fs)
    full = fs.full_vectors([["we", "plan"]])
    v = SparseVector.from_row(full)
    assert predict(model, v)[0] == predict(model, fs.transform([["we", "plan"]]))[0]


def test_predict_batch_fills_labels():
    train_sents = [Sentence("We plan to extend the parser.", True, FwsType.METHOD, "p", 0),
                   Sentence("Future work will collect more data.", True, FwsType.RESOURCES, "p", 1),
                   Sentence("Table 2 shows the results.", False, None, "p", 2),
                   Sentence("The results show gains.", False, None, "p", 3)]
    y = np.array([1, 1, 0, 0])
    docs = sentence_docs(train_sents)
    fs = FeatureSpace.fit(docs, y, None)
    rec = train("bnb", Dataset(fs.transform(docs), y, ["non-FWS", "FWS"]), feature_space=fs)
    unl = [Sentence(s.text, None, None, "q", i) for i, s in enumerate(train_sents)]
    out = predict_batch(rec, unl)
    assert [s.is_fws for s in out] == [True, True, False, False]
    assert predict_batch(rec, []) == []
    ty = np.array([0, 1])
    tfs = FeatureSpace.fit(docs[:2], ty, None)
    typer = train("mnb", Dataset(tfs.transform(docs[:2]), ty, ["Method", "Resources"]),
                  feature_space=tfs, task="classify")
    typed = predict_batch(typer, out)
    assert [s.fws_type for s in typed] == [FwsType.METHOD, FwsType.RESOURCES, None, None]
