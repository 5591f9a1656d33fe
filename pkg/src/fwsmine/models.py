"""Undersampling and the four sentence classifiers.

Naive Bayes (Bernoulli and multinomial event models) is natively
multi-class. Logistic regression and the linear SVM are trained by
deterministic full-batch (sub)gradient descent; with more than two classes
they are trained one-vs-rest. Models keep their feature space so they can
be applied to raw sentences and saved to a single JSON file.
"""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, field
from enum import Enum
from pathlib import Path
from typing import Sequence

import numpy as np
import scipy.sparse as sp

from .errors import DimensionMismatchError, NonFiniteLossError, SingleClassError
from .features import FeatureMask, FeatureSpace, SparseVector, Vocabulary, project

FORMAT_VERSION = 1


class ModelKind(str, Enum):
    BERNOULLI_NB = "bnb"
    MULTINOMIAL_NB = "mnb"
    LOGREG = "logreg"
    LINEAR_SVM = "svm"

    @property
    def is_nb(self) -> bool:
        return self in (ModelKind.BERNOULLI_NB, ModelKind.MULTINOMIAL_NB)


@dataclass
class Hyperparams:
    alpha: float = 1.0          # NB additive smoothing
    l2: float = 1e-4            # L2 strength for the linear models
    max_epochs: int = 1000
    tol: float = 1e-6           # gradient-norm tolerance (LogReg)
    learning_rate: float | None = None  # None: 1 / Lipschitz bound (LogReg), 0.5 (SVM)


@dataclass
class Dataset:
    X: sp.csr_matrix
    labels: np.ndarray
    class_names: list[str]

    def __post_init__(self):
        self.X = sp.csr_matrix(self.X)
        self.labels = np.asarray(self.labels, dtype=np.int64)
        if self.X.shape[0] != len(self.labels):
            raise DimensionMismatchError(f"{self.X.shape[0]} vectors vs {len(self.labels)} labels")
        if len(self.labels) and (self.labels.min() < 0 or self.labels.max() >= len(self.class_names)):
            raise ValueError("label outside class_names")

    def __len__(self):
        return len(self.labels)

    @property
    def vectors(self) -> list[SparseVector]:
        return [SparseVector.from_row(self.X[i]) for i in range(self.X.shape[0])]

    def subset(self, idx) -> "Dataset":
        idx = np.asarray(idx, dtype=np.int64)
        return Dataset(self.X[idx], self.labels[idx], self.class_names)


def undersample_indices(labels: Sequence[int], seed: int) -> np.ndarray:
    """Row indices of a class-balanced subsample, in seeded shuffled order.

    Every class larger than the smallest present class is drawn down to the
    smallest class's size without replacement.
    """
    labels = np.asarray(labels)
    rng = np.random.default_rng(seed)
    classes, counts = np.unique(labels, return_counts=True)
    if len(classes) == 0:
        return np.array([], dtype=np.int64)
    minority = counts.min()
    keep = []
    for c, n in zip(classes, counts):
        idx = np.flatnonzero(labels == c)
        if n > minority:
            idx = np.sort(rng.choice(idx, size=minority, replace=False))
        keep.append(idx)
    keep = np.concatenate(keep)
    return keep[rng.permutation(len(keep))]


def undersample(data: Dataset, seed: int) -> Dataset:
    return data.subset(undersample_indices(data.labels, seed))


# -- naive Bayes ----------------------------------------------------------------

def _fit_nb(kind: ModelKind, X: sp.csr_matrix, y: np.ndarray, n_classes: int, alpha: float):
    counts = np.bincount(y, minlength=n_classes).astype(float)
    onehot = sp.csr_matrix((np.ones(len(y)), (y, np.arange(len(y)))), shape=(n_classes, len(y)))
    log_prior = np.log(counts / counts.sum())
    if kind is ModelKind.BERNOULLI_NB:
        presence = sp.csr_matrix((X != 0).astype(float))
        present = np.asarray((onehot @ presence).todense())
        p = (present + alpha) / (counts[:, None] + 2.0 * alpha)
        return {"log_prior": log_prior, "log_p": np.log(p), "log_1mp": np.log1p(-p)}
    mass = np.asarray((onehot @ X).todense())
    theta = (mass + alpha) / (mass.sum(axis=1, keepdims=True) + alpha * X.shape[1])
    return {"log_prior": log_prior, "log_theta": np.log(theta)}


def _nb_joint(kind: ModelKind, params: dict, X: sp.csr_matrix) -> np.ndarray:
    if kind is ModelKind.BERNOULLI_NB:
        presence = sp.csr_matrix((X != 0).astype(float))
        delta = params["log_p"] - params["log_1mp"]
        return (presence @ delta.T) + params["log_1mp"].sum(axis=1) + params["log_prior"]
    return np.asarray(X @ params["log_theta"].T) + params["log_prior"]


# -- linear models ------------------------------------------------------------------

def logistic_loss_grad(w: np.ndarray, b: float, X, s: np.ndarray, l2: float, XT=None):
    """L2-regularized mean log-loss and its gradient; ``s`` holds +-1 targets.

    ``loss = mean(log(1 + exp(-s * (Xw + b)))) + l2/2 * |w|^2`` (bias not penalized).
    ``XT`` optionally supplies a precomputed ``X.T`` in CSR form.
    """
    z = s * (X @ w + b)
    loss = np.mean(np.logaddexp(0.0, -z)) + 0.5 * l2 * float(w @ w)
    # d/dz log(1+e^-z) = -sigmoid(-z)
    g = -s * _sigmoid(-z) / len(s)
    return loss, (X.T if XT is None else XT) @ g + l2 * w, float(g.sum())


def hinge_loss_subgrad(w: np.ndarray, b: float, X, s: np.ndarray, l2: float, XT=None):
    margin = s * (X @ w + b)
    active = margin < 1.0
    loss = np.mean(np.maximum(0.0, 1.0 - margin)) + 0.5 * l2 * float(w @ w)
    g = np.where(active, -s, 0.0) / len(s)
    return loss, (X.T if XT is None else XT) @ g + l2 * w, float(g.sum())


def _sigmoid(z):
    out = np.empty_like(z, dtype=float)
    pos = z >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-z[pos]))
    ez = np.exp(z[~pos])
    out[~pos] = ez / (1.0 + ez)
    return out


def _row_norm_sq_max(X) -> float:
    sq = np.asarray(sp.csr_matrix(X).multiply(X).sum(axis=1)).ravel()
    return float(sq.max()) if len(sq) else 0.0


def _fit_logreg(X, s, hyper: Hyperparams):
    # Nesterov-accelerated gradient descent on the smooth objective. The
    # Lipschitz constant of the mean log-loss gradient (with bias) is at most
    # (max |x|^2 + 1) / 4 + l2.
    n, d = X.shape
    XT = sp.csr_matrix(X.T)
    lip = 0.25 * (_row_norm_sq_max(X) + 1.0) + hyper.l2
    lr = hyper.learning_rate or 1.0 / lip
    w = np.zeros(d)
    b = 0.0
    w_prev, b_prev = w.copy(), b
    for t in range(1, hyper.max_epochs + 1):
        mom = (t - 1) / (t + 2)
        vw = w + mom * (w - w_prev)
        vb = b + mom * (b - b_prev)
        loss, gw, gb = logistic_loss_grad(vw, vb, X, s, hyper.l2, XT)
        if not math.isfinite(loss):
            raise NonFiniteLossError(f"log-loss became {loss} at epoch {t}; lower the learning rate")
        w_prev, b_prev = w, b
        w = vw - lr * gw
        b = vb - lr * gb
        if math.sqrt(float(gw @ gw) + gb * gb) < hyper.tol:
            break
    loss, gw, gb = logistic_loss_grad(w, b, X, s, hyper.l2, XT)
    if not math.isfinite(loss):
        raise NonFiniteLossError(f"log-loss became {loss}; lower the learning rate")
    return w, b


def _fit_svm(X, s, hyper: Hyperparams):
    # Full-batch subgradient descent with a 1/sqrt(t) step; the iterate with
    # the lowest objective is returned since subgradient steps are not monotone.
    n, d = X.shape
    lr0 = hyper.learning_rate or 0.5
    XT = sp.csr_matrix(X.T)
    w = np.zeros(d)
    b = 0.0
    best = (math.inf, w.copy(), b)
    for t in range(1, hyper.max_epochs + 1):
        loss, gw, gb = hinge_loss_subgrad(w, b, X, s, hyper.l2, XT)
        if not math.isfinite(loss):
            raise NonFiniteLossError(f"hinge loss became {loss} at epoch {t}; lower the learning rate")
        if loss < best[0]:
            best = (loss, w.copy(), b)
        step = lr0 / math.sqrt(t)
        w = w - step * gw
        b = b - step * gb
    loss, _, _ = hinge_loss_subgrad(w, b, X, s, hyper.l2, XT)
    if loss < best[0]:
        best = (loss, w, b)
    return best[1], best[2]


def _fit_linear(kind: ModelKind, X, y, n_classes: int, hyper: Hyperparams):
    fit = _fit_logreg if kind is ModelKind.LOGREG else _fit_svm
    targets = [1] if n_classes == 2 else range(n_classes)
    W, B = [], []
    for c in targets:
        s = np.where(y == c, 1.0, -1.0)
        w, b = fit(X, s, hyper)
        W.append(w)
        B.append(b)
    return {"coef": np.vstack(W), "intercept": np.array(B)}


def _linear_margins(params: dict, X, n_classes: int) -> np.ndarray:
    m = np.asarray(X @ params["coef"].T) + params["intercept"]
    if n_classes == 2:
        # one discriminant for class 1; class 0 sits at margin 0
        return np.hstack([np.zeros((m.shape[0], 1)), m])
    return m


# -- model ------------------------------------------------------------------------

@dataclass
class TrainedModel:
    kind: ModelKind
    params: dict[str, np.ndarray]
    class_names: list[str]
    feature_space: FeatureSpace | None = None
    training_seed: int = 0
    hyper: Hyperparams = field(default_factory=Hyperparams)
    task: str = "recognize"

    @property
    def n_features(self) -> int:
        p = self.params
        key = {"bnb": "log_p", "mnb": "log_theta"}.get(self.kind.value, "coef")
        return p[key].shape[1]

    def _as_matrix(self, X) -> sp.csr_matrix:
        if isinstance(X, SparseVector):
            if self.feature_space is not None and X.dimension == len(self.feature_space.vocabulary) \
                    and X.dimension != self.n_features:
                X = project(X, self.feature_space.mask)
            X = X.to_row()
        X = sp.csr_matrix(X)
        if X.shape[1] != self.n_features:
            if self.feature_space is not None and X.shape[1] == len(self.feature_space.vocabulary):
                from .features import project_matrix
                X = project_matrix(X, self.feature_space.mask)
            else:
                raise DimensionMismatchError(
                    f"input has {X.shape[1]} features, model expects {self.n_features}")
        return X

    def decision_scores(self, X) -> np.ndarray:
        """Per-class scores: NB log joint probabilities, linear margins."""
        X = self._as_matrix(X)
        if self.kind.is_nb:
            return np.asarray(_nb_joint(self.kind, self.params, X))
        return _linear_margins(self.params, X, len(self.class_names))

    def predict_proba(self, X) -> np.ndarray:
        return softmax(self.decision_scores(X))

    def predict_labels(self, X) -> np.ndarray:
        return np.argmax(self.decision_scores(X), axis=1)

    # -- persistence

    def to_json(self, provenance: dict | None = None) -> dict:
        fs = self.feature_space
        body = {
            "class_names": self.class_names,
            "task": self.task,
            "params": {k: v.tolist() for k, v in self.params.items()},
        }
        if fs is not None:
            body["vocabulary"] = {
                "terms": fs.vocabulary.terms,
                "document_frequency": fs.vocabulary.document_frequency.tolist(),
                "n_documents": fs.vocabulary.n_documents,
            }
            body["mask"] = {"selected": list(fs.mask.selected), "k": fs.mask.k}
            body["ngram_range"] = [fs.ngram_min, fs.ngram_max]
        header = {
            "format_version": FORMAT_VERSION,
            "kind": self.kind.value,
            "seed": self.training_seed,
            "hyperparams": asdict(self.hyper),
        }
        if provenance:
            header["provenance"] = provenance
        return {"header": header, "body": body}

    @classmethod
    def from_json(cls, doc: dict) -> "TrainedModel":
        head, body = doc["header"], doc["body"]
        if head.get("format_version") != FORMAT_VERSION:
            raise ValueError(f"unsupported model format {head.get('format_version')}")
        fs = None
        if "vocabulary" in body:
            v = body["vocabulary"]
            fs = FeatureSpace(
                Vocabulary(v["terms"], np.array(v["document_frequency"]), v["n_documents"]),
                FeatureMask(tuple(body["mask"]["selected"]), body["mask"]["k"]),
                *body["ngram_range"],
            )
        return cls(
            kind=ModelKind(head["kind"]),
            params={k: np.array(v, dtype=float) for k, v in body["params"].items()},
            class_names=list(body["class_names"]),
            feature_space=fs,
            training_seed=head["seed"],
            hyper=Hyperparams(**head["hyperparams"]),
            task=body.get("task", "recognize"),
        )

    def save(self, path: str | Path, provenance: dict | None = None) -> None:
        from .io import atomic_write_text
        atomic_write_text(path, json.dumps(self.to_json(provenance)))

    @classmethod
    def load(cls, path: str | Path) -> "TrainedModel":
        with open(path, encoding="utf-8") as fh:
            return cls.from_json(json.load(fh))


def softmax(scores: np.ndarray) -> np.ndarray:
    scores = np.atleast_2d(np.asarray(scores, dtype=float))
    z = scores - scores.max(axis=1, keepdims=True)
    e = np.exp(z)
    return e / e.sum(axis=1, keepdims=True)


def train(kind: ModelKind | str, data: Dataset, hyper: Hyperparams | None = None,
          seed: int = 0, feature_space: FeatureSpace | None = None,
          task: str = "recognize") -> TrainedModel:
    kind = ModelKind(kind)
    hyper = hyper or Hyperparams()
    y = data.labels
    n_classes = len(data.class_names)
    present = np.unique(y)
    if len(present) < 2:
        raise SingleClassError(f"training labels contain only {len(present)} class(es)")
    if kind.is_nb:
        params = _fit_nb(kind, data.X, y, n_classes, hyper.alpha)
    else:
        params = _fit_linear(kind, data.X, y, n_classes, hyper)
    return TrainedModel(kind, params, list(data.class_names), feature_space, seed, hyper, task)


def predict(model: TrainedModel, v) -> tuple[int, np.ndarray]:
    """Highest-scoring class (lowest index on ties) and the normalized scores.

    NB scores are posteriors; linear scores are softmax-normalized margins.
    """
    scores = model.decision_scores(v)[0]
    return int(np.argmax(scores)), softmax(scores)[0]


def sentence_docs(sentences, ngram_min: int = 1, ngram_max: int = 3) -> list[list[str]]:
    from .preprocess import sentence_grams
    return [sentence_grams(s.text, ngram_min, ngram_max) for s in sentences]


def predict_batch(model: TrainedModel, sentences) -> list:
    """Label sentences with a trained model, returning updated copies.

    A recognition model fills ``is_fws``; a typing model fills ``fws_type``
    on sentences already marked as FWS and leaves the rest untouched.
    """
    from dataclasses import replace

    from .corpus import FwsType

    sentences = list(sentences)
    fs = model.feature_space
    if fs is None:
        raise ValueError("model has no feature space; cannot featurize raw sentences")
    if model.task == "classify":
        targets = [i for i, s in enumerate(sentences) if s.is_fws]
    else:
        targets = list(range(len(sentences)))
    out = list(sentences)
    if not targets:
        return out
    X = fs.transform(sentence_docs([sentences[i] for i in targets], fs.ngram_min, fs.ngram_max))
    pred = model.predict_labels(X)
    for i, p in zip(targets, pred):
        name = model.class_names[p]
        if model.task == "classify":
            out[i] = replace(sentences[i], fws_type=FwsType.parse(name))
        else:
            is_fws = name == "FWS"
            out[i] = replace(sentences[i], is_fws=is_fws,
                             fws_type=sentences[i].fws_type if is_fws else None)
    return out
