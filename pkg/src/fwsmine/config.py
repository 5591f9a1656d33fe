"""Flat ``key = value`` pipeline configuration.

Lines are ``key = value``; ``#`` starts a comment. Unknown keys are an
error. Command-line flags override file values.

Keys and defaults::

    seed = 0
    ngram_min = 1
    ngram_max = 3
    chi2_k = 1000,5000,10000,20000,all     # one value or a grid
    model = bnb                            # bnb | mnb | logreg | svm (comma list allowed)
    alpha = 1.0
    l2 = 0.0001
    max_epochs = 1000
    tol = 1e-6
    learning_rate =                        # empty: automatic
    cv_folds = 10
    undersample = true
    split = 0.8,0.1,0.1
    top_n = 3
    window = 5
    horizons = 1..21
    stopwords = / stop_phrases = / verbs = / abbreviations =   # empty: shipped lists
    input = / abstracts = / output =
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import asdict, dataclass, field, fields
from pathlib import Path

from .errors import ConfigError
from .models import Hyperparams, ModelKind

DEFAULT_CHI2_GRID = (1000, 5000, 10000, 20000, None)


def parse_k_list(text: str) -> tuple[int | None, ...]:
    out = []
    for part in str(text).split(","):
        part = part.strip().lower()
        if not part:
            continue
        if part in ("all", "none"):
            out.append(None)
        else:
            k = int(part)
            if k < 1:
                raise ConfigError(f"chi2_k entries must be >= 1 or 'all', got {k}")
            out.append(k)
    if not out:
        raise ConfigError("chi2_k is empty")
    return tuple(out)


def parse_horizons(text: str) -> tuple[int, ...]:
    out = []
    for part in str(text).split(","):
        part = part.strip()
        if ".." in part:
            lo, hi = part.split("..")
            out.extend(range(int(lo), int(hi) + 1))
        elif part:
            out.append(int(part))
    if not out or min(out) < 1:
        raise ConfigError("horizons must be positive integers, e.g. 1..21")
    return tuple(sorted(set(out)))


def _bool(text) -> bool:
    if isinstance(text, bool):
        return text
    t = str(text).strip().lower()
    if t in ("1", "true", "yes", "on"):
        return True
    if t in ("0", "false", "no", "off"):
        return False
    raise ConfigError(f"not a boolean: {text!r}")


@dataclass
class PipelineConfig:
    seed: int = 0
    ngram_min: int = 1
    ngram_max: int = 3
    chi2_k: tuple = DEFAULT_CHI2_GRID
    model: tuple = ("bnb",)
    alpha: float = 1.0
    l2: float = 1e-4
    max_epochs: int = 1000
    tol: float = 1e-6
    learning_rate: float | None = None
    cv_folds: int = 10
    undersample: bool = True
    split: tuple = (0.8, 0.1, 0.1)
    top_n: int = 3
    window: int = 5
    horizons: tuple = tuple(range(1, 22))
    stopwords: str | None = None
    stop_phrases: str | None = None
    verbs: str | None = None
    abbreviations: str | None = None
    input: str | None = None
    abstracts: str | None = None
    output: str | None = None

    # keys excluded from the config hash: where things are written
    _UNHASHED = ("output",)
    _PATHS = ("stopwords", "stop_phrases", "verbs", "abbreviations", "input", "abstracts")

    @property
    def hyper(self) -> Hyperparams:
        return Hyperparams(self.alpha, self.l2, self.max_epochs, self.tol, self.learning_rate)

    def set(self, key: str, value) -> None:
        key = key.strip().replace("-", "_")
        names = {f.name for f in fields(self)}
        if key not in names:
            raise ConfigError(f"unknown config key {key!r}")
        if value is None:
            return
        if isinstance(value, str):
            value = value.strip()
        try:
            if key == "chi2_k":
                value = parse_k_list(value) if isinstance(value, str) else tuple(value)
            elif key == "model":
                value = tuple(ModelKind(m.strip()).value for m in
                              (value.split(",") if isinstance(value, str) else value) if m.strip())
            elif key == "split":
                value = tuple(float(x) for x in (value.split(",") if isinstance(value, str) else value))
            elif key == "horizons":
                value = parse_horizons(value) if isinstance(value, str) else tuple(value)
            elif key == "undersample":
                value = _bool(value)
            elif key == "learning_rate":
                value = float(value) if value not in ("", None) else None
            elif key in ("seed", "ngram_min", "ngram_max", "max_epochs", "cv_folds", "top_n", "window"):
                value = int(value)
            elif key in ("alpha", "l2", "tol"):
                value = float(value)
            else:
                value = str(value) or None
        except ValueError as exc:
            raise ConfigError(f"bad value for {key}: {exc}") from None
        setattr(self, key, value)

    def validate(self) -> None:
        if not (1 <= self.ngram_min <= self.ngram_max <= 3):
            raise ConfigError("need 1 <= ngram_min <= ngram_max <= 3")
        if len(self.split) != 3 or abs(sum(self.split) - 1.0) > 1e-9:
            raise ConfigError(f"split ratios must be three values summing to 1, got {self.split}")
        for key in self._PATHS:
            p = getattr(self, key)
            if p is not None and not Path(p).exists():
                raise ConfigError(f"{key}: file not found: {p}")

    def digest(self) -> str:
        """Stable hash of every setting that affects results.

        Referenced files contribute their content, not their path.
        """
        d = asdict(self)
        for key in self._UNHASHED:
            d.pop(key, None)
        for key in self._PATHS:
            if d.get(key):
                d[key] = hashlib.sha256(Path(d[key]).read_bytes()).hexdigest()
        blob = json.dumps(d, sort_keys=True, default=list)
        return hashlib.sha256(blob.encode()).hexdigest()[:16]


def read_config(path: str | Path) -> dict[str, str]:
    out = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ConfigError(f"{path}:{lineno}: expected key = value")
            k, v = line.split("=", 1)
            out[k.strip()] = v.strip()
    return out


def load_config(path: str | Path | None = None, overrides: dict | None = None) -> PipelineConfig:
    cfg = PipelineConfig()
    if path is not None:
        for k, v in read_config(path).items():
            cfg.set(k, v)
    for k, v in (overrides or {}).items():
        cfg.set(k, v)
    cfg.validate()
    return cfg
