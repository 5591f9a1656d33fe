"""Loading of the plain-text word lists shipped in ``fwsmine/data``.

Every list is one entry per line; blank lines and lines starting with ``#``
are ignored. Callers may pass their own path to replace a shipped list.
"""

from __future__ import annotations

from functools import lru_cache
from importlib import resources
from pathlib import Path

SHIPPED = {
    "stopwords": "stopwords.txt",
    "stop_phrases": "stop_phrases.txt",
    "verbs": "verbs.txt",
    "abbreviations": "abbreviations.txt",
    "stem_overrides": "stem_overrides.txt",
}


def shipped_path(name: str) -> Path:
    return Path(str(resources.files("fwsmine") / "data" / SHIPPED[name]))


def read_lines(path: str | Path) -> list[str]:
    out = []
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if line and not line.startswith("#"):
                out.append(line)
    return out


@lru_cache(maxsize=None)
def _cached(path: str) -> tuple[str, ...]:
    return tuple(read_lines(path))


def load_list(name: str, path: str | Path | None = None) -> tuple[str, ...]:
    """Return the entries of a shipped list, or of ``path`` when given."""
    return _cached(str(path) if path is not None else str(shipped_path(name)))
