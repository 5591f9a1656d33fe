"""Atomic file output and attributable CSV tables."""

from __future__ import annotations

import csv
import io
import os
import tempfile
from pathlib import Path
from typing import Iterable, Sequence

from . import __version__


def atomic_write_text(path: str | Path, text: str) -> None:
    """Write via a temp file in the same directory, then rename over ``path``."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def provenance_line(config_hash: str | None, seed: int | None) -> str:
    return f"# fwsmine {__version__} config_hash={config_hash or '-'} seed={seed if seed is not None else '-'}"


def format_cell(x) -> str:
    if x is None:
        return ""
    if isinstance(x, float):
        return f"{x:.6f}"
    return str(x)


def csv_text(header: Sequence[str], rows: Iterable[Sequence], provenance: str | None = None) -> str:
    buf = io.StringIO()
    if provenance:
        buf.write(provenance + "\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for r in rows:
        w.writerow([format_cell(x) for x in r])
    return buf.getvalue()


def write_csv(path, header, rows, provenance: str | None = None) -> None:
    atomic_write_text(path, csv_text(header, rows, provenance))


def read_csv(path) -> list[dict]:
    """Read a CSV written by :func:`write_csv`, skipping ``#`` comment lines."""
    with open(path, encoding="utf-8", newline="") as fh:
        lines = [ln for ln in fh if not ln.startswith("#")]
    return list(csv.DictReader(lines))
