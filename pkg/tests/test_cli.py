import hashlib
import json
import subprocess
import sys

import pytest

from fwsmine.cli import main


def _cfg(tmp_path, synthetic_dir, **extra):
    lines = {"seed": 1, "chi2_k": "300,all", "model": "bnb,logreg", "cv_folds": 4,
             "max_epochs": 200, "input": synthetic_dir / "papers.jsonl",
             "abstracts": synthetic_dir / "abstracts.jsonl", "horizons": "1..4", **extra}
    p = tmp_path / "cfg.txt"
    p.write_text("".join(f"{k} = {v}\n" for k, v in lines.items()))
    return p


def _digest(path):
    return hashlib.sha256(path.read_bytes()).hexdigest()


def test_ingest_unbalanced_tags(tmp_path, capsys):
    bad = tmp_path / "bad.jsonl"
    bad.write_text(json.dumps({"id": "x", "year": 2010,
                               "chapters": [{"heading": "Conclusion", "text": "<FW>open"}]}) + "\n")
    assert main(["ingest", "--in", str(bad), "--out", str(tmp_path / "o.jsonl")]) != 0
    assert "UnbalancedTags" in capsys.readouterr().err
    assert not (tmp_path / "o.jsonl").exists()


def test_ingest_writes_target_chapters(tmp_path, synthetic_dir):
    out = tmp_path / "corpus.jsonl"
    src = synthetic_dir / "papers.jsonl"
    before = _digest(src)
    assert main(["ingest", "--in", str(src), "--out", str(out),
                 "--headings", str(tmp_path / "h.csv")]) == 0
    assert _digest(src) == before
    lines = out.read_text().splitlines()
    assert lines[0].startswith("# fwsmine 0.1.0 config_hash=")
    rec = json.loads(lines[1])
    assert len(rec["chapters"]) == 1 and "sentences" in rec["chapters"][0]
    assert (tmp_path / "h.csv").read_text().splitlines()[1] == "heading,frequency,ratio"


def test_train_predict_round(tmp_path, synthetic_dir):
    cfg = _cfg(tmp_path, synthetic_dir)
    m = tmp_path / "m.json"
    assert main(["train", "--config", str(cfg), "--model", "bnb", "--chi2-k", "500",
                 "--undersample", "--out", str(m)]) == 0
    head = json.loads(m.read_text())["header"]
    assert head["kind"] == "bnb" and head["seed"] == 1 and "config_hash" in head["provenance"]
    t = tmp_path / "t.json"
    assert main(["train", "--config", str(cfg), "--task", "classify", "--model", "mnb",
                 "--chi2-k", "all", "--out", str(t)]) == 0
    raw = tmp_path / "unl.jsonl"
    with open(synthetic_dir / "papers.jsonl") as fh, open(raw, "w") as out:
        for line in fh:
            r = json.loads(line)
            for ch in r["chapters"]:
                ch["text"] = ch["text"].replace("</FW>", "")
                while "<FW" in ch["text"]:
                    i = ch["text"].index("<FW")
                    ch["text"] = ch["text"][:i] + ch["text"][ch["text"].index(">", i) + 1:]
            out.write(json.dumps(r) + "\n")
    p1, p2 = tmp_path / "p1.jsonl", tmp_path / "p2.jsonl"
    for p in (p1, p2):
        assert main(["predict", "--config", str(cfg), "--model-file", str(m),
                     "--type-model-file", str(t), "--in", str(raw), "--out", str(p)]) == 0
    assert p1.read_bytes() == p2.read_bytes()
    sents = [s for line in p1.read_text().splitlines()[1:]
             for ch in json.loads(line)["chapters"] for s in ch["sentences"]]
    assert any(s["is_fws"] for s in sents)
    assert all(s["fws_type"] for s in sents if s["is_fws"])


def test_evaluate_twice_identical(tmp_path, synthetic_dir):
    cfg = _cfg(tmp_path, synthetic_dir)
    for d in ("a", "b"):
        assert main(["evaluate", "--config", str(cfg), "--cv", "4", "--out-dir",
                     str(tmp_path / d)]) == 0
    files = sorted(p.name for p in (tmp_path / "a").iterdir())
    assert "recognition_grid.csv" in files
    for name in files:
        assert (tmp_path / "a" / name).read_bytes() == (tmp_path / "b" / name).read_bytes()
    grid = (tmp_path / "a" / "recognition_grid.csv").read_text().splitlines()
    assert len(grid) == 2 + 2 * 2  # provenance, header, models x k values


def test_keywords_and_trends(tmp_path, synthetic_dir):
    cfg = _cfg(tmp_path, synthetic_dir)
    assert main(["keywords", "--config", str(cfg), "--group-by", "year,type",
                 "--out-dir", str(tmp_path)]) == 0
    assert (tmp_path / "keywords_by_year_fws_type.csv").exists()
    assert main(["trends", "--config", str(cfg), "--horizons", "1..3", "--venue", "ACL",
                 "--out-dir", str(tmp_path)]) == 0
    sim = (tmp_path / "similarity_matrix.csv").read_text().splitlines()
    assert sim[1] == "base_year,n=1,n=2,n=3"
    assert (tmp_path / "type_distribution_ACL.csv").exists()


def test_agreement(tmp_path, synthetic_dir, capsys):
    src = str(synthetic_dir / "papers.jsonl")
    out = tmp_path / "k.csv"
    assert main(["agreement", "--a", src, "--b", src, "--out", str(out)]) == 0
    assert "kappa=1.000000" in capsys.readouterr().out
    other = tmp_path / "other.jsonl"
    other.write_text(open(src).readline())
    assert main(["agreement", "--a", src, "--b", str(other)]) == 1
    assert "LengthMismatch" in capsys.readouterr().err


def test_bad_config_key(tmp_path, capsys):
    cfg = tmp_path / "c.txt"
    cfg.write_text("nonsense = 1\n")
    assert main(["report", "--config", str(cfg)]) == 1
    assert "ConfigError" in capsys.readouterr().err


def test_module_entry_point():
    r = subprocess.run([sys.executable, "-m", "fwsmine", "--version"], capture_output=True, text=True)
    assert r.returncode == 0 and "fwsmine 0.1.0" in r.stdout
