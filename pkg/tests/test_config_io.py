import pytest

from fwsmine.config import PipelineConfig, load_config, parse_horizons, parse_k_list
from fwsmine.errors import ConfigError
from fwsmine.io import atomic_write_text, csv_text, read_csv, write_csv


def test_defaults():
    cfg = PipelineConfig()
    assert (cfg.cv_folds, cfg.split, cfg.top_n, cfg.ngram_min, cfg.ngram_max) == (
        10, (0.8, 0.1, 0.1), 3, 1, 3)
    assert cfg.horizons == tuple(range(1, 22))


def test_parse_helpers():
    assert parse_k_list("1000, 5000,all") == (1000, 5000, None)
    assert parse_horizons("1..3,5") == (1, 2, 3, 5)
    with pytest.raises(ConfigError):
        parse_k_list("0")
    with pytest.raises(ConfigError):
        parse_horizons("0..2")


def test_load_config_and_overrides(tmp_path):
    p = tmp_path / "c.txt"
    p.write_text("# comment\nseed = 5\nmodel = bnb, svm\nundersample = no\n")
    cfg = load_config(p, {"seed": "9"})
    assert cfg.seed == 9 and cfg.model == ("bnb", "svm") and cfg.undersample is False


@pytest.mark.parametrize("text", ["colour = red\n", "split = 0.5,0.5,0.5\n", "model = rf\n",
                                  "stopwords = /no/such/file\n", "garbage\n", "ngram_max = 4\n"])
def test_bad_config(tmp_path, text):
    p = tmp_path / "c.txt"
    p.write_text(text)
    with pytest.raises(ConfigError):
        load_config(p)


def test_digest_hashes_content_not_path(tmp_path):
    a, b = tmp_path / "a.txt", tmp_path / "b.txt"
    a.write_text("foo\n")
    b.write_text("foo\n")
    ca = load_config(overrides={"stopwords": str(a)})
    cb = load_config(overrides={"stopwords": str(b)})
    assert ca.digest() == cb.digest()
    b.write_text("bar\n")
    assert load_config(overrides={"stopwords": str(b)}).digest() != ca.digest()
    assert load_config(overrides={"output": "x"}).digest() == PipelineConfig().digest()
    assert load_config(overrides={"seed": 1}).digest() != PipelineConfig().digest()


def test_csv_round_trip(tmp_path):
    path = tmp_path / "t.csv"
    write_csv(path, ("a", "b"), [[1, 0.5], ["x", None]], "# prov")
    assert path.read_text().splitlines()[0] == "# prov"
    assert read_csv(path) == [{"a": "1", "b": "0.500000"}, {"a": "x", "b": ""}]
    assert csv_text(("a",), []) == "a\n"


def test_atomic_write_leaves_no_temp(tmp_path):
    atomic_write_text(tmp_path / "sub" / "f.txt", "hi")
    assert [p.name for p in (tmp_path / "sub").iterdir()] == ["f.txt"]
