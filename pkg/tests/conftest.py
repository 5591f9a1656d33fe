import pytest

from fwsmine.synthetic import abstracts_only, generate_papers, write_jsonl


@pytest.fixture(scope="session")
def synthetic_dir(tmp_path_factory):
    """A small seeded corpus plus abstracts on disk."""
    d = tmp_path_factory.mktemp("synthetic")
    write_jsonl(generate_papers(n_per_year=12, years=range(2010, 2016), seed=0), d / "papers.jsonl")
    write_jsonl(abstracts_only(years=range(2010, 2018), n_per_year=8), d / "abstracts.jsonl")
    return d


# one PASS/FAIL line per acceptance criterion, printed after the run
_criteria: list[tuple[str, str, str]] = []


def pytest_runtest_logreport(report):
    if "test_acceptance.py" not in report.nodeid:
        return
    props = dict(report.user_properties)
    if "criterion" not in props:
        return
    if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
        status = "PASS" if report.outcome == "passed" else "FAIL"
        _criteria.append((props["criterion"], status, props.get("detail", "")))


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for name, status, detail in _criteria:
        terminalreporter.write_line(f"[{status}] criterion {name}" + (f": {detail}" if detail else ""))
