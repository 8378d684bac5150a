import pathlib

import pytest

from sumkit.text import SubwordVocab, load_vocab

DATA_DIR = pathlib.Path(__file__).parent / "data"

# criterion id -> (status, description); filled by the acceptance marker hook
_acceptance_results: dict[str, tuple[str, str]] = {}


def pytest_configure(config):
    config.addinivalue_line(
        "markers",
        "acceptance(cid, description): tag a test as one acceptance criterion",
    )


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("acceptance")
    if marker is None:
        return
    cid, desc = marker.args
    prev_failed = _acceptance_results.get(cid, ("PASS",))[0] == "FAIL"
    failed = prev_failed or report.failed or (report.skipped and report.when == "call")
    if report.when in ("setup", "call", "teardown"):
        _acceptance_results[cid] = ("FAIL" if failed else "PASS", desc)


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not _acceptance_results:
        return
    terminalreporter.section("acceptance criteria")
    for cid in sorted(_acceptance_results):
        status, desc = _acceptance_results[cid]
        terminalreporter.write_line(f"[{status}] {cid}: {desc}")


@pytest.fixture(scope="session")
def ascii_vocab() -> SubwordVocab:
    """Small vocabulary over latin letters; unk=0, pad=1."""
    pieces = ["<unk>", "<pad>", "a", "b", "c", "d", "aa", "ab", "ba", "abc", "."]
    return SubwordVocab.from_pieces(pieces, special_ids={0, 1}, unk_id=0)


@pytest.fixture(scope="session")
def urdu_vocab() -> SubwordVocab:
    return load_vocab(str(DATA_DIR / "vocab.txt"))


@pytest.fixture(scope="session")
def data_dir() -> pathlib.Path:
    return DATA_DIR
