from pathlib import Path

import pytest

from sri_infill.synthesis import load_corpus

CORPUS_DIR = Path(__file__).parent / "fixtures" / "corpus"


@pytest.fixture(scope="session")
def corpus_dir() -> Path:
    return CORPUS_DIR


@pytest.fixture(scope="session")
def corpus():
    return load_corpus(CORPUS_DIR)


# Acceptance criteria register their verdicts here; the lines are printed
# together at the end of the run so they survive output capturing.
ACCEPTANCE: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE:
            terminalreporter.write_line(line)
