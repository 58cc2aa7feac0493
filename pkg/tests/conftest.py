import sys
from pathlib import Path

import pytest

from sentirank.corpus import AuthorshipTable, CitationRecord
from sentirank.sentiment import load_lexicon

FIXTURES = Path(__file__).parent / "fixtures"


@pytest.fixture
def fixtures() -> Path:
    return FIXTURES


@pytest.fixture
def lexicon():
    return load_lexicon(FIXTURES / "lexicon_entries.tsv", FIXTURES / "lexicon_forms.tsv")


def write(path: Path, text: str) -> Path:
    path.write_text(text, encoding="utf-8")
    return path


def rec(citing, cited, score=None, text=None):
    return CitationRecord(citing, cited, text, score)


def table(**entries) -> AuthorshipTable:
    """``table(A=("x", "y"))`` -> article A authored by x and y."""
    return AuthorshipTable({k.replace("_", "-"): tuple(v) for k, v in entries.items()})


def pytest_terminal_summary(terminalreporter):
    acceptance = sys.modules.get("test_acceptance")
    if acceptance is None or not acceptance.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(acceptance.RESULTS):
        terminalreporter.write_line(acceptance.RESULTS[n])
