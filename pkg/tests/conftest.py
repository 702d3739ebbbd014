from __future__ import annotations

from pathlib import Path

from hypothesis import settings
from hypothesis import strategies as st

from monodromy.braid import BraidWord
from monodromy.free_group import FreeWord

FIXTURES = Path(__file__).parent / "fixtures"

settings.register_profile("default", deadline=None, max_examples=100)
settings.load_profile("default")


@st.composite
def braids(draw, min_strands: int = 2, max_strands: int = 6, max_len: int = 12, strands: int | None = None):
    n = strands if strands is not None else draw(st.integers(min_strands, max_strands))
    if n == 1:
        return BraidWord(1)
    letter = st.integers(1, n - 1).flatmap(lambda i: st.sampled_from((i, -i)))
    return BraidWord(n, tuple(draw(st.lists(letter, max_size=max_len))))


@st.composite
def free_words(draw, rank: int, max_len: int = 8):
    letter = st.integers(1, rank).flatmap(lambda i: st.sampled_from((i, -i)))
    return FreeWord(rank, tuple(draw(st.lists(letter, max_size=max_len))))


def pytest_terminal_summary(terminalreporter):
    import sys

    module = sys.modules.get("test_acceptance")
    if module is None or not module.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(module.RESULTS):
        terminalreporter.write_line(module.RESULTS[number])
