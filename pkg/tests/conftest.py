from fractions import Fraction

import pytest
from hypothesis import settings
from hypothesis import strategies as st

from lsakit.qlinalg import QMatrix

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")

small_q = st.fractions(min_value=-5, max_value=5, max_denominator=4)
small_int = st.integers(-4, 4).map(Fraction)


@st.composite
def qmatrices(draw, n=None, m=None, elements=small_q, max_n=4):
    n = n or draw(st.integers(1, max_n))
    m = m or n
    vals = draw(st.lists(elements, min_size=n * m, max_size=n * m))
    return QMatrix(n, m, vals)


@pytest.fixture(scope="session")
def corpus():
    from lsakit.families import corpus as _corpus

    return _corpus()


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if not RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(RESULTS):
        ok, msg = RESULTS[k]
        terminalreporter.write_line(f"[{'PASS' if ok else 'FAIL'}] criterion {k:2d}: {msg}")
