from fractions import Fraction

import hypothesis.strategies as st
from hypothesis import settings

settings.register_profile("default", deadline=None, max_examples=60)
settings.load_profile("default")

small_fractions = st.fractions(min_value=-5, max_value=5, max_denominator=7)
nonzero_fractions = small_fractions.filter(lambda x: x != 0)


@st.composite
def rational_series(draw, min_size=1, max_size=40, unit=False):
    from pickdirichlet import DirichletSeries

    n = draw(st.integers(min_size, max_size))
    head = Fraction(1) if unit else draw(nonzero_fractions)
    tail = draw(st.lists(small_fractions, min_size=n - 1, max_size=n - 1))
    return DirichletSeries((head, *tail))


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for r in sorted(RESULTS, key=lambda r: r.number):
            terminalreporter.write_line(r.line())
