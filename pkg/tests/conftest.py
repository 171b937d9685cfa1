from fractions import Fraction

from hypothesis import HealthCheck, settings, strategies as st

from octoma.herm2 import HermMatrix2, OctMatrix2, OctVector2
from octoma.octonion import Octonion

settings.register_profile("default", deadline=None, max_examples=60,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

rationals = st.fractions(min_value=-20, max_value=20, max_denominator=12)
octonions = st.lists(rationals, min_size=8, max_size=8).map(Octonion)
reals = st.floats(min_value=-5, max_value=5, allow_nan=False)
float_octonions = st.lists(reals, min_size=8, max_size=8).map(lambda c: Octonion(c, backend="float"))
herms = st.builds(HermMatrix2, rationals, rationals, octonions)
vectors = st.builds(OctVector2, octonions, octonions)


@st.composite
def pd_herms(draw):
    q = draw(octonions)
    a = draw(st.fractions(min_value=Fraction(1, 10), max_value=10, max_denominator=10))
    s = draw(st.fractions(min_value=Fraction(1, 10), max_value=10, max_denominator=10))
    return HermMatrix2(a, (sum(c * c for c in q.c) + s) / a, q)


@st.composite
def traceless(draw):
    a = draw(octonions)
    return OctMatrix2(a, draw(octonions), draw(octonions), -a)


ACCEPTANCE_LINES: dict[int, str] = {}


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for n in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(ACCEPTANCE_LINES[n])
