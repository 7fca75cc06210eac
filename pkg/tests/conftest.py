import pytest
from hypothesis import settings, strategies as st

from chromalat.poset import build_poset, monotone_assignments, MonotoneMap

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")

ACCEPTANCE_LINES = []


@st.composite
def posets(draw, min_size=0, max_size=6):
    n = draw(st.integers(min_size, max_size))
    rank = draw(st.permutations(range(n)))
    pairs = []
    for i in range(n):
        for j in range(i + 1, n):
            if draw(st.booleans()):
                pairs.append((rank[i], rank[j]))
    return build_poset(range(n), pairs)


@st.composite
def monotone_maps(draw, dom, cod):
    choices = list(monotone_assignments(dom, cod))
    return MonotoneMap(dom, cod, draw(st.sampled_from(choices)))


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
