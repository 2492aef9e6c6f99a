import itertools
from fractions import Fraction

import pytest
from hypothesis import strategies as st

from simulapprox.polyalgebra import Polynomial

ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


def brute_expand(p, q):
    """Term-by-term product via explicit pairs; independent of polyalgebra.mul."""
    out = {}
    for (ep, cp), (eq, cq) in itertools.product(p.items(), q.items()):
        e = tuple(a + b for a, b in zip(ep, eq))
        out[e] = out.get(e, 0) + cp * cq
    return {e: c for e, c in out.items() if c != 0}


@st.composite
def polynomials(draw, dimension=None, max_degree=6, max_terms=8, exact=False):
    dim = dimension or draw(st.integers(1, 3))
    exps = st.tuples(*[st.integers(0, max_degree)] * dim).filter(lambda e: sum(e) <= max_degree)
    if exact:
        coefs = st.integers(-9, 9).map(Fraction)
    else:
        coefs = st.floats(-1, 1, allow_nan=False, allow_infinity=False)
    terms = draw(st.dictionaries(exps, coefs, max_size=max_terms))
    return Polynomial(dim, terms)


@pytest.fixture
def x():
    return [Polynomial.variable(j, 2) for j in range(2)]
