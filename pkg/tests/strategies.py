"""Hypothesis strategies for the package's value types."""

from fractions import Fraction

from hypothesis import strategies as st

from vatwist import CycRational, LaurentPoly, NilScalar, PuiseuxSeries
from vatwist.scalars import totient

CONDUCTORS = [1, 3, 4, 5, 8, 12]

small_q = st.fractions(min_value=-6, max_value=6, max_denominator=5)
nonzero_q = small_q.filter(bool)


@st.composite
def cyc(draw, conductor=None, nonzero=False):
    N = conductor or draw(st.sampled_from(CONDUCTORS))
    coeffs = draw(st.lists(small_q, min_size=totient(N), max_size=totient(N)))
    c = CycRational(N, coeffs)
    if nonzero and not c:
        c = c + 1
    return c


@st.composite
def nil(draw, order=None, conductor=1, invertible=False):
    n = order or draw(st.integers(1, 4))
    comps = [draw(cyc(conductor)) for _ in range(n)]
    if invertible and not comps[0]:
        comps[0] = comps[0] + 1
    return NilScalar(n, comps)


@st.composite
def rational_nil(draw, order):
    return NilScalar(order, draw(st.lists(small_q, min_size=order, max_size=order)))


@st.composite
def series(draw, order=1, ramification=1, lo=-2, hi=6, trunc=None, invertible=False):
    """A rational-coefficient series with exponents in [lo, hi] (numerators)."""
    exps = draw(st.lists(st.integers(lo, hi), min_size=1, max_size=5, unique=True))
    terms = {m: draw(rational_nil(order)) for m in exps}
    if invertible:
        m0 = min(exps)
        c = terms[m0]
        terms[m0] = NilScalar(order, (draw(nonzero_q),) + c.comps[1:])
    if trunc is None:
        trunc = draw(st.integers(hi, hi + 6))
    return PuiseuxSeries(terms, order=order, ramification=ramification, trunc=trunc)


@st.composite
def laurent(draw, lo=-3, hi=4):
    exps = draw(st.lists(st.integers(lo, hi), max_size=4, unique=True))
    return LaurentPoly({e: draw(nonzero_q) for e in exps})


def frac(q) -> Fraction:
    return Fraction(int(q.numerator), int(q.denominator))
