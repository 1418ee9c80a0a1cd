from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from strategies import laurent
from support import SPECS, make_spec
from vatwist import (
    BranchOutOfRange,
    ExtElement,
    LaurentPoly,
    NilScalar,
    NoRootInField,
    OrderMismatch,
    PuiseuxSeries,
    TwistedStructure,
    VAModule,
    build_full,
    check_root,
    conjugate,
    enumerate_structures,
    lift,
    module_Y,
    twisted_Y,
    zeta,
)
from vatwist.twist_lifter import t_degree, twist_exponent_for

K = 10


@pytest.fixture(scope="module")
def M_x():
    return build_full(make_spec({0: 1}, 0, 1, 1), K)


@pytest.fixture(scope="module")
def M_x_eps():
    return build_full(make_spec({0: 1}, 0, 1, 2), K)


def terms(f):
    return {e: c for e, c in f.items()}


def T(j, n, c=1):
    return ExtElement.t_power(j, n, c)


def E(u, n):
    return ExtElement.embed(u, n)


# -- lift ----------------------------------------------------------------------------------
def test_lift_square_root(M_x):
    st0 = lift(M_x, 2, 0)
    assert terms(st0.T) == {Fraction(1, 2): NilScalar.scalar(1, 1)}
    assert st0.twist_exponent == 1 and st0.T.ramification == 2
    assert terms(lift(M_x, 2, 1).T) == {Fraction(1, 2): NilScalar.scalar(-1, 1)}


def test_lift_nilpotent(M_x_eps):
    st0 = lift(M_x_eps, 2, 0)
    half = NilScalar(2, [0, Fraction(1, 2)])
    assert terms(st0.T) == {Fraction(1, 2): NilScalar.scalar(1, 2), Fraction(-1, 2): half}
    assert (st0.T ** 2).agrees_with(M_x_eps.S)


def test_branch_out_of_range(M_x):
    with pytest.raises(BranchOutOfRange):
        lift(M_x, 3, 3)


def test_conductor_too_small(M_x):
    with pytest.raises(NoRootInField) as exc:
        lift(M_x, 3, 0, conductor=1)
    assert exc.value.required_conductor == 3
    assert "extend conductor to 3" in str(exc.value)


def test_conductor_big_enough(M_x):
    st = lift(M_x, 3, 1, conductor=6)
    assert st.T.lc().comps[0] == zeta(3)


@pytest.mark.parametrize("L, n, e", [(1, 2, 1), (1, 3, 2), (-1, 2, 1), (-1, 3, 1), (1, 1, 0)])
def test_twist_exponent(L, n, e):
    assert twist_exponent_for(L, n) == e


# -- formal radical ----------------------------------------------------------------------------
def test_formal_radical_for_non_cyclotomic_root():
    # alpha = 2 has no rational cube root
    M = build_full(make_spec({0: 2, 1: 3, 3: 1}, 0, 1, 2), K)
    st = lift(M, 3, 1)
    assert st.is_formal and st.radical == 2
    assert check_root(st).passed
    assert (st.T ** 3).scale(st.radical).agrees_with(M.S)


def test_formal_radical_rejects_mixed_degrees():
    M = build_full(make_spec({0: 2, 1: 3, 3: 1}, 0, 1, 1), K)
    st = lift(M, 2, 0)
    assert st.is_formal
    with pytest.raises(ValueError):
        twisted_Y(st, ExtElement(2, [1, 1]))


# -- twisted_Y ----------------------------------------------------------------------------------
def test_twisted_Y_examples(M_x):
    st = lift(M_x, 2, 0)
    s = LaurentPoly.monomial()
    assert twisted_Y(st, E(s, 2)).agrees_with(M_x.S)
    assert twisted_Y(st, T(1, 2)) == st.T
    one = twisted_Y(st, T(2, 2) * E(LaurentPoly({-1: 1}), 2))
    assert terms(one) == {0: NilScalar.scalar(1, 1)}


def test_twisted_Y_degree_mismatch(M_x):
    with pytest.raises(OrderMismatch):
        twisted_Y(lift(M_x, 2, 0), T(1, 3))


def test_t_degree():
    assert t_degree(ExtElement(3)) is None
    assert t_degree(T(2, 3)) == 2
    assert t_degree(ExtElement(3, [1, 1])) == -1


@settings(max_examples=25)
@given(st.sampled_from(range(len(SPECS))), st.integers(1, 2), st.integers(1, 3), st.data())
def test_twisted_Y_is_homomorphism(i, dim, n, data):
    M = build_full(make_spec(*SPECS[i], dim), K)
    b = data.draw(st.integers(0, n - 1))
    stc = lift(M, n, b)
    comps = lambda: [data.draw(laurent(lo=-1, hi=1)) for _ in range(n)]  # noqa: E731
    a, c = ExtElement(n, comps()), ExtElement(n, comps())
    if stc.is_formal:
        return
    assert twisted_Y(stc, a * c).agrees_with(twisted_Y(stc, a) * twisted_Y(stc, c))


@settings(max_examples=20)
@given(st.sampled_from(range(len(SPECS))), st.integers(1, 3), laurent(lo=-2, hi=2))
def test_restriction_is_module_Y(i, n, u):
    M = build_full(make_spec(*SPECS[i], 2), K)
    stc = lift(M, n, 0)
    assert twisted_Y(stc, E(u, n)).agrees_with(module_Y(M, u))


@pytest.mark.parametrize("i", range(len(SPECS)))
@pytest.mark.parametrize("n", [1, 2, 3])
def test_root_identity_and_exponent_coset(i, n):
    M = build_full(make_spec(*SPECS[i], 2), K)
    L = SPECS[i][2]
    for stc in enumerate_structures(M, n):
        Tn = twisted_Y(stc, T(1, n)) ** n
        if stc.is_formal:
            Tn = Tn.scale(stc.radical)
        assert Tn.agrees_with(twisted_Y(stc, E(LaurentPoly.monomial(), n)))
        assert all((e - Fraction(L, n)).denominator == 1 for e, _ in stc.T.items())


# -- conjugation and enumeration --------------------------------------------------------------------
def test_conjugate_examples(M_x):
    st0 = lift(M_x, 2, 0)
    assert conjugate(st0, 0) == st0
    assert conjugate(st0, 2) == st0
    assert conjugate(st0, 1) == lift(M_x, 2, 1)
    assert terms(conjugate(st0, 1).T) == {Fraction(1, 2): NilScalar.scalar(-1, 1)}


def test_enumerate_examples(M_x):
    two = enumerate_structures(M_x, 2)
    assert [terms(s.T) for s in two] == [{Fraction(1, 2): NilScalar.scalar(c, 1)} for c in (1, -1)]
    (one,) = enumerate_structures(M_x, 1)
    assert one.T.agrees_with(M_x.S) and one.twist_exponent == 0
    three = enumerate_structures(M_x, 3)
    assert [s.T.lc().comps[0] for s in three] == [zeta(3, b) for b in range(3)]
    assert {s.twist_exponent for s in three} == {2}


@pytest.mark.parametrize("i", range(len(SPECS)))
@pytest.mark.parametrize("n", [2, 3, 4])
def test_orbit_closure(i, n):
    M = build_full(make_spec(*SPECS[i], 2), 8)
    sts = enumerate_structures(M, n)
    assert len(sts) == n
    for k in range(2 * n):
        assert conjugate(sts[0], k) == sts[k % n]


# -- JSON --------------------------------------------------------------------------------------------
@pytest.mark.parametrize("i", range(len(SPECS)))
def test_json_round_trip(i):
    M = build_full(make_spec(*SPECS[i], 2), 8)
    for stc in enumerate_structures(M, 3):
        obj = stc.to_json()
        assert set(obj) >= {"ext_degree", "branch", "twist_exponent", "T", "base"}
        assert ("radical" in obj) == stc.is_formal
        assert TwistedStructure.from_json(obj) == stc


def test_json_rejects_bad_branch(M_x):
    obj = lift(M_x, 2, 0).to_json()
    obj["branch"] = 5
    with pytest.raises(BranchOutOfRange):
        TwistedStructure.from_json(obj)


def test_json_rejects_order_mismatch(M_x, M_x_eps):
    obj = lift(M_x, 2, 0).to_json()
    obj["base"] = M_x_eps.to_json()
    with pytest.raises(ValueError):
        TwistedStructure.from_json(obj)


def test_manual_structure():
    S = PuiseuxSeries({1: 1}, order=1, trunc=6)
    M = VAModule(make_spec({0: 1}, 0, 1, 1), S)
    T_ = PuiseuxSeries({1: 1}, order=1, ramification=2, trunc=12)
    st = TwistedStructure(M, 2, 0, T_, 1)
    assert check_root(st).passed
