import random
from fractions import Fraction
from itertools import product

import pytest
import sympy as sp

from oracles import X, borcherds_sides
from support import SPECS, make_spec, mutate
from vatwist import (
    NilScalar,
    PuiseuxSeries,
    TwistedStructure,
    VAModule,
    WindowExceedsTruncation,
    build_full,
    enumerate_structures,
    lift,
)
from vatwist.twist_lifter import t_degree
from vatwist.va_check import (
    BorcherdsWindow,
    _borcherds_cell,
    _Evaluator,
    _mode_base,
    all_passed,
    check_borcherds,
    check_d_compat,
    check_distinct,
    check_grading,
    check_ode,
    check_orbit,
    check_root,
    check_vacuum,
    default_generators,
    family_checks,
    gen_binom,
    module_checks,
    predicted_coset,
    structure_checks,
)

K = 12
s_sym = sp.Symbol("s", positive=True)


def series(terms, order=1, ram=1, trunc=K):
    return PuiseuxSeries(terms, order=order, ramification=ram, trunc=trunc)


@pytest.fixture(scope="module")
def M_x():
    return build_full(make_spec({0: 1}, 0, 1, 1), K)


@pytest.fixture(scope="module")
def M_x_eps():
    return build_full(make_spec({0: 1}, 0, 1, 2), K)


def tampered(M, T, n=2, branch=0, twist=1):
    return TwistedStructure(M, n, branch, T, twist)


# -- check_ode ---------------------------------------------------------------------------
def test_ode_passes_on_built_modules(M_x, M_x_eps):
    for M in (M_x, M_x_eps):
        r = check_ode(M)
        assert r.passed and r.verified_order >= K - 1


def test_ode_fails_on_wrong_series():
    M = VAModule(make_spec({0: 1}, 0, 1, 1), series({2: 1}))
    r = check_ode(M)
    assert not r.passed
    ode = {w[0][1:] for w in r.witnesses if w[0][0] == "ode"}
    assert ode == {(0, 0), (1, 0)}
    assert any(w[0] == ("ld",) for w in r.witnesses)


def test_ode_flags_wrong_normalization():
    # x + 2 eps solves the ODE but breaks the eps normalisation
    M = VAModule(make_spec({0: 1}, 0, 1, 2), series({1: 1, 0: NilScalar(2, [0, 2])}, order=2))
    r = check_ode(M)
    assert [w[0] for w in r.witnesses] == [("normalization", 0)]


def test_ode_degenerate_is_a_failure():
    M = VAModule(make_spec({0: 1}, 0, 1, 2), series({0: NilScalar.eps(2)}, order=2))
    assert not check_ode(M).passed


# -- vacuum, grading, root, d_compat -------------------------------------------------------
def test_vacuum_and_grading(M_x):
    st = lift(M_x, 2, 0)
    assert check_vacuum(st).passed and check_grading(st).passed
    assert predicted_coset(st, 1) == Fraction(1, 2)
    bad = tampered(M_x, series({1: 1, 2: 1}, ram=2, trunc=2 * K))
    r = check_grading(bad)
    assert not r.passed and r.witnesses[0][1] == 0


def test_root_detects_tampering(M_x):
    good = lift(M_x, 2, 0)
    assert check_root(good).passed
    bad = tampered(M_x, series({1: 1, 2: 1}, ram=2, trunc=2 * K))
    assert not check_root(bad).passed
    wrong_branch = tampered(M_x, good.T, branch=1)
    r = check_root(wrong_branch)
    assert [w[0] for w in r.witnesses] == [("branch", 1)]


def test_d_compat(M_x, M_x_eps):
    assert check_d_compat(M_x).passed
    assert check_d_compat(lift(M_x_eps, 3, 2)).passed
    bad = tampered(M_x, series({1: 1, 3: 1}, ram=2, trunc=2 * K))
    r = check_d_compat(bad)
    assert not r.passed
    assert {w[0][1] for w in r.witnesses} == {"t"}


def test_default_generators_dedup():
    assert [g for g, _ in default_generators(3)] == ["s", "s^-1", "t", "t^2"]
    assert [g for g, _ in default_generators(2)] == ["s", "s^-1", "t"]


# -- family checks ---------------------------------------------------------------------------
def test_distinct_and_orbit(M_x):
    fam = enumerate_structures(M_x, 3)
    assert all_passed(family_checks(fam))
    assert not check_distinct([fam[0], fam[1], fam[0]]).passed
    assert not check_orbit([fam[0], fam[2], fam[1]]).passed


# -- Borcherds --------------------------------------------------------------------------------
def gen_sympy(label, n):
    if label == "s":
        return s_sym
    if label == "s^-1":
        return 1 / s_sym
    j = 1 if label == "t" else int(label.split("^")[1])
    return s_sym ** sp.Rational(j, n)


def to_x(expr):
    return sp.expand(expr.subs(s_sym, X))


def product_fields(u, v):
    """Y(u_j v) for D = d/ds: u_{-1-i} v = u^(i) v / i!, and u_j v = 0 for j >= 0."""
    def fld(j):
        if j >= 0:
            return 0
        i = -1 - j
        return to_x(sp.diff(u, s_sym, i) / sp.factorial(i) * v)
    return fld


def nil_value(c):
    q = c.comps[0].as_rational()
    return sp.Rational(int(q.numerator), int(q.denominator))


@pytest.mark.parametrize("n", [1, 2])
def test_borcherds_cells_match_sympy(M_x, n):
    # S = x: Y(f(s)) = f(x) and t acts as x^(1/n)
    st = lift(M_x, n, 0)
    ev = _Evaluator(st)
    ev.zero = NilScalar.scalar(0, 1)
    P = ev.P
    gens = default_generators(n)
    for (uk, u), (vk, v) in product(gens, gens):
        us, vs = gen_sympy(uk, n), gen_sympy(vk, n)
        r, s_ = t_degree(u), t_degree(v)
        q = (r + s_) // n
        mb, nb = int(_mode_base(st, r) * P), int(_mode_base(st, s_) * P)
        for l in (-2, -1, 0, 1):
            for dm, dn in product((-1, 0, 1), repeat=2):
                M, N = mb + dm * P, nb + dn * P
                lhs, _, rhs, _ = _borcherds_cell(ev, uk, u, vk, v, q, l, M, N)
                want_l, want_r = borcherds_sides(
                    to_x(us), to_x(vs), product_fields(us, vs), l, sp.Rational(M, P), sp.Rational(N, P)
                )
                assert want_l == want_r
                assert (nil_value(lhs), nil_value(rhs)) == (want_l, want_r), (uk, vk, l, M, N)


def test_borcherds_passes_and_fails(M_x):
    st = lift(M_x, 2, 0)
    r = check_borcherds(st)
    assert r.passed and r.verified_order is not None
    bad = tampered(M_x, series({1: 1, 3: 1}, ram=2, trunc=2 * K))
    r = check_borcherds(bad)
    assert not r.passed and r.witnesses


def test_borcherds_window_exceeds_truncation():
    M = build_full(make_spec({0: 1, 1: 1}, 0, 1, 2), 3)
    with pytest.raises(WindowExceedsTruncation):
        check_borcherds(lift(M, 2, 0))


def test_borcherds_window_json():
    w = BorcherdsWindow((-1, 1), (0, 2), (-2, 0))
    assert BorcherdsWindow.from_json(w.to_json()) == w
    with pytest.raises(ValueError):
        BorcherdsWindow.from_json({"l": [2, 1]})


def test_gen_binom():
    assert gen_binom(Fraction(1, 2), 2) == Fraction(-1, 8)
    assert gen_binom(-1, 3) == -1
    assert gen_binom(5, 0) == 1


# -- bundles and reports -------------------------------------------------------------------------
@pytest.mark.parametrize("i", range(len(SPECS)))
def test_bundles_pass_on_built_structures(i):
    M = build_full(make_spec(*SPECS[i], 2), K)
    assert all_passed(module_checks(M))
    for st in enumerate_structures(M, 2):
        assert all_passed(structure_checks(st, borcherds=False))


def test_mutation_detected_with_witness():
    rng = random.Random(7)
    M = build_full(make_spec({0: 2, 1: 3, 3: 1}, 0, 1, 2), K)
    for _ in range(10):
        S, (m, k) = mutate(M.S, rng)
        reports = module_checks(VAModule(M.spec, S))
        assert not all_passed(reports)
        assert any(r.witnesses for r in reports)


def test_report_json_and_determinism(M_x):
    M = VAModule(make_spec({0: 1}, 0, 1, 1), series({2: 1}))
    a, b = check_ode(M), check_ode(M)
    assert a.to_json() == b.to_json()
    obj = a.to_json()
    assert obj["status"] == "fail" and obj["witnesses"][0]["index"]
    assert "ode: fail" in a.summary()
    assert check_ode(M_x).to_json()["verified_order"] == str(check_ode(M_x).verified_order)
