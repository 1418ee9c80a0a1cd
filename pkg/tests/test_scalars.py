from fractions import Fraction

import pytest
import sympy as sp
from gmpy2 import mpq
from hypothesis import given
from hypothesis import strategies as st

from oracles import close, cyc_complex
from strategies import CONDUCTORS, cyc
from vatwist import CycRational, DivisionByZero, NoRootInField, canonical_root, cyc_add, cyc_inv, cyc_mul, root_of_unity, zeta
from vatwist.scalars import cyclotomic_poly, field_contains, totient, unit_split


def q(x):
    return CycRational.rational(mpq(x))


# -- examples ------------------------------------------------------------------
def test_add_rationals():
    assert cyc_add(q(Fraction(1, 2)), q(Fraction(1, 3))) == q(Fraction(5, 6))


def test_add_linear():
    assert cyc_add(zeta(4), zeta(4)) == zeta(4) * 2


def test_add_reduces_mod_phi3():
    assert cyc_add(zeta(3), zeta(3, 2)) == -1


def test_mul_i_squared():
    assert cyc_mul(zeta(4), zeta(4)) == -1


@pytest.mark.parametrize("n", [1, 2, 3, 5, 7, 12])
def test_mul_root_order(n):
    assert cyc_mul(zeta(n), zeta(n, n - 1)) == 1


def test_mul_reduces_mod_phi3():
    assert cyc_mul(1 + zeta(3), 1 + zeta(3, 2)) == 1


def test_inv_examples():
    assert cyc_inv(q(Fraction(2, 3))) == q(Fraction(3, 2))
    assert cyc_inv(zeta(7)) == zeta(7, 6)
    assert cyc_inv(1 + zeta(4)) == (1 - zeta(4)) / 2


def test_inv_zero():
    with pytest.raises(DivisionByZero):
        cyc_inv(CycRational.zero(5))


def test_zeta_examples():
    assert zeta(1, 0) == 1
    assert zeta(2, 1) == -1
    assert zeta(6, 1) ** 3 == -1


def test_json_forms():
    assert q(Fraction(-3, 4)).to_json() == "-3/4"
    z = zeta(3)
    obj = z.to_json()
    assert obj["conductor"] == 3 and len(obj["coeffs"]) == 2
    assert CycRational.from_json(obj) == z
    assert CycRational.from_json("5/6") == q(Fraction(5, 6))


def test_wrong_length_rejected():
    with pytest.raises(ValueError):
        CycRational(5, [1, 2])


# -- cyclotomic polynomials against sympy ------------------------------------------
@pytest.mark.parametrize("N", range(1, 31))
def test_cyclotomic_poly_matches_sympy(N):
    x = sp.Symbol("x")
    ref = sp.Poly(sp.cyclotomic_poly(N, x), x).all_coeffs()[::-1]
    assert list(cyclotomic_poly(N)) == [int(c) for c in ref]
    assert totient(N) == int(sp.totient(N))


# -- roots --------------------------------------------------------------------------
def test_root_of_unity_in_bigger_field():
    # zeta_6 lives in Q(zeta_3)
    r = root_of_unity(6, 1, 3)
    assert r.conductor == 3 and r ** 6 == 1 and r ** 3 == -1


def test_root_of_unity_missing():
    with pytest.raises(NoRootInField) as exc:
        root_of_unity(3, 1, 1)
    assert exc.value.required_conductor == 3


@pytest.mark.parametrize("c, k", [(4, 2), (Fraction(8, 27), 3), (-1, 2), (-8, 3), (Fraction(1, 16), 4)])
def test_canonical_root_powers_back(c, k):
    r = canonical_root(q(c), k)
    assert r ** k == q(c)


def test_canonical_root_of_minus_one_is_i():
    assert canonical_root(q(-1), 2) == zeta(4)


def test_canonical_root_no_rational_root():
    with pytest.raises(NoRootInField) as exc:
        canonical_root(q(2), 3)
    assert exc.value.required_conductor is None


def test_unit_split():
    rho, j, M = unit_split(zeta(3) * 5)
    assert rho == 5 and (zeta(M, j) * rho) == zeta(3) * 5
    assert unit_split(1 + zeta(4)) is None


def test_field_contains():
    assert field_contains(6, 3) and field_contains(3, 6)
    assert not field_contains(1, 3)


# -- properties ---------------------------------------------------------------------
@given(cyc(), cyc(), cyc())
def test_field_axioms(a, b, c):
    assert (a + b) + c == a + (b + c)
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a * b == b * a


@given(cyc(), cyc())
def test_arithmetic_matches_complex_values(a, b):
    assert close(cyc_complex(a + b), cyc_complex(a) + cyc_complex(b))
    assert close(cyc_complex(a * b), cyc_complex(a) * cyc_complex(b))


@given(cyc(nonzero=True))
def test_inverse(a):
    assert a * a.inverse() == 1
    assert close(cyc_complex(a.inverse()), 1 / cyc_complex(a), 1e-7)


@given(st.integers(1, 40))
def test_zeta_order_exact(N):
    z = zeta(N)
    assert z ** N == 1
    assert all(z ** m != 1 for m in range(1, N))


@given(cyc(), cyc(), st.sampled_from([2, 3, 5]))
def test_promotion_coherent(a, b, k):
    M = a.conductor * b.conductor * k
    assert a.promote(M) + b.promote(M) == (a + b).promote(M)
    assert close(cyc_complex(a.promote(M)), cyc_complex(a))


@given(st.sampled_from(CONDUCTORS), st.integers(0, 23), st.fractions(min_value=Fraction(1, 5), max_value=9, max_denominator=5),
       st.integers(1, 4))
def test_canonical_root_of_power(N, j, rho, k):
    c = zeta(N, j) * mpq(rho.numerator, rho.denominator) ** k
    r = canonical_root(c, k)
    assert r ** k == c
