"""Exact arithmetic in Q and in the cyclotomic fields Q(zeta_N).

Rationals are ``gmpy2.mpq``.  An element of Q(zeta_N) is stored as its
coordinate vector in the power basis 1, X, ..., X^(phi(N)-1) of
Q[X]/(Phi_N(X)), with X standing for zeta_N = exp(2 pi i / N).  Elements of
different conductors are promoted to the lcm before they are combined.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import gcd
from numbers import Rational as _RationalABC

import gmpy2
from gmpy2 import mpq

from .errors import DivisionByZero, NoRootInField

__all__ = [
    "mpq",
    "to_rational",
    "format_rational",
    "parse_rational",
    "cyclotomic_poly",
    "CycRational",
    "zeta",
    "cyc_add",
    "cyc_mul",
    "cyc_inv",
    "root_of_unity",
    "field_conductor",
    "field_contains",
    "canonical_root",
    "unit_split",
]

ZERO = mpq(0)
ONE = mpq(1)


def lcm(a: int, b: int) -> int:
    return a // gcd(a, b) * b


def to_rational(x) -> mpq:
    """Coerce int, Fraction, mpq or a "num/den" string to ``mpq``."""
    if isinstance(x, str):
        return parse_rational(x)
    if isinstance(x, (int, _RationalABC)) or type(x) is type(ZERO):
        return mpq(x)
    raise TypeError(f"not an exact rational: {x!r}")


def format_rational(q: mpq) -> str:
    return f"{q.numerator}/{q.denominator}"


def parse_rational(s: str) -> mpq:
    s = s.strip()
    if "/" in s:
        num, den = s.split("/")
        return mpq(int(num), int(den))
    return mpq(int(s))


@lru_cache(maxsize=None)
def cyclotomic_poly(N: int) -> tuple[int, ...]:
    """Integer coefficients of Phi_N, lowest degree first."""
    if N < 1:
        raise ValueError("conductor must be positive")
    # Phi_N = (X^N - 1) / prod_{d | N, d < N} Phi_d
    num = [-1] + [0] * (N - 1) + [1]
    for d in range(1, N):
        if N % d == 0:
            num = _exact_div(num, cyclotomic_poly(d))
    return tuple(num)


def _exact_div(num: list[int], den: tuple[int, ...]) -> list[int]:
    num = list(num)
    dd = len(den) - 1
    out = [0] * (len(num) - dd)
    for i in range(len(out) - 1, -1, -1):
        c = num[i + dd]  # den is monic
        out[i] = c
        if c:
            for j, d in enumerate(den):
                num[i + j] -= c * d
    assert not any(num[:dd]), "inexact cyclotomic division"
    return out


@lru_cache(maxsize=None)
def _power_table(N: int) -> tuple[tuple[int, ...], ...]:
    """Rows X^j mod Phi_N for 0 <= j < N, as integer vectors."""
    phi_poly = cyclotomic_poly(N)
    deg = len(phi_poly) - 1
    rows = []
    cur = [1] + [0] * (deg - 1)
    for _ in range(N):
        rows.append(tuple(cur))
        top = cur[-1]
        cur = [0] + cur[:-1]
        if top:
            for r in range(deg):
                cur[r] -= top * phi_poly[r]
    return tuple(rows)


def reduction_rows(N: int) -> tuple[tuple[int, ...], ...]:
    """Rows X^j mod Phi_N for phi(N) <= j <= 2 phi(N) - 2 (product overflow)."""
    table = _power_table(N)
    phi = len(table[0])
    return tuple(table[j % N] for j in range(phi, 2 * phi - 1))


def totient(N: int) -> int:
    return len(cyclotomic_poly(N)) - 1


def field_conductor(N: int) -> int:
    """Conductor of the field Q(zeta_N); Q(zeta_2m) = Q(zeta_m) for odd m."""
    return N // 2 if N % 4 == 2 else N


def field_contains(big: int, small: int) -> bool:
    """True iff Q(zeta_small) is a subfield of Q(zeta_big)."""
    return field_conductor(big) % field_conductor(small) == 0


class CycRational:
    """Immutable element of Q(zeta_N) in the power basis."""

    __slots__ = ("conductor", "coeffs")

    def __init__(self, conductor: int, coeffs):
        coeffs = tuple(to_rational(c) for c in coeffs)
        if len(coeffs) != totient(conductor):
            raise ValueError(
                f"conductor {conductor} needs {totient(conductor)} coordinates, got {len(coeffs)}"
            )
        object.__setattr__(self, "conductor", conductor)
        object.__setattr__(self, "coeffs", coeffs)

    @classmethod
    def _raw(cls, conductor: int, coeffs: tuple) -> "CycRational":
        # trusted constructor: coeffs already a tuple of mpq of the right length
        obj = object.__new__(cls)
        object.__setattr__(obj, "conductor", conductor)
        object.__setattr__(obj, "coeffs", coeffs)
        return obj

    def __setattr__(self, name, value):
        raise AttributeError("CycRational is immutable")

    @classmethod
    def rational(cls, q, conductor: int = 1) -> "CycRational":
        phi = totient(conductor)
        return cls._raw(conductor, (to_rational(q),) + (ZERO,) * (phi - 1))

    @classmethod
    def zero(cls, conductor: int = 1) -> "CycRational":
        return cls._raw(conductor, (ZERO,) * totient(conductor))

    @classmethod
    def one(cls, conductor: int = 1) -> "CycRational":
        return cls.rational(ONE, conductor)

    # -- predicates -------------------------------------------------------
    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def __bool__(self) -> bool:
        return any(self.coeffs)

    def is_rational(self) -> bool:
        return not any(self.coeffs[1:])

    def as_rational(self) -> mpq:
        if not self.is_rational():
            raise ValueError(f"{self} is not rational")
        return self.coeffs[0]

    # -- conductor handling ----------------------------------------------
    def promote(self, M: int) -> "CycRational":
        """Embed into Q(zeta_M); requires conductor | M."""
        N = self.conductor
        if M == N:
            return self
        if M % N:
            raise ValueError(f"cannot promote conductor {N} to {M}")
        table = _power_table(M)
        step = M // N
        out = [ZERO] * len(table[0])
        for k, c in enumerate(self.coeffs):
            if c:
                row = table[(k * step) % M]
                for r, v in enumerate(row):
                    if v:
                        out[r] += v * c
        return CycRational._raw(M, tuple(out))

    def _coerce(self, other):
        if isinstance(other, CycRational):
            if other.conductor == self.conductor:
                return self, other
            M = lcm(self.conductor, other.conductor)
            return self.promote(M), other.promote(M)
        try:
            q = to_rational(other)
        except TypeError:
            return None
        return self, CycRational.rational(q, self.conductor)

    # -- arithmetic -------------------------------------------------------
    def __add__(self, other):
        pair = self._coerce(other)
        if pair is None:
            return NotImplemented
        a, b = pair
        return CycRational._raw(a.conductor, tuple(x + y for x, y in zip(a.coeffs, b.coeffs)))

    __radd__ = __add__

    def __neg__(self):
        return CycRational._raw(self.conductor, tuple(-x for x in self.coeffs))

    def __sub__(self, other):
        pair = self._coerce(other)
        if pair is None:
            return NotImplemented
        a, b = pair
        return CycRational._raw(a.conductor, tuple(x - y for x, y in zip(a.coeffs, b.coeffs)))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, CycRational):
            try:
                q = to_rational(other)
            except TypeError:
                return NotImplemented
            return CycRational._raw(self.conductor, tuple(x * q for x in self.coeffs))
        a, b = self._coerce(other)
        return CycRational._raw(a.conductor, _mul_coeffs(a.coeffs, b.coeffs, a.conductor))

    __rmul__ = __mul__

    def inverse(self) -> "CycRational":
        if self.is_zero():
            raise DivisionByZero("inverse of zero in Q(zeta_N)")
        if self.is_rational():
            return CycRational.rational(1 / self.coeffs[0], self.conductor)
        return CycRational._raw(self.conductor, _inv_coeffs(self.coeffs, self.conductor))

    def __truediv__(self, other):
        if isinstance(other, CycRational):
            return self * other.inverse()
        q = to_rational(other)
        if not q:
            raise DivisionByZero("division by zero")
        return self * (1 / q)

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __pow__(self, k: int):
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            return self.inverse() ** (-k)
        result = CycRational.one(self.conductor)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    # -- comparison / display ---------------------------------------------
    def __eq__(self, other):
        pair = self._coerce(other)
        if pair is None:
            return NotImplemented
        a, b = pair
        return a.coeffs == b.coeffs

    __hash__ = None  # equality crosses conductors, so no cheap canonical hash

    def __repr__(self):
        return f"CycRational({self.conductor}, [{', '.join(format_rational(c) for c in self.coeffs)}])"

    def __str__(self):
        parts = []
        for k, c in enumerate(self.coeffs):
            if not c:
                continue
            q = format_rational(c) if c.denominator != 1 else str(c.numerator)
            if k == 0:
                parts.append(q)
            else:
                z = f"z{self.conductor}" + (f"^{k}" if k > 1 else "")
                parts.append(z if c == 1 else f"{q}*{z}")
        return " + ".join(parts) if parts else "0"

    # -- JSON ---------------------------------------------------------------
    def to_json(self):
        """Bare "num/den" for conductor 1, else the conductor and power-basis coordinates."""
        if self.conductor == 1:
            return format_rational(self.coeffs[0])
        return {"conductor": self.conductor, "coeffs": [format_rational(c) for c in self.coeffs]}

    @classmethod
    def from_json(cls, obj) -> "CycRational":
        """Accepts the canonical dict form or a bare rational ("num/den" or int)."""
        if isinstance(obj, dict):
            return cls(int(obj["conductor"]), [parse_rational(str(c)) for c in obj["coeffs"]])
        if isinstance(obj, bool):
            raise TypeError("booleans are not scalars")
        if isinstance(obj, int):
            return cls.rational(obj)
        if isinstance(obj, str):
            return cls.rational(parse_rational(obj))
        raise TypeError(f"cannot read a cyclotomic scalar from {obj!r}")


def _mul_coeffs(a: tuple, b: tuple, N: int) -> tuple:
    phi = len(a)
    if phi == 1:
        return (a[0] * b[0],)
    prod = [ZERO] * (2 * phi - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                if y:
                    prod[i + j] += x * y
    for j, row in enumerate(reduction_rows(N)):
        c = prod[phi + j]
        if c:
            for r, v in enumerate(row):
                if v:
                    prod[r] += v * c
    return tuple(prod[:phi])


def _inv_coeffs(a: tuple, N: int) -> tuple:
    """Solve a * x = 1 through the multiplication matrix of a."""
    phi = len(a)
    basis = [tuple(ONE if r == j else ZERO for r in range(phi)) for j in range(phi)]
    cols = [_mul_coeffs(a, e, N) for e in basis]
    # augmented rows [M | e_0]
    rows = [[cols[j][i] for j in range(phi)] + [ONE if i == 0 else ZERO] for i in range(phi)]
    for col in range(phi):
        piv = next(r for r in range(col, phi) if rows[r][col])
        rows[col], rows[piv] = rows[piv], rows[col]
        p = rows[col][col]
        rows[col] = [v / p for v in rows[col]]
        for r in range(phi):
            if r != col and rows[r][col]:
                f = rows[r][col]
                rows[r] = [v - f * w for v, w in zip(rows[r], rows[col])]
    return tuple(rows[i][phi] for i in range(phi))


def zeta(N: int, k: int = 1) -> CycRational:
    """zeta_N^k in conductor N."""
    if N < 1:
        raise ValueError("N must be positive")
    row = _power_table(N)[k % N]
    return CycRational._raw(N, tuple(mpq(v) for v in row))


def cyc_add(a: CycRational, b: CycRational) -> CycRational:
    return a + b


def cyc_mul(a: CycRational, b: CycRational) -> CycRational:
    return a * b


def cyc_inv(a: CycRational) -> CycRational:
    return a.inverse()


def root_of_unity(order: int, k: int, conductor: int | None = None) -> CycRational:
    """zeta_order^k expressed in conductor ``conductor`` (default ``order``).

    Raises NoRootInField when Q(zeta_conductor) does not contain it.
    """
    k %= order
    g = gcd(k, order)
    o, k = order // g, k // g  # primitive o-th root, exponent coprime to o
    if conductor is None:
        conductor = o
    if conductor % o == 0:
        return zeta(conductor, k * (conductor // o))
    if o % 4 == 2 and conductor % (o // 2) == 0:
        # zeta_{2m} = -zeta_m^{(m+1)/2} for odd m
        m = o // 2
        return -zeta(conductor, k * ((m + 1) // 2) * (conductor // m))
    raise NoRootInField(
        f"zeta_{o} is not in Q(zeta_{conductor}); extend conductor to {lcm(conductor, o)}",
        required_conductor=lcm(conductor, o),
    )


def _int_root(n: int, k: int):
    r, exact = gmpy2.iroot(n, k)
    return int(r) if exact else None


def _rational_root(q: mpq, k: int):
    """Positive rational k-th root of a positive rational, or None."""
    num = _int_root(int(q.numerator), k)
    den = _int_root(int(q.denominator), k)
    if num is None or den is None:
        return None
    return mpq(num, den)


def unit_split(c: CycRational):
    """Write c = rho * zeta_M^j with rho > 0 rational, M = lcm(conductor, 2).

    Returns (rho, j, M) with the smallest such j, or None when c is not a
    rational multiple of a root of unity.
    """
    if c.is_zero():
        return None
    M = lcm(c.conductor, 2)
    cm = c.promote(M)
    for j in range(M):
        q = cm * zeta(M, -j)
        if q.is_rational() and q.coeffs[0] > 0:
            return q.coeffs[0], j, M
    return None


def canonical_root(c: CycRational, k: int, conductor: int | None = None) -> CycRational:
    """The canonical k-th root of ``c`` = rho * zeta^j (rho > 0 rational).

    Picks the rational root of rho times zeta_{M k}^j with the smallest
    j >= 0, where M = lcm(conductor of c, 2) so that every root of unity
    of Q(zeta_N) is a power of zeta_M.  The result is expressed in
    ``conductor`` if given (NoRootInField if it does not fit), else in
    the smallest conductor containing it.
    """
    if k < 1:
        raise ValueError("root order must be positive")
    if c.is_zero():
        raise NoRootInField("zero has no invertible root")
    split = unit_split(c)
    if split is None:
        raise NoRootInField(f"{c} is not a rational multiple of a root of unity", required_conductor=None)
    q, j, M = split
    rho = _rational_root(q, k)
    if rho is None:
        raise NoRootInField(f"{format_rational(q)} has no rational root of order {k}", required_conductor=None)
    order = M * k
    g = gcd(j, order)
    o = order // g
    target = conductor if conductor is not None else field_conductor(o)
    return root_of_unity(o, j // g, target) * rho
