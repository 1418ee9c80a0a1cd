"""Independent verification of built modules and twisted structures.

Every check compares two truncated series (or mode sums) only where both
sides are certified by the tracked truncation bounds, and reports the
exponent up to which equality was confirmed.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from math import factorial

from gmpy2 import mpq

from .diffalgebra import ExtElement, LaurentPoly, d_ext_apply, mode_product
from .errors import NotInvertible, WindowExceedsTruncation, ZeroSeries
from .module_builder import VAModule, existence_check, poly_eval
from .nilcoeff import NilScalar, matmul
from .scalars import canonical_root, root_of_unity
from .series import INF, PuiseuxSeries
from .twist_lifter import TwistedStructure, conjugate, t_degree, twisted_Y

PASS = "pass"
FAIL = "fail"


def _fmt(v) -> str:
    return str(v)


@dataclass
class CheckReport:
    check_name: str
    verified_order: Fraction | None
    status: str
    witnesses: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return self.status == PASS

    def to_json(self) -> dict:
        vo = self.verified_order
        return {
            "check_name": self.check_name,
            "verified_order": None if vo is None else str(vo),
            "status": self.status,
            "witnesses": [
                {"index": [_fmt(i) for i in idx], "lhs": _fmt(lhs), "rhs": _fmt(rhs)}
                for idx, lhs, rhs in self.witnesses
            ],
        }

    def summary(self) -> str:
        vo = "-" if self.verified_order is None else f"x^{self.verified_order}"
        extra = f", {len(self.witnesses)} witness(es)" if self.witnesses else ""
        return f"{self.check_name}: {self.status} (verified to {vo}{extra})"


def _report(name, verified, witnesses) -> CheckReport:
    witnesses = sorted(witnesses, key=lambda w: tuple(str(i) for i in w[0]))
    return CheckReport(name, verified, FAIL if witnesses else PASS, witnesses)


def _guarded(name):
    """Turn a degenerate input (singular or vanishing series) into a failed report."""

    def wrap(fn):
        @functools.wraps(fn)
        def inner(*args, **kwargs):
            try:
                return fn(*args, **kwargs)
            except (NotInvertible, ZeroSeries) as exc:
                return _report(name, None, [((name, "degenerate"), type(exc).__name__, str(exc))])

        return inner

    return wrap


def _min_order(a, b):
    if a is None:
        return b
    if b is None:
        return a
    return min(a, b)


def compare_series(lhs: PuiseuxSeries, rhs: PuiseuxSeries, label=()):
    """(verified exponent, witnesses) for lhs == rhs grade by grade."""
    bounds, p, diffs = lhs.mismatches(rhs)
    b = min(bounds)
    verified = None if b == INF else Fraction(b, p)
    witnesses = [(tuple(label) + (e, k), x, y) for e, k, x, y in diffs]
    return verified, witnesses


def as_structure(obj) -> TwistedStructure:
    """A module viewed as the untwisted structure over the trivial extension."""
    if isinstance(obj, TwistedStructure):
        return obj
    return TwistedStructure(obj, 1, 0, obj.S, 0)


# ---------------------------------------------------------------------------
# module checks


def _commute_witnesses(S: PuiseuxSeries, limit: int = 8):
    coeffs = [(e, c.to_matrix()) for e, c in S.items()[:limit]]
    out = []
    for (e1, A), (e2, B) in product(coeffs, coeffs):
        if e1 < e2 and matmul(A, B) != matmul(B, A):
            out.append((("commute", e1, e2), "S_i S_j", "S_j S_i"))
    return out


@_guarded("ode")
def check_ode(M: VAModule) -> CheckReport:
    """S^Nq S' = p(S), plus invertibility, commuting modes and the normalisation.

    The normalisation pins the only freedom of the construction: the x^0
    coefficient of Y(s^L) is eps (the Jordan block), the semisimple part
    has lowest exponent L and lowest coefficient alpha.
    """
    spec = M.spec
    D = spec.derivation
    S = M.S
    witnesses = []
    ok, bad = existence_check(spec)
    if not ok:
        witnesses += [(("existence",), clause, "required") for clause in bad]
    S0 = S.semisimple_part()
    if not S0.terms:
        witnesses.append((("invertible",), "0", "nonzero semisimple part"))
        return _report("ode", None, witnesses)
    if S0.ld() != spec.sign_L:
        witnesses.append((("ld",), S0.ld(), spec.sign_L))
    if S0.lc().comps[0] != spec.alpha:
        witnesses.append((("lc",), S0.lc().comps[0], spec.alpha))
    try:
        inv = S.inverse()
    except NotInvertible:
        witnesses.append((("invertible",), "singular", "invertible"))
        return _report("ode", None, witnesses)
    norm = S if spec.sign_L == 1 else inv
    if norm.known(0, S.order - 1):
        have = norm.coeff(0)
        want = NilScalar.eps(S.order)
        if have != want:
            witnesses.append((("normalization", 0), have, want))
    witnesses += _commute_witnesses(S)
    lhs = S.deriv()
    if D.N_q:
        lhs = (S ** D.N_q) * lhs
    rhs = poly_eval(D.p, S)
    verified, w = compare_series(lhs, rhs, ("ode",))
    witnesses += w
    return _report("ode", verified, witnesses)


# ---------------------------------------------------------------------------
# structure checks


@_guarded("root")
def check_root(st: TwistedStructure) -> CheckReport:
    """T^n = S (with the formal radical restored), and T sits on its labelled branch."""
    n = st.ext_degree
    lhs = st.T ** n
    if st.is_formal:
        lhs = lhs.scale(st.radical)
    verified, w = compare_series(lhs, st.base.S, ("root",))
    lead = st.base.S.semisimple_part().lc().comps[0] * st.radical.inverse()
    want = canonical_root(lead, n) * root_of_unity(n, st.branch)
    have = st.T.semisimple_part().lc().comps[0]
    if have != want:
        w.append((("branch", st.branch), have, want))
    return _report("root", verified, w)


@_guarded("vacuum")
def check_vacuum(st) -> CheckReport:
    st = as_structure(st)
    one = ExtElement.embed(LaurentPoly.constant(1), st.ext_degree)
    Y = twisted_Y(st, one)
    ref = PuiseuxSeries.constant(1, order=st.dim, ramification=st.T.ramification)
    verified, w = compare_series(Y, ref, ("vacuum",))
    if verified is None:
        verified = st.T.precision
    return _report("vacuum", verified, w)


def default_grading_elements(n: int):
    out = []
    for r in range(n):
        for label, u in (("1", LaurentPoly.constant(1)), ("s", LaurentPoly.monomial()),
                         ("s^-1", LaurentPoly.monomial(1, -1))):
            comps = [LaurentPoly() for _ in range(n)]
            comps[r] = u
            out.append((f"t^{r}*{label}", r, ExtElement(n, comps)))
    return out


def predicted_coset(st: TwistedStructure, r: int) -> Fraction:
    """Exponents of Y(t^r u) lie in this coset of Z (value in [0, 1))."""
    n = st.ext_degree
    return Fraction(-st.twist_exponent * r, n) % 1


@_guarded("grading")
def check_grading(st, elements=None) -> CheckReport:
    """Exponents of Y(t^r u(s)) lie in the coset fixed by tau^twist on t^r."""
    st = as_structure(st)
    n = st.ext_degree
    elements = elements or default_grading_elements(n)
    witnesses = []
    verified = None
    for label, r, a in elements:
        Y = twisted_Y(st, a)
        coset = predicted_coset(st, r)
        for e, c in Y.items():
            if (e - coset).denominator != 1:
                witnesses.append(((label, e), e % 1, coset))
        verified = _min_order(verified, Y.precision if Y.trunc_min != INF else None)
    return _report("grading", verified, witnesses)


def default_generators(n: int):
    """The probe elements s, 1/s, t, t^(n-1) (duplicates removed)."""
    cand = [
        ("s", ExtElement.embed(LaurentPoly.monomial(), n)),
        ("s^-1", ExtElement.embed(LaurentPoly.monomial(1, -1), n)),
        ("t", ExtElement.t_power(1, n)),
        (f"t^{n - 1}", ExtElement.t_power(n - 1, n)),
    ]
    out = []
    for label, a in cand:
        if not any(a == b for _, b in out):
            out.append((label, a))
    return out


@_guarded("d_compat")
def check_d_compat(obj, gens=None) -> CheckReport:
    """Y(D a, x) = d/dx Y(a, x)."""
    st = as_structure(obj)
    D = st.base.spec.derivation
    gens = gens or default_generators(st.ext_degree)
    witnesses = []
    verified = None
    for label, a in gens:
        lhs = twisted_Y(st, d_ext_apply(D, a))
        rhs = twisted_Y(st, a).deriv()
        v, w = compare_series(lhs, rhs, ("d_compat", label))
        witnesses += w
        verified = _min_order(verified, v)
    return _report("d_compat", verified, witnesses)


@_guarded("distinct")
def check_distinct(structures) -> CheckReport:
    """Pairwise different roots, certified at the leading coefficient."""
    witnesses = []
    verified = None
    for i in range(len(structures)):
        for j in range(i + 1, len(structures)):
            a, b = structures[i], structures[j]
            Ta, Tb = a.T.semisimple_part(), b.T.semisimple_part()
            la, lb = Ta.ld(), Tb.ld()
            ca = Ta.lc().comps[0] * a.radical
            cb = Tb.lc().comps[0] * b.radical
            if la == lb and ca == cb:
                witnesses.append(((i, j, la), ca, cb))
            verified = _min_order(verified, min(la, lb))
    return _report("distinct", verified, witnesses)


@_guarded("orbit")
def check_orbit(structures) -> CheckReport:
    """conjugate(first, k) reproduces the k-th structure."""
    witnesses = []
    verified = None
    first = structures[0]
    for k, st in enumerate(structures):
        c = conjugate(first, k)
        if c.branch != st.branch or c.twist_exponent != st.twist_exponent or c.radical != st.radical:
            witnesses.append(((k, "label"), (c.branch, c.twist_exponent), (st.branch, st.twist_exponent)))
        v, w = compare_series(c.T, st.T, ("orbit", k))
        witnesses += w
        verified = _min_order(verified, v)
    return _report("orbit", verified, witnesses)


# ---------------------------------------------------------------------------
# Borcherds identity


def gen_binom(a, i: int) -> mpq:
    """a (a-1) ... (a-i+1) / i! for rational a."""
    num = mpq(1)
    a = mpq(a.numerator, a.denominator) if isinstance(a, Fraction) else mpq(a)
    for k in range(i):
        num *= a - k
    return num / factorial(i)


@dataclass(frozen=True)
class BorcherdsWindow:
    l_range: tuple[int, int] = (-2, 3)
    m_offsets: tuple[int, int] = (-3, 3)
    n_offsets: tuple[int, int] = (-3, 3)

    def to_json(self) -> dict:
        return {"l": list(self.l_range), "m": list(self.m_offsets), "n": list(self.n_offsets)}

    @classmethod
    def from_json(cls, obj) -> "BorcherdsWindow":
        def pair(key, default):
            v = obj.get(key, default)
            if len(v) != 2 or int(v[0]) > int(v[1]):
                raise ValueError(f"window range {key} must be [lo, hi]")
            return (int(v[0]), int(v[1]))

        return cls(pair("l", [-2, 3]), pair("m", [-3, 3]), pair("n", [-3, 3]))


class _Field:
    """Mode access for one vertex operator Y(a, x) = sum a_j x^(-j-1).

    Mode indices are passed scaled by the ramification P (J = j P), so all
    lookups are integer arithmetic.
    """

    __slots__ = ("series", "P", "low", "order", "zero", "top_used")

    def __init__(self, series: PuiseuxSeries, P: int):
        series = series.promote(P)
        self.series = series
        self.P = P
        self.order = series.order
        self.low = min(series.terms) if series.terms else None
        self.zero = NilScalar.scalar(0, self.order)
        self.top_used = None

    def mode(self, J: int):
        """(a_j, number of eps-grades certified) for J = j P."""
        num = -J - self.P
        if self.low is None or num < self.low:
            return self.zero, self.order
        s = self.series
        known = 0
        while known < self.order and num <= s.trunc[known]:
            known += 1
        if known and (self.top_used is None or num > self.top_used):
            self.top_used = num
        return s.terms.get(num, self.zero), known

    def top_mode(self):
        """Largest scaled index J with a possibly nonzero mode."""
        return None if self.low is None else -self.low - self.P


class _Evaluator:
    def __init__(self, st: TwistedStructure):
        self.st = st
        self.P = st.T.ramification
        self.D = st.base.spec.derivation
        self.fields = {}
        self.products = {}

    def field(self, key, a: ExtElement) -> _Field:
        f = self.fields.get(key)
        if f is None:
            f = _Field(twisted_Y(self.st, a), self.P)
            self.fields[key] = f
        return f

    def product_field(self, ukey, u, vkey, v, j):
        """Y(u_j v) for j <= -1, or None when u_j v = 0."""
        key = (ukey, vkey, j)
        if key not in self.products:
            w = mode_product(self.D, u, v, j)
            self.products[key] = None if w.is_zero() else _Field(twisted_Y(self.st, w), self.P)
        return self.products[key]

    def all_fields(self):
        yield from self.fields.values()
        yield from (f for f in self.products.values() if f is not None)


@functools.lru_cache(maxsize=None)
def _binom(num: int, den: int, i: int) -> mpq:
    return gen_binom(mpq(num, den), i)


def _borcherds_cell(ev, uk, u, vk, v, q, l, M, N):
    """Both sides at (l, m = M/P, n = N/P) as (value, grades certified)."""
    P = ev.P
    order = ev.st.dim
    Fu = ev.field(uk, u)
    Fv = ev.field(vk, v)
    L = l * P
    lhs, lk = ev.zero, order
    # left side: u_{l+i} v vanishes once l + i >= 0
    for i in range(0, max(0, -l)):
        Fw = ev.product_field(uk, u, vk, v, l + i)
        if Fw is None:
            continue
        c = _binom(M, P, i)
        if c:
            a, ak = Fw.mode(M + N - i * P)
            lhs = lhs + a * c
            lk = min(lk, ak)
    rhs, rk = ev.zero, order
    # right side: each sum stops once the inner factor's mode vanishes
    top_v = Fv.top_mode()
    if top_v is not None and top_v >= N:
        for i in range((top_v - N) // P + 1):
            c = _binom(l, 1, i) * (-1 if i % 2 else 1)
            if c:
                a, ak = Fu.mode(L + M - i * P)
                b, bk = Fv.mode(N + i * P)
                rhs = rhs + a * b * c
                rk = min(rk, ak, bk)
    top_u = Fu.top_mode()
    if top_u is not None and top_u >= M:
        sign = -1 if l % 2 == 0 else 1  # (-1)^(l+1), l may be negative
        for i in range((top_u - M) // P + 1):
            c = _binom(l, 1, i) * (sign if i % 2 == 0 else -sign)
            if c:
                a, ak = Fv.mode(L + N - i * P)
                b, bk = Fu.mode(M + i * P)
                rhs = rhs + a * b * c
                rk = min(rk, ak, bk)
    # restore the formal radical: t-degrees past n pick up rho
    if q and ev.st.is_formal:
        rhs = rhs * (ev.st.radical ** q)
    return lhs, lk, rhs, rk


def _mode_base(st: TwistedStructure, r: int) -> Fraction:
    """Representative in [0, 1) of the mode coset of an element of t-degree r."""
    return (-predicted_coset(st, r) - 1) % 1


@_guarded("borcherds")
def check_borcherds(obj, window: BorcherdsWindow | None = None, probes=None) -> CheckReport:
    """The twisted Borcherds identity over a finite window of (u, v, l, m, n).

    Modes act on the module as commuting eps-polynomials, so equality of
    the two sides as NilScalars is equality on every basis vector.  Any
    cell needing a mode beyond the known part of a series raises
    WindowExceedsTruncation instead of passing silently.
    """
    st = as_structure(obj)
    window = window or BorcherdsWindow()
    n = st.ext_degree
    gens = probes or default_generators(n)
    ev = _Evaluator(st)
    ev.zero = NilScalar.scalar(0, st.dim)
    P = ev.P
    witnesses = []
    for (uk, u), (vk, v) in product(gens, gens):
        r, s_ = t_degree(u), t_degree(v)
        if r is None or s_ is None or r < 0 or s_ < 0:
            raise ValueError("Borcherds probes must be nonzero homogeneous elements")
        q = (r + s_) // n
        mb, nb = _mode_base(st, r) * P, _mode_base(st, s_) * P
        if mb.denominator != 1 or nb.denominator != 1:
            raise ValueError("mode cosets do not fit the ramification of T")
        for l in range(window.l_range[0], window.l_range[1] + 1):
            for dm in range(window.m_offsets[0], window.m_offsets[1] + 1):
                M = int(mb) + dm * P
                for dn in range(window.n_offsets[0], window.n_offsets[1] + 1):
                    N = int(nb) + dn * P
                    lhs, lk, rhs, rk = _borcherds_cell(ev, uk, u, vk, v, q, l, M, N)
                    k = min(lk, rk)
                    if k < st.dim:
                        cell = f"(u={uk}, v={vk}, l={l}, m={Fraction(M, P)}, n={Fraction(N, P)})"
                        raise WindowExceedsTruncation(
                            f"cell {cell} certifies only {k} of {st.dim} eps-grades at this truncation"
                        )
                    for g in range(k):
                        if lhs.comps[g] != rhs.comps[g]:
                            idx = (uk, vk, l, Fraction(M, P), Fraction(N, P), g)
                            witnesses.append((idx, lhs.comps[g], rhs.comps[g]))
    # report the highest exponent any certified mode lookup reached
    top = None
    for f in ev.all_fields():
        if f.top_used is not None:
            top = f.top_used if top is None else max(top, f.top_used)
    return _report("borcherds", None if top is None else Fraction(top, P), witnesses)


# ---------------------------------------------------------------------------
# bundles


def module_checks(M: VAModule) -> list[CheckReport]:
    return [check_ode(M), check_d_compat(M), check_vacuum(M)]


def structure_checks(st: TwistedStructure, window=None, borcherds: bool = True) -> list[CheckReport]:
    reports = [check_ode(st.base), check_root(st), check_vacuum(st), check_grading(st), check_d_compat(st)]
    if borcherds:
        reports.append(check_borcherds(st, window))
    return reports


def family_checks(structures) -> list[CheckReport]:
    return [check_distinct(structures), check_orbit(structures)]


def all_passed(reports) -> bool:
    return all(r.passed for r in reports)
