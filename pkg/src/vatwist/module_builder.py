"""Finite-dimensional indecomposable modules over (C[s, 1/s], D).

A module of dimension n is encoded by the single series S(x) = Y(s, x) with
coefficients in K[eps]/(eps^n) (eps standing for the Jordan block J_n).  It
must satisfy S^Nq S' = p(S) and be invertible; then Y(u, x) = u(S(x)).

Two families exist.  With ld(S^(0)) = +1 we need Nq = 0 and p(0) = alpha,
and S solves S' = p(S) with S(0) = eps.  With ld(S^(0)) = -1 we need
N_p = Nq + 2 and alpha = -1/p_{N_p}; here we build S~ = Y(1/s) for the
derivation of s~ = 1/s (which lands in the first family) and invert it.
"""

from __future__ import annotations

from dataclasses import dataclass

from gmpy2 import mpq

from .diffalgebra import DerivationSpec, LaurentPoly
from .errors import ExistenceFailed, NotInvertible, TruncationTooSmall
from .nilcoeff import NilScalar
from .scalars import CycRational, lcm
from .series import PuiseuxSeries

CLAUSE_NQ = "N_q=0"
CLAUSE_P0 = "p(0)=α"
CLAUSE_NP = "N_p=N_q+2"
CLAUSE_LEAD = "α=−1/p_{N_p}"


def _cyc(x) -> CycRational:
    return x if isinstance(x, CycRational) else CycRational.rational(x)


@dataclass(frozen=True, eq=False)
class ModuleSpec:
    derivation: DerivationSpec
    dim: int
    sign_L: int
    alpha: CycRational

    def __post_init__(self):
        object.__setattr__(self, "alpha", _cyc(self.alpha))
        if self.dim < 1:
            raise ValueError("dim must be at least 1")
        if self.sign_L not in (1, -1):
            raise ValueError("sign_L must be +1 or -1")
        if not self.alpha:
            raise ValueError("alpha must be nonzero")

    @classmethod
    def natural(cls, derivation: DerivationSpec, dim: int, sign_L: int) -> "ModuleSpec":
        """The spec whose alpha is forced by the existence conditions."""
        alpha = derivation.p0 if sign_L == 1 else -derivation.lead.inverse()
        return cls(derivation, dim, sign_L, alpha)

    @property
    def conductor(self) -> int:
        return lcm(self.derivation.conductor, self.alpha.conductor)

    def __eq__(self, other):
        if not isinstance(other, ModuleSpec):
            return NotImplemented
        return (self.derivation == other.derivation and self.dim == other.dim
                and self.sign_L == other.sign_L and self.alpha == other.alpha)

    __hash__ = None

    def to_json(self) -> dict:
        return {
            "derivation": self.derivation.to_json(),
            "dim": self.dim,
            "sign_L": self.sign_L,
            "alpha": self.alpha.to_json(),
        }

    @classmethod
    def from_json(cls, obj) -> "ModuleSpec":
        D = DerivationSpec.from_json(obj["derivation"])
        dim = int(obj.get("dim", 1))
        L = int(obj["sign_L"])
        if obj.get("alpha") is None:
            return cls.natural(D, dim, L)
        return cls(D, dim, L, CycRational.from_json(obj["alpha"]))


@dataclass(frozen=True, eq=False)
class VAModule:
    spec: ModuleSpec
    S: PuiseuxSeries

    @property
    def dim(self) -> int:
        return self.spec.dim

    def __eq__(self, other):
        if not isinstance(other, VAModule):
            return NotImplemented
        return self.spec == other.spec and self.S == other.S

    __hash__ = None

    def to_json(self) -> dict:
        return {"spec": self.spec.to_json(), "S": self.S.to_json()}

    @classmethod
    def from_json(cls, obj) -> "VAModule":
        spec = ModuleSpec.from_json(obj["spec"])
        S = PuiseuxSeries.from_json(obj["S"])
        if S.order != spec.dim:
            raise ValueError(f"series order {S.order} does not match dim {spec.dim}")
        return cls(spec, S)


def existence_check(spec: ModuleSpec) -> tuple[bool, list[str]]:
    """(ok, violated clauses) for the classification conditions."""
    D = spec.derivation
    bad = []
    if spec.sign_L == 1:
        if D.N_q != 0:
            bad.append(f"{CLAUSE_NQ} violated")
        if D.p0 != spec.alpha:
            bad.append(f"{CLAUSE_P0} violated")
    else:
        if D.N_p != D.N_q + 2:
            bad.append(f"{CLAUSE_NP} violated")
        if spec.alpha * D.lead != -1:
            bad.append(f"{CLAUSE_LEAD} violated")
    return not bad, bad


def _require(spec: ModuleSpec):
    ok, bad = existence_check(spec)
    if not ok:
        raise ExistenceFailed("; ".join(bad), bad[0].removesuffix(" violated"))


def reduced_derivation(D: DerivationSpec) -> DerivationSpec:
    """Derivation in s~ = 1/s: D(s~) = -s~^(Nq+2) p(1/s~), a polynomial when N_p = Nq + 2."""
    q = D.N_q + 2
    return DerivationSpec(LaurentPoly({q - i: -c for i, c in D.p.terms.items()}), 0)


def _semisimple_coeffs(p: LaurentPoly, alpha: CycRational, K: int) -> list:
    """S_0..S_K of the solution of S' = p(S), S(0) = 0 (so S_1 = p(0) = alpha).

    (m+1) S_{m+1} = sum_i p_i sum_{j_1+..+j_i = m, j >= 1} S_{j_1}...S_{j_i},
    with the inner sums kept as running coefficient tables of the powers S^i.
    """
    zero = CycRational.zero(alpha.conductor)
    deg = p.max_exp()
    S = [zero] * (K + 1)
    # pw[i][m] = [x^m] S^i
    pw = [[zero] * (K + 1) for _ in range(deg + 1)]
    pw[0][0] = CycRational.one()
    if K >= 1:
        S[1] = alpha
    for m in range(0, K):
        # bring power tables up to date at degree m (needs S_1..S_m)
        for i in range(1, deg + 1):
            acc = zero
            for j in range(1, m + 1):
                if S[j] and pw[i - 1][m - j]:
                    acc = acc + S[j] * pw[i - 1][m - j]
            pw[i][m] = acc
        if m == 0:
            continue  # S_1 fixed by the initial data
        rhs = zero
        for i, c in p.terms.items():
            if pw[i][m]:
                rhs = rhs + c * pw[i][m]
        S[m + 1] = rhs * mpq(1, m + 1)
    return S


def poly_eval(p: LaurentPoly, S: PuiseuxSeries) -> PuiseuxSeries:
    """p(S) for a polynomial p (Horner)."""
    out = None
    for e in range(p.max_exp(), -1, -1):
        c = p.coeff(e)
        if out is None:
            out = PuiseuxSeries.constant(c, order=S.order, ramification=S.ramification)
            continue
        out = out * S
        if c:
            out = out + c
    return out


def _build_positive(D: DerivationSpec, alpha: CycRational, dim: int, K: int) -> PuiseuxSeries:
    """Solution of S' = p(S), S(0) = eps, exact through x^K (Nq = 0 family)."""
    p = D.p
    s0 = _semisimple_coeffs(p, alpha, K)
    n = dim
    S0 = PuiseuxSeries({m: NilScalar.scalar(c, n) for m, c in enumerate(s0) if c}, order=n, trunc=K)
    if n == 1:
        return S0
    # p'(S0) drives every linearised grade equation
    dp = p.deriv()
    P1 = poly_eval(dp, S0) if dp else PuiseuxSeries.zero(order=n)
    p1 = [P1.coeff(m).comps[0] for m in range(K + 1)]
    S = S0
    zero = CycRational.zero(alpha.conductor)
    for k in range(1, n):
        if k == 1:
            g = [zero] * (K + 1)
        else:
            G = poly_eval(p, S).graded_part(k)
            g = [G.coeff(m).comps[0] for m in range(K + 1)]
        # y' = p'(S0) y + g,  y(0) = [k == 1]
        y = [zero] * (K + 1)
        y[0] = CycRational.one() if k == 1 else zero
        for m in range(K):
            acc = g[m]
            for j in range(m + 1):
                if p1[j] and y[m - j]:
                    acc = acc + p1[j] * y[m - j]
            y[m + 1] = acc * mpq(1, m + 1)
        comps_zero = [zero] * n
        terms = {}
        for m, c in enumerate(y):
            if c:
                comps = list(comps_zero)
                comps[k] = c
                terms[m] = NilScalar._raw(n, tuple(comps))
        S = S + PuiseuxSeries(terms, order=n, trunc=K)
    return S


def build_semisimple(spec: ModuleSpec, K: int, order: int = 1) -> PuiseuxSeries:
    """The scalar series S^(0), exact through x^K."""
    _require(spec)
    if K < 1:
        raise TruncationTooSmall(f"truncation {K} < 1")
    D = spec.derivation
    if spec.sign_L == 1:
        s0 = _semisimple_coeffs(D.p, spec.alpha, K)
        return PuiseuxSeries({m: c for m, c in enumerate(s0) if c}, order=order, trunc=K)
    Dt = reduced_derivation(D)
    # S~ = x/alpha + ...: its inverse is known 2 units below S~'s bound
    s0 = _semisimple_coeffs(Dt.p, spec.alpha.inverse(), K + 2)
    St = PuiseuxSeries({m: c for m, c in enumerate(s0) if c}, order=order, trunc=K + 2)
    return St.inverse()


def _reduced_guard(n: int) -> int:
    # each eps-grade of (S~)^-1 loses two more x-units than the previous
    return 2 * n


def _staircase(S: PuiseuxSeries, K: int) -> PuiseuxSeries:
    """Clip grade k to K + 2 (n - 1 - k); lower grades keep extra precision."""
    n = S.order
    want = tuple(K + 2 * (n - 1 - k) for k in range(n))
    return S.with_trunc(want)


def build_full(spec: ModuleSpec, K: int) -> VAModule:
    """The module series S to order K in every eps-grade.

    Lower grades carry a little extra precision (two x-units per grade) so
    that identities mixing grades can be certified up to the top grade's
    bound.
    """
    _require(spec)
    if K < 1:
        raise TruncationTooSmall(f"truncation {K} < 1")
    D = spec.derivation
    n = spec.dim
    if spec.sign_L == 1:
        S = _build_positive(D, spec.alpha, n, K + 2 * (n - 1))
    else:
        Dt = reduced_derivation(D)
        St = _build_positive(Dt, spec.alpha.inverse(), n, K + 2 + _reduced_guard(n))
        S = St.inverse()
    return VAModule(spec, _staircase(S, K))


def module_Y(M: VAModule, u: LaurentPoly) -> PuiseuxSeries:
    """Y_M(u, x) = u(S(x))."""
    S = M.S
    n = S.order
    out = PuiseuxSeries.zero(order=n, ramification=S.ramification)
    if u.is_zero():
        return out
    pos = [e for e in u.terms if e > 0]
    neg = [e for e in u.terms if e < 0]
    if 0 in u.terms:
        out = out + u.terms[0]
    if pos:
        power = S
        for e in range(1, max(pos) + 1):
            if e > 1:
                power = power * S
            if e in u.terms:
                out = out + power.scale(u.terms[e])
    if neg:
        Sinv = _inverse(S)
        power = Sinv
        for e in range(1, -min(neg) + 1):
            if e > 1:
                power = power * Sinv
            if -e in u.terms:
                out = out + power.scale(u.terms[-e])
    return out


def _inverse(S: PuiseuxSeries) -> PuiseuxSeries:
    # exact inputs get a short window; only the sign of exponents matters here
    return S.inverse(prec=4 * S.ramification if S.is_exact() else None)


def _has_negative(f: PuiseuxSeries) -> bool:
    return any(m < 0 for m in f.terms)


def is_ring_module(M: VAModule) -> bool:
    """True iff Y(s) and Y(1/s) are power series (no negative exponents)."""
    if _has_negative(M.S):
        return False
    try:
        inv = _inverse(M.S)
    except NotInvertible:
        return False
    return not _has_negative(inv)


def ring_module_witness(M: VAModule):
    """(generator, exponent) of a negative power, or None."""
    if _has_negative(M.S):
        return "s", M.S.ld()
    inv = _inverse(M.S)
    if _has_negative(inv):
        return "s^-1", inv.ld()
    return None
