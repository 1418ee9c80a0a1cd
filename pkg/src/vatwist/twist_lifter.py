"""Twisted module structures over the cyclic extension A = R[t]/(t^n - s).

A module with series S lifts to A by choosing T = Y(t, x) with T^n = S.
There are exactly n choices (the n-th roots differ by zeta_n^b), each a
tau^(-L)-twisted module: Y(t^r u(s), x) = u(S) T^r has exponents in
r L / n + Z.

When the positive rational part rho of lc(S) has no rational n-th root (say
rho = 2, n = 3) the root is not cyclotomic.  We then keep it formal: the
stored series is U = (S / rho)^(1/n) and T = rho^(1/n) U.  For homogeneous
a of t-degree j the true field is rho^(j/n) times the series returned by
``twisted_Y``; every identity we check is homogeneous, so the formal factor
only enters through rho^(q) when t-degrees wrap past n.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .diffalgebra import ExtElement, LaurentPoly
from .errors import BranchOutOfRange, NoRootInField, OrderMismatch
from .module_builder import VAModule
from .scalars import CycRational, field_contains, lcm, unit_split, zeta
from .series import PuiseuxSeries, pth_root


@dataclass(frozen=True, eq=False)
class TwistedStructure:
    base: VAModule
    ext_degree: int
    branch: int
    T: PuiseuxSeries
    twist_exponent: int
    radical: CycRational = field(default_factory=CycRational.one)
    _cache: dict = field(default_factory=dict, repr=False, compare=False)

    @property
    def dim(self) -> int:
        return self.base.dim

    @property
    def sign_L(self) -> int:
        return self.base.spec.sign_L

    def __eq__(self, other):
        if not isinstance(other, TwistedStructure):
            return NotImplemented
        return (self.ext_degree == other.ext_degree and self.branch == other.branch
                and self.twist_exponent == other.twist_exponent and self.T == other.T
                and self.radical == other.radical and self.base == other.base)

    __hash__ = None

    def replace(self, **changes) -> "TwistedStructure":
        """Copy with some fields changed (and a fresh evaluation cache)."""
        kw = dict(base=self.base, ext_degree=self.ext_degree, branch=self.branch, T=self.T,
                  twist_exponent=self.twist_exponent, radical=self.radical)
        kw.update(changes)
        return TwistedStructure(**kw)

    # cached powers used by twisted_Y
    def _power(self, which: str, k: int) -> PuiseuxSeries:
        key = (which, k)
        hit = self._cache.get(key)
        if hit is not None:
            return hit
        if k == 1:
            if which == "S":
                val = self.base.S.promote(self.T.ramification)
            elif which == "Sinv":
                S = self.base.S
                val = S.inverse(prec=4 if S.is_exact() else None).promote(self.T.ramification)
            else:
                val = self.T
        else:
            val = self._power(which, k - 1) * self._power(which, 1)
        self._cache[key] = val
        return val

    @property
    def is_formal(self) -> bool:
        return self.radical != 1

    def to_json(self) -> dict:
        out = {
            "base": self.base.to_json(),
            "ext_degree": self.ext_degree,
            "branch": self.branch,
            "twist_exponent": self.twist_exponent,
            "T": self.T.to_json(),
        }
        if self.is_formal:
            out["radical"] = self.radical.to_json()
        return out

    @classmethod
    def from_json(cls, obj) -> "TwistedStructure":
        base = VAModule.from_json(obj["base"])
        n = int(obj["ext_degree"])
        b = int(obj["branch"])
        if not 0 <= b < n:
            raise BranchOutOfRange(f"branch {b} outside 0..{n - 1}")
        T = PuiseuxSeries.from_json(obj["T"])
        if T.order != base.dim:
            raise ValueError(f"T has order {T.order}, module has dim {base.dim}")
        radical = CycRational.from_json(obj["radical"]) if "radical" in obj else CycRational.one()
        if not radical:
            raise ValueError("radical must be nonzero")
        return cls(base, n, b, T, int(obj["twist_exponent"]), radical)


def twist_exponent_for(sign_L: int, n_ext: int) -> int:
    return (-sign_L) % n_ext


def lift(M: VAModule, n_ext: int, branch: int = 0, conductor: int | None = None) -> TwistedStructure:
    """The structure with T = canonical n-th root of S times zeta_n^branch.

    With ``conductor=None`` the field is extended as needed.  An explicit
    conductor must already contain the n_ext-th roots of unity.
    """
    if n_ext < 1:
        raise ValueError("extension degree must be positive")
    if not 0 <= branch < n_ext:
        raise BranchOutOfRange(f"branch {branch} outside 0..{n_ext - 1}")
    if conductor is not None and not field_contains(conductor, n_ext):
        need = lcm(conductor, n_ext)
        raise NoRootInField(f"no primitive root of unity of order {n_ext}; extend conductor to {need}", need)
    e = twist_exponent_for(M.spec.sign_L, n_ext)
    try:
        T = pth_root(M.S, n_ext, branch, conductor)
    except NoRootInField as exc:
        if exc.required_conductor is not None:
            raise
        split = unit_split(M.S.semisimple_part().lc().comps[0])
        if split is None:
            raise
        rho = CycRational.rational(split[0])
        U = pth_root(M.S.scale(1 / split[0]), n_ext, branch, conductor)
        return TwistedStructure(M, n_ext, branch, U, e, rho)
    return TwistedStructure(M, n_ext, branch, T, e)


def module_Y_cached(st: TwistedStructure, u: LaurentPoly) -> PuiseuxSeries:
    """u(S) on the structure's ramification, reusing cached powers of S and 1/S."""
    S = st.base.S
    p = st.T.ramification
    out = PuiseuxSeries.zero(order=S.order, ramification=p)
    for e, c in u.terms.items():
        if e == 0:
            out = out + c
        elif e > 0:
            out = out + st._power("S", e).scale(c)
        else:
            out = out + st._power("Sinv", -e).scale(c)
    return out


def t_degree(a: ExtElement):
    """The t-degree j of a homogeneous element (None for 0, -1 if mixed)."""
    degs = [j for j, u in enumerate(a.comps) if not u.is_zero()]
    if not degs:
        return None
    return degs[0] if len(degs) == 1 else -1


def twisted_Y(st: TwistedStructure, a: ExtElement) -> PuiseuxSeries:
    """Y(a, x) = sum_j comps[j](S) T^j.

    For structures with a formal radical, a must be homogeneous and the
    result omits the factor rho^(j/n).
    """
    if a.ext_degree != st.ext_degree:
        raise OrderMismatch(f"element of degree {a.ext_degree} on a degree-{st.ext_degree} structure")
    if st.is_formal and t_degree(a) == -1:
        raise ValueError("mixed t-degrees need a homogeneous split when the root is formal")
    out = PuiseuxSeries.zero(order=st.dim, ramification=st.T.ramification)
    for j in range(a.ext_degree):
        u = a.comps[j]
        if u.is_zero():
            continue
        Yu = module_Y_cached(st, u)
        out = out + (Yu if j == 0 else Yu * st._power("T", j))
    return out


def conjugate(st: TwistedStructure, k: int) -> TwistedStructure:
    """Precompose with tau^k: T becomes zeta_n^k T."""
    n = st.ext_degree
    k %= n
    if k == 0:
        return st.replace()
    return st.replace(T=st.T.scale(zeta(n, k)), branch=(st.branch + k) % n)


def enumerate_structures(M: VAModule, n_ext: int, conductor: int | None = None) -> list[TwistedStructure]:
    """All n_ext twisted structures lifting M, indexed by branch."""
    return [lift(M, n_ext, b, conductor) for b in range(n_ext)]
