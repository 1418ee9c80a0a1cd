"""The differential algebra R = C[s, 1/s] and its cyclic extension R[t]/(t^n - s).

The derivation is D = (p(s) / s^Nq) d/ds.  On the extension D(t) = t D(s) / (n s),
so D scales each t-power: D(u t^j) = (D u + j u D(s) / (n s)) t^j.  The
Galois generator tau multiplies t by zeta_n.
"""

from __future__ import annotations

from math import factorial

from gmpy2 import mpq

from .errors import OrderMismatch
from .scalars import CycRational, lcm, zeta


def _cyc(x) -> CycRational:
    return x if isinstance(x, CycRational) else CycRational.rational(x)


class LaurentPoly:
    """Finite sum of c_e s^e with nonzero cyclotomic coefficients."""

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        clean = {}
        for e, c in dict(terms or {}).items():
            c = _cyc(c)
            if c:
                clean[int(e)] = c
        object.__setattr__(self, "terms", clean)

    def __setattr__(self, name, value):
        raise AttributeError("LaurentPoly is immutable")

    @classmethod
    def monomial(cls, coeff=1, exponent: int = 1) -> "LaurentPoly":
        return cls({exponent: coeff})

    @classmethod
    def constant(cls, c) -> "LaurentPoly":
        return cls({0: c})

    def __bool__(self):
        return bool(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    @property
    def conductor(self) -> int:
        N = 1
        for c in self.terms.values():
            N = lcm(N, c.conductor)
        return N

    def min_exp(self) -> int:
        return min(self.terms)

    def max_exp(self) -> int:
        return max(self.terms)

    def coeff(self, e: int) -> CycRational:
        return self.terms.get(e, CycRational.zero())

    def _lift(self, other):
        if isinstance(other, LaurentPoly):
            return other
        if isinstance(other, (CycRational, int)) or hasattr(other, "denominator"):
            return LaurentPoly.constant(other)
        return None

    def __add__(self, other):
        other = self._lift(other)
        if other is None:
            return NotImplemented
        terms = dict(self.terms)
        for e, c in other.terms.items():
            terms[e] = terms[e] + c if e in terms else c
        return LaurentPoly(terms)

    __radd__ = __add__

    def __neg__(self):
        return LaurentPoly({e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        other = self._lift(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, LaurentPoly):
            terms = {}
            for e1, c1 in self.terms.items():
                for e2, c2 in other.terms.items():
                    e = e1 + e2
                    t = c1 * c2
                    terms[e] = terms[e] + t if e in terms else t
            return LaurentPoly(terms)
        if isinstance(other, (CycRational, int)) or hasattr(other, "denominator"):
            return LaurentPoly({e: c * other for e, c in self.terms.items()})
        return NotImplemented

    __rmul__ = __mul__

    def shift(self, k: int) -> "LaurentPoly":
        """Multiply by s^k."""
        return LaurentPoly({e + k: c for e, c in self.terms.items()})

    def deriv(self) -> "LaurentPoly":
        """d/ds."""
        return LaurentPoly({e - 1: c * e for e, c in self.terms.items() if e})

    def __pow__(self, k: int):
        if k < 0:
            if len(self.terms) != 1:
                raise ValueError("only monomials have Laurent inverses")
            ((e, c),) = self.terms.items()
            return LaurentPoly({e * k: c.inverse() ** (-k)})
        out = LaurentPoly.constant(1)
        for _ in range(k):
            out = out * self
        return out

    def __eq__(self, other):
        other = self._lift(other)
        if other is None:
            return NotImplemented
        return self.terms.keys() == other.terms.keys() and all(self.terms[e] == other.terms[e] for e in self.terms)

    __hash__ = None

    def __repr__(self):
        return f"LaurentPoly({self})"

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for e in sorted(self.terms):
            c = self.terms[e]
            if e == 0:
                parts.append(str(c))
                continue
            se = "s" if e == 1 else f"s^({e})"
            parts.append(se if c == 1 else f"({c})*{se}")
        return " + ".join(parts)

    def to_json(self) -> dict:
        return {"terms": [{"exp": e, "coeff": self.terms[e].to_json()} for e in sorted(self.terms)]}

    @classmethod
    def from_json(cls, obj) -> "LaurentPoly":
        terms = {}
        for t in obj["terms"]:
            e = int(t["exp"])
            if e in terms:
                raise ValueError(f"duplicate exponent {e}")
            terms[e] = CycRational.from_json(t["coeff"])
        return cls(terms)


class DerivationSpec:
    """D = (p(s) / s^Nq) d/ds with p a nonzero polynomial."""

    __slots__ = ("p", "N_q")

    def __init__(self, p, N_q: int = 0):
        if not isinstance(p, LaurentPoly):
            p = LaurentPoly(p)
        if p.is_zero():
            raise ValueError("p(s) must be nonzero")
        if p.min_exp() < 0:
            raise ValueError("p(s) must be a polynomial (nonnegative exponents)")
        if N_q < 0:
            raise ValueError("N_q must be nonnegative")
        if N_q > 0 and not p.coeff(0):
            raise ValueError("p(0) must be nonzero when N_q > 0 (p and s^N_q coprime)")
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "N_q", int(N_q))

    def __setattr__(self, name, value):
        raise AttributeError("DerivationSpec is immutable")

    @property
    def L_p(self) -> int:
        return self.p.min_exp()

    @property
    def N_p(self) -> int:
        return self.p.max_exp()

    @property
    def lead(self) -> CycRational:
        """p_{N_p}."""
        return self.p.terms[self.N_p]

    @property
    def p0(self) -> CycRational:
        return self.p.coeff(0)

    @property
    def conductor(self) -> int:
        return self.p.conductor

    def d_of_s(self) -> LaurentPoly:
        """D(s) = p(s) s^-Nq."""
        return self.p.shift(-self.N_q)

    def __eq__(self, other):
        if not isinstance(other, DerivationSpec):
            return NotImplemented
        return self.N_q == other.N_q and self.p == other.p

    __hash__ = None

    def __repr__(self):
        return f"DerivationSpec(p={self.p}, N_q={self.N_q})"

    def to_json(self) -> dict:
        return {"p": self.p.to_json(), "N_q": self.N_q}

    @classmethod
    def from_json(cls, obj) -> "DerivationSpec":
        return cls(LaurentPoly.from_json(obj["p"]), int(obj.get("N_q", 0)))


def d_apply(D: DerivationSpec, u: LaurentPoly) -> LaurentPoly:
    return (D.p * u.deriv()).shift(-D.N_q)


class ExtElement:
    """Element sum_j comps[j] t^j of R[t]/(t^n - s), 0 <= j < n."""

    __slots__ = ("ext_degree", "comps")

    def __init__(self, ext_degree: int, comps=()):
        if ext_degree < 1:
            raise ValueError("extension degree must be positive")
        comps = [c if isinstance(c, LaurentPoly) else LaurentPoly.constant(c) for c in comps]
        if len(comps) > ext_degree:
            # fold higher t-powers with t^n = s
            folded = [LaurentPoly() for _ in range(ext_degree)]
            for j, c in enumerate(comps):
                q, r = divmod(j, ext_degree)
                folded[r] = folded[r] + c.shift(q)
            comps = folded
        comps = comps + [LaurentPoly() for _ in range(ext_degree - len(comps))]
        object.__setattr__(self, "ext_degree", ext_degree)
        object.__setattr__(self, "comps", tuple(comps))

    def __setattr__(self, name, value):
        raise AttributeError("ExtElement is immutable")

    @classmethod
    def embed(cls, u, ext_degree: int) -> "ExtElement":
        """u in R viewed inside the extension."""
        return cls(ext_degree, [u])

    @classmethod
    def t_power(cls, j: int, ext_degree: int, coeff=1) -> "ExtElement":
        """coeff * t^j for any integer j (t^-1 = s^-1 t^(n-1))."""
        q, r = divmod(j, ext_degree)
        comps = [LaurentPoly() for _ in range(ext_degree)]
        comps[r] = LaurentPoly({q: coeff})
        return cls(ext_degree, comps)

    def is_zero(self) -> bool:
        return not any(self.comps)

    def __bool__(self):
        return any(self.comps)

    def _check(self, other):
        if self.ext_degree != other.ext_degree:
            raise OrderMismatch(f"extension degrees {self.ext_degree} and {other.ext_degree} differ")

    def _lift(self, other):
        if isinstance(other, ExtElement):
            self._check(other)
            return other
        if isinstance(other, LaurentPoly):
            return ExtElement.embed(other, self.ext_degree)
        if isinstance(other, (CycRational, int)) or hasattr(other, "denominator"):
            return ExtElement.embed(LaurentPoly.constant(other), self.ext_degree)
        return None

    def __add__(self, other):
        other = self._lift(other)
        if other is None:
            return NotImplemented
        return ExtElement(self.ext_degree, [a + b for a, b in zip(self.comps, other.comps)])

    __radd__ = __add__

    def __neg__(self):
        return ExtElement(self.ext_degree, [-a for a in self.comps])

    def __sub__(self, other):
        other = self._lift(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, (CycRational, int)) or hasattr(other, "denominator"):
            return ExtElement(self.ext_degree, [a * other for a in self.comps])
        other = self._lift(other)
        if other is None:
            return NotImplemented
        n = self.ext_degree
        out = [LaurentPoly() for _ in range(n)]
        for i, a in enumerate(self.comps):
            if not a:
                continue
            for j, b in enumerate(other.comps):
                if not b:
                    continue
                q, r = divmod(i + j, n)
                out[r] = out[r] + (a * b).shift(q)
        return ExtElement(n, out)

    __rmul__ = __mul__

    def __eq__(self, other):
        other = self._lift(other)
        if other is None:
            return NotImplemented
        return all(a == b for a, b in zip(self.comps, other.comps))

    __hash__ = None

    def __repr__(self):
        return f"ExtElement({self})"

    def __str__(self):
        parts = []
        for j, c in enumerate(self.comps):
            if not c:
                continue
            if j == 0:
                parts.append(f"({c})")
            else:
                tj = "t" if j == 1 else f"t^{j}"
                parts.append(f"({c})*{tj}")
        return " + ".join(parts) if parts else "0"

    def to_json(self) -> dict:
        return {"ext_degree": self.ext_degree, "comps": [c.to_json() for c in self.comps]}

    @classmethod
    def from_json(cls, obj) -> "ExtElement":
        n = int(obj["ext_degree"])
        comps = [LaurentPoly.from_json(c) for c in obj["comps"]]
        if len(comps) != n:
            raise ValueError(f"expected {n} components, got {len(comps)}")
        return cls(n, comps)


def d_ext_apply(D: DerivationSpec, a: ExtElement) -> ExtElement:
    """The extension of D with D(t) = t D(s) / (n s)."""
    n = a.ext_degree
    ds_over_s = D.d_of_s().shift(-1)
    out = []
    for j, u in enumerate(a.comps):
        v = d_apply(D, u)
        if j and u:
            v = v + u * ds_over_s * mpq(j, n)
        out.append(v)
    return ExtElement(n, out)


def tau_apply(a: ExtElement, k: int = 1) -> ExtElement:
    """tau^k: t -> zeta_n^k t, fixing R."""
    n = a.ext_degree
    return ExtElement(n, [c * zeta(n, k * j) if j else c for j, c in enumerate(a.comps)])


def d_power(D: DerivationSpec, a: ExtElement, i: int) -> ExtElement:
    for _ in range(i):
        a = d_ext_apply(D, a)
    return a


def algebra_Y(D: DerivationSpec, a: ExtElement, b: ExtElement, K: int) -> list[ExtElement]:
    """Coefficients of x^0..x^K in Y(a, x) b = sum_i (D^i a) b x^i / i!."""
    if K < 0:
        raise ValueError("K must be nonnegative")
    out = []
    cur = a
    for i in range(K + 1):
        out.append(cur * b * mpq(1, factorial(i)))
        cur = d_ext_apply(D, cur)
    return out


def mode_product(D: DerivationSpec, a: ExtElement, b: ExtElement, j: int) -> ExtElement:
    """a_j b: (D^(-1-j) a) b / (-1-j)! for j <= -1, zero otherwise."""
    if j >= 0:
        return ExtElement(a.ext_degree)
    i = -1 - j
    return d_power(D, a, i) * b * mpq(1, factorial(i))


def laurent_from_coeffs(coeffs) -> LaurentPoly:
    """LaurentPoly from a list of coefficients of s^0, s^1, ..."""
    return LaurentPoly({i: c for i, c in enumerate(coeffs)})
