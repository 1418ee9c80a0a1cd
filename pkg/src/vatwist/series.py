"""Truncated Puiseux series in x with K[eps]/(eps^n) coefficients.

A series stores exponents as integer numerators m over a fixed ramification
p (the term at m means x^(m/p)).  Precision is tracked separately for every
eps-grade: ``trunc[k]`` is the largest numerator up to which the eps^k
component is known exactly (``math.inf`` for exact series such as
constants).  Nilpotent components of the objects built here reach to lower
x-exponents than their semisimple parts, so a single bound would throw away
information that the verifier needs.

Products propagate precision with the rule

    trunc_k(f g) = min over i + j = k of min(trunc_i(f) + val_j(g),
                                             trunc_j(g) + val_i(f))

where val_j is the lowest exponent of the grade-j component (or
trunc_j + 1 when that component is known to vanish).
"""

from __future__ import annotations

import math
from fractions import Fraction

from gmpy2 import mpq

from . import kernels
from .errors import BranchOutOfRange, IndexOutOfRange, NotInvertible, OrderMismatch, ZeroSeries
from .nilcoeff import NilScalar
from .scalars import CycRational, canonical_root, lcm, reduction_rows, root_of_unity, totient

INF = math.inf
ZERO = mpq(0)


def _norm_trunc(trunc, order):
    if isinstance(trunc, (int, float)):
        if trunc != INF and trunc != int(trunc):
            raise ValueError("truncation must be an integer numerator")
        return (trunc if trunc == INF else int(trunc),) * order
    trunc = tuple(t if t == INF else int(t) for t in trunc)
    if len(trunc) != order:
        raise ValueError(f"need {order} grade truncations, got {len(trunc)}")
    return trunc


def _as_nil(c, order):
    if isinstance(c, NilScalar):
        if c.order != order:
            raise OrderMismatch(f"coefficient order {c.order} != {order}")
        return c
    return NilScalar.scalar(c, order)


class PuiseuxSeries:
    """Immutable truncated series sum_m c_m x^(m/p)."""

    __slots__ = ("ramification", "order", "trunc", "terms")

    def __init__(self, terms, *, order: int, ramification: int = 1, trunc=INF):
        if ramification < 1:
            raise ValueError("ramification must be positive")
        tr = _norm_trunc(trunc, order)
        clean = {}
        for m, c in dict(terms).items():
            c = _as_nil(c, order)
            comps = c.comps
            if any(comps[k] and m > tr[k] for k in range(order)):
                zero = CycRational.zero(comps[0].conductor)
                comps = tuple(zero if m > tr[k] else comps[k] for k in range(order))
                c = NilScalar._raw(order, comps)
            if c:
                clean[int(m)] = c
        object.__setattr__(self, "ramification", ramification)
        object.__setattr__(self, "order", order)
        object.__setattr__(self, "trunc", tr)
        object.__setattr__(self, "terms", clean)

    @classmethod
    def _raw(cls, terms, order, ramification, trunc):
        obj = object.__new__(cls)
        object.__setattr__(obj, "ramification", ramification)
        object.__setattr__(obj, "order", order)
        object.__setattr__(obj, "trunc", trunc)
        object.__setattr__(obj, "terms", terms)
        return obj

    def __setattr__(self, name, value):
        raise AttributeError("PuiseuxSeries is immutable")

    # -- constructors -------------------------------------------------------
    @classmethod
    def monomial(cls, coeff, exponent, *, order: int, ramification: int | None = None, trunc=INF):
        """coeff * x^exponent; ``exponent`` may be a Fraction."""
        e = Fraction(exponent)
        p = ramification or e.denominator
        if (e * p).denominator != 1:
            raise ValueError(f"exponent {e} not on the 1/{p} lattice")
        return cls({int(e * p): coeff}, order=order, ramification=p, trunc=trunc)

    @classmethod
    def constant(cls, coeff, *, order: int, ramification: int = 1):
        return cls({0: coeff}, order=order, ramification=ramification)

    @classmethod
    def zero(cls, *, order: int, ramification: int = 1, trunc=INF):
        return cls({}, order=order, ramification=ramification, trunc=trunc)

    # -- basic data ---------------------------------------------------------
    @property
    def trunc_min(self):
        """Numerator bound up to which every grade is exact."""
        return min(self.trunc)

    @property
    def precision(self):
        """trunc_min as an exponent (Fraction), or inf."""
        t = self.trunc_min
        return t if t == INF else Fraction(t, self.ramification)

    @property
    def conductor(self) -> int:
        N = 1
        for c in self.terms.values():
            N = lcm(N, c.conductor)
        return N

    def is_exact(self) -> bool:
        return all(t == INF for t in self.trunc)

    def is_zero(self) -> bool:
        return not self.terms

    def exponent(self, m: int) -> Fraction:
        return Fraction(m, self.ramification)

    def coeff(self, exponent) -> NilScalar:
        """Coefficient at x^exponent (zero if absent)."""
        e = Fraction(exponent) * self.ramification
        if e.denominator != 1:
            return NilScalar.scalar(0, self.order)
        return self.terms.get(int(e), NilScalar.scalar(0, self.order))

    def known(self, exponent, grade: int = 0) -> bool:
        return Fraction(exponent) * self.ramification <= self.trunc[grade]

    def valuation(self, k: int):
        """Lowest numerator where grade k is nonzero, else trunc_k + 1."""
        best = None
        for m, c in self.terms.items():
            if c.comps[k] and (best is None or m < best):
                best = m
        if best is None:
            return self.trunc[k] + 1
        return best

    def items(self):
        """(exponent, coefficient) pairs in increasing exponent order."""
        return [(Fraction(m, self.ramification), self.terms[m]) for m in sorted(self.terms)]

    def ld(self) -> Fraction:
        if not self.terms:
            raise ZeroSeries("ld of a series without known terms")
        return Fraction(min(self.terms), self.ramification)

    def lc(self) -> NilScalar:
        if not self.terms:
            raise ZeroSeries("lc of a series without known terms")
        return self.terms[min(self.terms)]

    # -- structural operations ----------------------------------------------
    def promote(self, ramification: int) -> "PuiseuxSeries":
        p = self.ramification
        if ramification == p:
            return self
        if ramification % p:
            raise ValueError(f"cannot promote ramification {p} to {ramification}")
        r = ramification // p
        terms = {m * r: c for m, c in self.terms.items()}
        trunc = tuple(t * r for t in self.trunc)
        return PuiseuxSeries._raw(terms, self.order, ramification, trunc)

    def reduce_ramification(self) -> "PuiseuxSeries":
        """Smallest ramification that represents the same terms and bounds."""
        g = self.ramification
        for m in self.terms:
            g = math.gcd(g, m)
        if g == 1:
            return self
        # bounds must stay exact: floor(t / g) covers the same exponents
        terms = {m // g: c for m, c in self.terms.items()}
        trunc = tuple(t if t == INF else t // g for t in self.trunc)
        return PuiseuxSeries._raw(terms, self.order, self.ramification // g, trunc)

    def with_trunc(self, trunc) -> "PuiseuxSeries":
        """Lower the precision claim (never raises it)."""
        tr = _norm_trunc(trunc, self.order)
        tr = tuple(min(a, b) for a, b in zip(tr, self.trunc))
        return PuiseuxSeries(self.terms, order=self.order, ramification=self.ramification, trunc=tr)

    def graded_part(self, k: int) -> "PuiseuxSeries":
        """The eps^k component as a scalar series embedded at eps^0."""
        if not 0 <= k < self.order:
            raise IndexOutOfRange(f"grade {k} outside 0..{self.order - 1}")
        n = self.order
        terms = {}
        for m, c in self.terms.items():
            if c.comps[k]:
                terms[m] = NilScalar.scalar(c.comps[k], n)
        trunc = (self.trunc[k],) + (INF,) * (n - 1)
        return PuiseuxSeries._raw(terms, n, self.ramification, trunc)

    def semisimple_part(self) -> "PuiseuxSeries":
        return self.graded_part(0)

    def nilpotent_part(self) -> "PuiseuxSeries":
        """self minus its semisimple part; grade 0 is exactly zero."""
        n = self.order
        terms = {}
        for m, c in self.terms.items():
            if any(c.comps[1:]):
                terms[m] = NilScalar._raw(n, (CycRational.zero(c.comps[0].conductor),) + c.comps[1:])
        return PuiseuxSeries._raw(terms, n, self.ramification, (INF,) + self.trunc[1:])

    def embed_grade(self, k: int) -> "PuiseuxSeries":
        """eps^k times a scalar series (grades 1.. of self must vanish)."""
        n = self.order
        if not 0 <= k < n:
            raise IndexOutOfRange(f"grade {k} outside 0..{n - 1}")
        terms = {}
        for m, c in self.terms.items():
            z = CycRational.zero(c.comps[0].conductor)
            comps = [z] * n
            comps[k] = c.comps[0]
            if c.comps[0]:
                terms[m] = NilScalar._raw(n, tuple(comps))
        trunc = [INF] * n
        trunc[k] = self.trunc[0]
        return PuiseuxSeries._raw(terms, n, self.ramification, tuple(trunc))

    # -- arithmetic ---------------------------------------------------------
    def _align(self, other: "PuiseuxSeries"):
        if self.order != other.order:
            raise OrderMismatch(f"orders {self.order} and {other.order} differ")
        if self.ramification == other.ramification:
            return self, other
        p = lcm(self.ramification, other.ramification)
        return self.promote(p), other.promote(p)

    def _lift(self, other):
        if isinstance(other, PuiseuxSeries):
            return other
        if isinstance(other, (NilScalar, CycRational, int)) or hasattr(other, "denominator"):
            return PuiseuxSeries.constant(other, order=self.order, ramification=self.ramification)
        return None

    def __add__(self, other):
        other = self._lift(other)
        if other is None:
            return NotImplemented
        f, g = self._align(other)
        terms = dict(f.terms)
        for m, c in g.terms.items():
            if m in terms:
                s = terms[m] + c
                if s:
                    terms[m] = s
                else:
                    del terms[m]
            else:
                terms[m] = c
        trunc = tuple(min(a, b) for a, b in zip(f.trunc, g.trunc))
        return PuiseuxSeries(terms, order=f.order, ramification=f.ramification, trunc=trunc)

    __radd__ = __add__

    def __neg__(self):
        return PuiseuxSeries._raw({m: -c for m, c in self.terms.items()}, self.order, self.ramification, self.trunc)

    def __sub__(self, other):
        other = self._lift(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c) -> "PuiseuxSeries":
        """Multiply by a constant (scalar or NilScalar)."""
        if isinstance(c, NilScalar):
            return self * PuiseuxSeries.constant(c, order=self.order, ramification=self.ramification)
        if not c:
            return PuiseuxSeries.zero(order=self.order, ramification=self.ramification)
        terms = {m: v * c for m, v in self.terms.items()}
        return PuiseuxSeries._raw(terms, self.order, self.ramification, self.trunc)

    def __mul__(self, other):
        if isinstance(other, PuiseuxSeries):
            return _series_mul(self, other)
        if isinstance(other, (NilScalar, CycRational, int)) or hasattr(other, "denominator"):
            return self.scale(other)
        return NotImplemented

    __rmul__ = __mul__

    def shift(self, exponent) -> "PuiseuxSeries":
        """Exact multiplication by x^exponent."""
        e = Fraction(exponent)
        f = self
        if (e * f.ramification).denominator != 1:
            f = f.promote(lcm(f.ramification, e.denominator))
        d = int(e * f.ramification)
        terms = {m + d: c for m, c in f.terms.items()}
        trunc = tuple(t + d for t in f.trunc)
        return PuiseuxSeries._raw(terms, f.order, f.ramification, trunc)

    def deriv(self) -> "PuiseuxSeries":
        """Term-wise d/dx."""
        p = self.ramification
        terms = {}
        for m, c in self.terms.items():
            if m:
                terms[m - p] = c * mpq(m, p)
        trunc = tuple(t - p for t in self.trunc)
        return PuiseuxSeries._raw(terms, self.order, p, trunc)

    def inverse(self, prec=None) -> "PuiseuxSeries":
        """Multiplicative inverse through the nilpotent geometric series.

        The semisimple part is inverted as a scalar series first, then
        f^-1 = sum_i (-1)^i f0^(-1-i) (f - f0)^i.  ``prec`` (a numerator
        bound for the scalar inverse) is required when f is exact.
        """
        f0 = self.semisimple_part()
        if not f0.terms:
            raise NotInvertible("semisimple part vanishes up to the known precision")
        inv0 = _scalar_inverse(f0, prec)
        nil = self.nilpotent_part()
        if not nil.terms:
            return inv0
        result = inv0
        term = inv0
        for i in range(1, self.order):
            term = term * nil * inv0  # inv0^(1+i) * nil^i
            result = result + (term if i % 2 == 0 else -term)
        return result

    def __pow__(self, k: int):
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            return self.inverse() ** (-k)
        result = PuiseuxSeries.constant(1, order=self.order, ramification=self.ramification)
        base = self
        first = True
        while k:
            if k & 1:
                result = base if first else result * base
                first = False
            k >>= 1
            if k:
                base = base * base
        return result

    def __truediv__(self, other):
        if isinstance(other, PuiseuxSeries):
            return self * other.inverse()
        if isinstance(other, NilScalar):
            return self.scale(other.inverse())
        if isinstance(other, CycRational):
            return self.scale(other.inverse())
        return self.scale(1 / mpq(other))

    # -- comparison -----------------------------------------------------------
    def __eq__(self, other):
        if not isinstance(other, PuiseuxSeries):
            return NotImplemented
        if self.order != other.order:
            return False
        f, g = self._align(other)
        return f.trunc == g.trunc and f.terms.keys() == g.terms.keys() and all(
            f.terms[m] == g.terms[m] for m in f.terms
        )

    __hash__ = None

    def mismatches(self, other: "PuiseuxSeries"):
        """Compare grade by grade up to the common known precision.

        Returns (bounds, diffs): bounds[k] is the numerator bound certified
        for grade k (in the aligned ramification) and diffs lists
        (exponent, grade, lhs, rhs) for every disagreement within bounds.
        """
        f, g = self._align(other)
        bounds = tuple(min(a, b) for a, b in zip(f.trunc, g.trunc))
        diffs = []
        for m in sorted(set(f.terms) | set(g.terms)):
            a = f.terms.get(m)
            b = g.terms.get(m)
            for k in range(f.order):
                if m > bounds[k]:
                    continue
                x = a.comps[k] if a is not None else 0
                y = b.comps[k] if b is not None else 0
                if x != y:
                    diffs.append((Fraction(m, f.ramification), k, x, y))
        return bounds, f.ramification, diffs

    def agrees_with(self, other: "PuiseuxSeries") -> bool:
        return not self.mismatches(other)[2]

    # -- display / JSON -------------------------------------------------------
    def __repr__(self):
        return f"PuiseuxSeries({self})"

    def __str__(self):
        parts = []
        for e, c in self.items():
            xs = "" if e == 0 else ("x" if e == 1 else f"x^({e})")
            cs = str(c)
            if not xs:
                parts.append(cs)
            elif cs == "1":
                parts.append(xs)
            else:
                parts.append(f"({cs})*{xs}")
        body = " + ".join(parts) if parts else "0"
        if self.is_exact():
            return body
        bounds = ", ".join("exact" if t == INF else str(Fraction(t, self.ramification)) for t in self.trunc)
        return f"{body}  [known to x^({bounds})]"

    def to_json(self) -> dict:
        def enc(t):
            return None if t == INF else t

        return {
            "ramification": self.ramification,
            "order": self.order,
            "trunc": enc(self.trunc_min),
            "grade_trunc": [enc(t) for t in self.trunc],
            "terms": [{"exp_num": m, "coeff": self.terms[m].to_json()} for m in sorted(self.terms)],
        }

    @classmethod
    def from_json(cls, obj) -> "PuiseuxSeries":
        def dec(t):
            return INF if t is None else int(t)

        order = int(obj["order"])
        if "grade_trunc" in obj:
            trunc = tuple(dec(t) for t in obj["grade_trunc"])
            if dec(obj.get("trunc")) != min(trunc):
                raise ValueError("trunc must equal min(grade_trunc)")
        else:
            trunc = dec(obj.get("trunc"))
        terms = {}
        for t in obj["terms"]:
            m = int(t["exp_num"])
            if m in terms:
                raise ValueError(f"duplicate exponent numerator {m}")
            terms[m] = NilScalar.from_json(t["coeff"])
        return cls(terms, order=order, ramification=int(obj["ramification"]), trunc=trunc)


# ---------------------------------------------------------------------------
# product


def _product_trunc(f, g):
    n = f.order
    vf = [f.valuation(k) for k in range(n)]
    vg = [g.valuation(k) for k in range(n)]
    out = []
    for k in range(n):
        best = INF
        for i in range(k + 1):
            j = k - i
            best = min(best, f.trunc[i] + vg[j], g.trunc[j] + vf[i])
        out.append(best)
    return tuple(out)


def _flatten(s, lo, length, N, phi):
    n = s.order
    flat = [ZERO] * (length * n * phi)
    for m, c in s.terms.items():
        i = m - lo
        base = i * n * phi
        for k, comp in enumerate(c.comps):
            if comp:
                coeffs = comp.promote(N).coeffs
                for d, v in enumerate(coeffs):
                    flat[base + k * phi + d] = v
    return flat


def _series_mul(a: PuiseuxSeries, b: PuiseuxSeries) -> PuiseuxSeries:
    f, g = a._align(b)
    n, p = f.order, f.ramification
    trunc = _product_trunc(f, g)
    if not f.terms or not g.terms:
        return PuiseuxSeries._raw({}, n, p, trunc)
    lo_f, hi_f = min(f.terms), max(f.terms)
    lo_g, hi_g = min(g.terms), max(g.terms)
    lo = lo_f + lo_g
    top = hi_f + hi_g
    caps = []
    for k in range(n):
        t = trunc[k] if trunc[k] != INF else top
        caps.append(max(0, min(t, top) - lo + 1))
    if max(caps) == 0:
        return PuiseuxSeries._raw({}, n, p, trunc)
    N = lcm(f.conductor, g.conductor)
    phi = totient(N)

    na, nb = hi_f - lo_f + 1, hi_g - lo_g + 1
    flat = kernels.graded_convolve(
        _flatten(f, lo_f, na, N, phi), na, _flatten(g, lo_g, nb, N, phi), nb, n, phi, reduction_rows(N), caps
    )
    terms = {}
    zero = CycRational.zero(N)
    for o in range(max(caps)):
        base = o * n * phi
        comps = []
        nonzero = False
        for k in range(n):
            chunk = tuple(flat[base + k * phi : base + (k + 1) * phi])
            if any(chunk):
                comps.append(CycRational._raw(N, chunk))
                nonzero = True
            else:
                comps.append(zero)
        if nonzero:
            terms[lo + o] = NilScalar._raw(n, tuple(comps))
    return PuiseuxSeries._raw(terms, n, p, trunc)


def _scalar_inverse(f0: PuiseuxSeries, prec=None) -> PuiseuxSeries:
    """Inverse of a scalar (grade-0 only) series with nonzero lead."""
    n, p = f0.order, f0.ramification
    L = min(f0.terms)
    c = f0.terms[L].comps[0]
    cinv = c.inverse()
    t0 = f0.trunc[0]
    if t0 == INF and len(f0.terms) == 1:
        # exact monomial: the inverse is exact too
        return PuiseuxSeries._raw({-L: NilScalar.scalar(cinv, n)}, n, p, (INF,) * n)
    if t0 == INF:
        if prec is None:
            raise ValueError("inverse of an exact series needs an explicit precision")
        rel = prec + L  # inverse known to -L + rel
    else:
        rel = t0 - L
        if prec is not None:
            rel = min(rel, prec + L)
    g = {m - L: f0.terms[m].comps[0] * cinv for m in f0.terms if m - L <= rel}
    u = [CycRational.one(c.conductor)]
    for m in range(1, rel + 1):
        acc = None
        for j in range(1, m + 1):
            gj = g.get(j)
            if gj is not None and u[m - j]:
                t = gj * u[m - j]
                acc = t if acc is None else acc + t
        u.append(-acc if acc is not None else CycRational.zero(c.conductor))
    terms = {m - L: NilScalar.scalar(v * cinv, n) for m, v in enumerate(u) if v}
    trunc = (rel - L,) + (INF,) * (n - 1)
    return PuiseuxSeries._raw(terms, n, p, trunc)


def _scalar_power(f0: PuiseuxSeries, a: mpq, lead_root: CycRational, lead_exp_num: int, prec=None):
    """(f0)^a for a scalar series f0 = c x^L (1 + h), given the lead c^a.

    Uses the power-series recurrence of (1 + h)^a:
    u_k = (1/k) sum_{j=1..k} ((a + 1) j - k) h_j u_{k-j}.
    ``lead_exp_num`` is the numerator of the resulting lead exponent.
    """
    n, p = f0.order, f0.ramification
    L = min(f0.terms)
    c = f0.terms[L].comps[0]
    cinv = c.inverse()
    t0 = f0.trunc[0]
    if t0 == INF and len(f0.terms) == 1:
        return PuiseuxSeries._raw({lead_exp_num: NilScalar.scalar(lead_root, n)}, n, p, (INF,) * n)
    if t0 == INF:
        if prec is None:
            raise ValueError("power of an exact series needs an explicit precision")
        rel = prec - lead_exp_num
    else:
        rel = t0 - L
        if prec is not None:
            rel = min(rel, prec - lead_exp_num)
    g = {m - L: f0.terms[m].comps[0] * cinv for m in f0.terms if 0 < m - L <= rel}
    u = [CycRational.one(c.conductor)]
    for k in range(1, rel + 1):
        acc = None
        for j in range(1, k + 1):
            gj = g.get(j)
            if gj is not None and u[k - j]:
                t = gj * u[k - j] * ((a + 1) * j - k)
                acc = t if acc is None else acc + t
        u.append(acc * mpq(1, k) if acc is not None else CycRational.zero(c.conductor))
    terms = {lead_exp_num + m: NilScalar.scalar(v * lead_root, n) for m, v in enumerate(u) if v}
    trunc = (lead_exp_num + rel,) + (INF,) * (n - 1)
    return PuiseuxSeries._raw(terms, n, p, trunc)


# ---------------------------------------------------------------------------
# module-level operation names


def s_add(f, g):
    return f + g


def s_mul(f, g):
    return f * g


def s_deriv(f):
    return f.deriv()


def s_inv(f, prec=None):
    return f.inverse(prec)


def graded_part(f, k):
    return f.graded_part(k)


def semisimple_part(f):
    return f.semisimple_part()


def ld(f):
    return f.ld()


def lc(f):
    return f.lc()


def pth_root(Q: PuiseuxSeries, pr: int, branch: int = 0, conductor: int | None = None, prec=None) -> PuiseuxSeries:
    """A pr-th root B of Q with B^pr = Q, on ramification Q.ramification * pr.

    The semisimple root has lead exponent ld(Q0)/pr and lead coefficient the
    canonical pr-th root of lc(Q0) times zeta_pr^branch; its tail comes from
    the binomial recurrence.  The nilpotent grades follow

        B^(k) = (1/pr) (B^(0))^(1-pr) (Q^(k) - [eps^k] (B^(<k))^pr),

    where the bracket collects the products of lower grades summing to k.
    ``conductor`` pins the cyclotomic field the root must live in.
    """
    if pr < 1:
        raise ValueError("root order must be positive")
    if not 0 <= branch < pr:
        raise BranchOutOfRange(f"branch {branch} outside 0..{pr - 1}")
    n = Q.order
    P = Q.ramification * pr
    Qp = Q.promote(P)
    Q0 = Qp.semisimple_part()
    if not Q0.terms:
        raise NotInvertible("semisimple part of the radicand vanishes")
    M0 = min(Q0.terms)
    c = Q0.terms[M0].comps[0]
    root = canonical_root(c, pr, conductor)
    if branch:
        root = root * root_of_unity(pr, branch, conductor)
    B0 = _scalar_power(Q0, mpq(1, pr), root, M0 // pr, prec)
    if pr == 1:
        return Qp
    B = B0
    if n == 1:
        return B
    inv_pow = B0.inverse() ** (pr - 1)
    for k in range(1, n):
        Qk = Qp.graded_part(k)
        lower = (B ** pr).graded_part(k)
        Bk = (Qk - lower) * inv_pow * mpq(1, pr)
        B = B + Bk.embed_grade(k)
    return B
