"""The local coefficient algebra K[eps]/(eps^n).

A NilScalar c_0 + c_1 eps + ... + c_{n-1} eps^{n-1} stands for the operator
c_0 E_n + c_1 J_n + ... + c_{n-1} J_n^{n-1} on an n-dimensional module, where
J_n is the nilpotent Jordan block.  ``to_matrix`` makes that explicit.
"""

from __future__ import annotations

from .errors import NotInvertible, OrderMismatch
from .scalars import CycRational, lcm


def _cyc(x) -> CycRational:
    return x if isinstance(x, CycRational) else CycRational.rational(x)


class NilScalar:
    """Immutable element of K[eps]/(eps^order) with cyclotomic components."""

    __slots__ = ("order", "comps")

    def __init__(self, order: int, comps):
        comps = tuple(_cyc(c) for c in comps)
        if order < 1:
            raise ValueError("order must be positive")
        if len(comps) > order:
            if any(c for c in comps[order:]):
                raise ValueError("components beyond eps^(order-1) must vanish")
            comps = comps[:order]
        if len(comps) < order:
            z = CycRational.zero(comps[0].conductor if comps else 1)
            comps = comps + (z,) * (order - len(comps))
        object.__setattr__(self, "order", order)
        object.__setattr__(self, "comps", comps)

    def __setattr__(self, name, value):
        raise AttributeError("NilScalar is immutable")

    @classmethod
    def _raw(cls, order: int, comps: tuple) -> "NilScalar":
        obj = object.__new__(cls)
        object.__setattr__(obj, "order", order)
        object.__setattr__(obj, "comps", comps)
        return obj

    @classmethod
    def scalar(cls, c, order: int) -> "NilScalar":
        c = _cyc(c)
        return cls._raw(order, (c,) + (CycRational.zero(c.conductor),) * (order - 1))

    @classmethod
    def eps(cls, order: int, power: int = 1) -> "NilScalar":
        comps = [0] * order
        if power < order:
            comps[power] = 1
        return cls(order, comps)

    @property
    def conductor(self) -> int:
        N = 1
        for c in self.comps:
            N = lcm(N, c.conductor)
        return N

    @property
    def semisimple(self) -> CycRational:
        """The eps^0 component (projection onto C*id)."""
        return self.comps[0]

    def is_zero(self) -> bool:
        return not any(self.comps)

    def __bool__(self) -> bool:
        return any(self.comps)

    def is_invertible(self) -> bool:
        return bool(self.comps[0])

    def _check(self, other: "NilScalar"):
        if self.order != other.order:
            raise OrderMismatch(f"orders {self.order} and {other.order} differ")

    def _lift(self, other):
        if isinstance(other, NilScalar):
            self._check(other)
            return other
        if isinstance(other, CycRational) or isinstance(other, int) or hasattr(other, "denominator"):
            return NilScalar.scalar(other, self.order)
        return None

    def __add__(self, other):
        other = self._lift(other)
        if other is None:
            return NotImplemented
        return NilScalar._raw(self.order, tuple(a + b for a, b in zip(self.comps, other.comps)))

    __radd__ = __add__

    def __neg__(self):
        return NilScalar._raw(self.order, tuple(-a for a in self.comps))

    def __sub__(self, other):
        other = self._lift(other)
        if other is None:
            return NotImplemented
        return NilScalar._raw(self.order, tuple(a - b for a, b in zip(self.comps, other.comps)))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, NilScalar):
            if isinstance(other, CycRational) or isinstance(other, int) or hasattr(other, "denominator"):
                return NilScalar._raw(self.order, tuple(a * other for a in self.comps))
            return NotImplemented
        self._check(other)
        n = self.order
        a, b = self.comps, other.comps
        out = []
        for k in range(n):
            acc = None
            for i in range(k + 1):
                if a[i] and b[k - i]:
                    t = a[i] * b[k - i]
                    acc = t if acc is None else acc + t
            out.append(acc if acc is not None else CycRational.zero(a[0].conductor))
        return NilScalar._raw(n, tuple(out))

    __rmul__ = __mul__

    def inverse(self) -> "NilScalar":
        """Inverse via the finite geometric series in the nilpotent part."""
        c0 = self.comps[0]
        if not c0:
            raise NotInvertible("semisimple part is zero")
        inv0 = c0.inverse()
        # (c0 (1 + u))^{-1} = c0^{-1} sum_i (-u)^i, u nilpotent
        u = self * inv0 - 1
        term = NilScalar.scalar(1, self.order)
        total = term
        for _ in range(1, self.order):
            term = term * (-u)
            total = total + term
        return total * inv0

    def __truediv__(self, other):
        if isinstance(other, NilScalar):
            return self * other.inverse()
        return self * (1 / _cyc(other))

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        result = NilScalar.scalar(1, self.order)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, NilScalar):
            return self.order == other.order and self.comps == other.comps
        lifted = self._lift(other)
        if lifted is None:
            return NotImplemented
        return self.comps == lifted.comps

    __hash__ = None

    def promote(self, conductor: int) -> "NilScalar":
        return NilScalar._raw(self.order, tuple(c.promote(conductor) for c in self.comps))

    def to_matrix(self) -> list[list[CycRational]]:
        """sum_k c_k J_n^k as an upper-triangular Toeplitz matrix."""
        n = self.order
        zero = CycRational.zero(self.conductor)
        return [[self.comps[j - i] if j >= i else zero for j in range(n)] for i in range(n)]

    def __repr__(self):
        return f"NilScalar({self.order}, [{', '.join(str(c) for c in self.comps)}])"

    def __str__(self):
        parts = []
        for k, c in enumerate(self.comps):
            if not c:
                continue
            e = "" if k == 0 else ("eps" if k == 1 else f"eps^{k}")
            if not e:
                parts.append(str(c))
            elif c == 1:
                parts.append(e)
            else:
                parts.append(f"({c})*{e}")
        return " + ".join(parts) if parts else "0"

    def to_json(self) -> dict:
        return {"order": self.order, "comps": [c.to_json() for c in self.comps]}

    @classmethod
    def from_json(cls, obj) -> "NilScalar":
        return cls(int(obj["order"]), [CycRational.from_json(c) for c in obj["comps"]])


def nil_mul(a: NilScalar, b: NilScalar) -> NilScalar:
    return a * b


def nil_inv(a: NilScalar) -> NilScalar:
    return a.inverse()


def to_matrix(a: NilScalar) -> list[list[CycRational]]:
    return a.to_matrix()


def matmul(A, B):
    """Plain product of square matrices of scalars (used by the verifier)."""
    n = len(A)
    out = []
    for i in range(n):
        row = []
        for j in range(n):
            acc = A[i][0] * B[0][j]
            for k in range(1, n):
                acc = acc + A[i][k] * B[k][j]
            row.append(acc)
        out.append(row)
    return out
