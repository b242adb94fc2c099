"""Dual reals, dual complex numbers, dual quaternions.

Every dual scalar is a frozen pair ``(st, in_)`` meaning ``st + in_ ε`` with
``ε² = 0``.  Components may be floats or exact rationals (``Fraction``); the
arithmetic only uses ``+``, ``-``, ``*`` and division by the standard part,
so exact inputs stay exact.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from numbers import Number

from .config import get_tolerances
from .errors import DomainError, NotAppreciable


@dataclass(frozen=True)
class Quaternion:
    """q = w + x i + y j + z k."""

    w: float = 0.0
    x: float = 0.0
    y: float = 0.0
    z: float = 0.0

    @classmethod
    def coerce(cls, value) -> Quaternion:
        if isinstance(value, Quaternion):
            return value
        if isinstance(value, complex):
            return cls(value.real, value.imag, 0.0, 0.0)
        return cls(value, 0, 0, 0)

    def __add__(self, other):
        o = Quaternion.coerce(other)
        return Quaternion(self.w + o.w, self.x + o.x, self.y + o.y, self.z + o.z)

    __radd__ = __add__

    def __sub__(self, other):
        o = Quaternion.coerce(other)
        return Quaternion(self.w - o.w, self.x - o.x, self.y - o.y, self.z - o.z)

    def __rsub__(self, other):
        return Quaternion.coerce(other) - self

    def __neg__(self):
        return Quaternion(-self.w, -self.x, -self.y, -self.z)

    def __mul__(self, other):
        if not isinstance(other, (Quaternion, complex)) and isinstance(other, Number):
            return Quaternion(self.w * other, self.x * other, self.y * other, self.z * other)
        a, b = self, Quaternion.coerce(other)
        return Quaternion(
            a.w * b.w - a.x * b.x - a.y * b.y - a.z * b.z,
            a.w * b.x + a.x * b.w + a.y * b.z - a.z * b.y,
            a.w * b.y - a.x * b.z + a.y * b.w + a.z * b.x,
            a.w * b.z + a.x * b.y - a.y * b.x + a.z * b.w,
        )

    def __rmul__(self, other):
        return Quaternion.coerce(other) * self

    def conjugate(self) -> Quaternion:
        return Quaternion(self.w, -self.x, -self.y, -self.z)

    def norm2(self):
        return self.w * self.w + self.x * self.x + self.y * self.y + self.z * self.z

    def __abs__(self) -> float:
        return math.sqrt(self.norm2())

    def inverse(self) -> Quaternion:
        n2 = self.norm2()
        if n2 == 0:
            raise ZeroDivisionError("quaternion inverse of zero")
        c = self.conjugate()
        return Quaternion(c.w / n2, c.x / n2, c.y / n2, c.z / n2)

    def __iter__(self):
        return iter((self.w, self.x, self.y, self.z))

    def __repr__(self) -> str:
        return f"Quaternion({self.w!r}, {self.x!r}, {self.y!r}, {self.z!r})"


I = Quaternion(0, 1, 0, 0)
J = Quaternion(0, 0, 1, 0)
K = Quaternion(0, 0, 0, 1)


def _inv(x):
    if isinstance(x, Quaternion):
        return x.inverse()
    return 1 / x


def _conj(x):
    return x.conjugate()


@dataclass(frozen=True)
class _Dual:
    st: object
    in_: object

    _rank = 0

    @classmethod
    def one(cls):
        return cls(cls._lift(1), cls._lift(0))

    @classmethod
    def zero(cls):
        return cls(cls._lift(0), cls._lift(0))

    @staticmethod
    def _lift(value):
        return value

    def __add__(self, other):
        a, b = _promote(self, other)
        return type(a)(a.st + b.st, a.in_ + b.in_)

    def __radd__(self, other):
        b, a = _promote(self, other)
        return type(a)(a.st + b.st, a.in_ + b.in_)

    def __sub__(self, other):
        a, b = _promote(self, other)
        return type(a)(a.st - b.st, a.in_ - b.in_)

    def __rsub__(self, other):
        b, a = _promote(self, other)
        return type(a)(a.st - b.st, a.in_ - b.in_)

    def __neg__(self):
        return type(self)(-self.st, -self.in_)

    def __mul__(self, other):
        return dual_mul(*_promote(self, other))

    def __rmul__(self, other):
        b, a = _promote(self, other)
        return dual_mul(a, b)

    def __truediv__(self, other):
        a, b = _promote(self, other)
        return dual_mul(a, dual_inv(b))

    def __pow__(self, k: int):
        return dual_pow(self, k)

    def conjugate(self):
        return type(self)(_conj(self.st), _conj(self.in_))

    def is_appreciable(self) -> bool:
        return appreciable(self)


@dataclass(frozen=True, order=True)
class DualReal(_Dual):
    """a = st + in_ ε with real parts.  ``<`` is the lexicographic total order."""

    st: float = 0.0
    in_: float = 0.0

    _rank = 0

    def __float__(self):
        return float(self.st)


@dataclass(frozen=True, eq=True)
class DualComplex(_Dual):
    st: complex = 0j
    in_: complex = 0j

    _rank = 1

    @staticmethod
    def _lift(value):
        return complex(value) if isinstance(value, float) else value

    @property
    def real(self) -> DualReal:
        return DualReal(_real(self.st), _real(self.in_))

    @property
    def imag(self) -> DualReal:
        return DualReal(_imag(self.st), _imag(self.in_))


@dataclass(frozen=True, eq=True)
class DualQuaternion(_Dual):
    st: Quaternion = Quaternion()
    in_: Quaternion = Quaternion()

    _rank = 2

    @staticmethod
    def _lift(value):
        return Quaternion.coerce(value)


_BY_RANK = {0: DualReal, 1: DualComplex, 2: DualQuaternion}


def _real(x):
    return x.real if isinstance(x, complex) else x


def _imag(x):
    return x.imag if isinstance(x, complex) else 0 * x


def as_dual(value, kind=None):
    """Coerce numbers and dual scalars to a dual scalar of at least ``kind``."""
    if isinstance(value, _Dual):
        d = value
    elif isinstance(value, Quaternion):
        d = DualQuaternion(value, Quaternion())
    elif isinstance(value, complex):
        d = DualComplex(value, 0j)
    elif isinstance(value, Number):
        d = DualReal(value, 0 * value)
    else:
        raise TypeError(f"cannot interpret {value!r} as a dual scalar")
    if kind is not None and kind._rank > d._rank:
        d = kind(kind._lift(d.st), kind._lift(d.in_))
    return d


def _promote(a, b):
    a = as_dual(a)
    b = as_dual(b)
    if a._rank == b._rank:
        return a, b
    kind = _BY_RANK[max(a._rank, b._rank)]
    return as_dual(a, kind), as_dual(b, kind)


def appreciable(a) -> bool:
    """True when the standard part exceeds ``tau_zero`` in magnitude."""
    return abs(as_dual(a).st) > get_tolerances().tau_zero


def dual_mul(a, b):
    """(a_st + a_in ε)(b_st + b_in ε) keeping factor order."""
    a, b = _promote(a, b)
    return type(a)(a.st * b.st, a.st * b.in_ + a.in_ * b.st)


def dual_inv(a):
    a = as_dual(a)
    if not appreciable(a):
        raise NotAppreciable(f"{a!r} is infinitesimal and has no inverse")
    s = _inv(a.st)
    return type(a)(s, -(s * a.in_ * s))


def dual_pow(a, k: int):
    a = as_dual(a)
    if k < 0:
        return dual_pow(dual_inv(a), -k)
    if k == 0:
        return type(a).one()
    if isinstance(a, DualQuaternion):
        out = a
        for _ in range(k - 1):
            out = dual_mul(out, a)
        return out
    return type(a)(a.st**k, k * a.st ** (k - 1) * a.in_)


def total_cmp(a: DualReal, b: DualReal) -> int:
    """-1, 0 or 1: lexicographic order on (st, in_) with exact comparisons."""
    ka, kb = (a.st, a.in_), (b.st, b.in_)
    return (ka > kb) - (ka < kb)


def _sgn(u) -> int:
    return (u > 0) - (u < 0)


def dual_abs(a: DualReal) -> DualReal:
    if appreciable(a):
        return DualReal(abs(a.st), _sgn(a.st) * a.in_)
    return DualReal(0 * abs(a.st), abs(a.in_))


def magnitude(q) -> DualReal:
    """Dual magnitude of a dual real, complex or quaternion scalar."""
    q = as_dual(q)
    if isinstance(q, DualReal):
        return dual_abs(q)
    if appreciable(q):
        n = abs(q.st)
        cross = q.st * _conj(q.in_) + q.in_ * _conj(q.st)
        cross = cross.w if isinstance(cross, Quaternion) else _real(cross)
        return DualReal(n, cross / (2 * n))
    return DualReal(0.0, abs(q.in_))


def abs2(q) -> DualReal:
    """q q̄ as a dual real; smooth in q (no appreciability branch)."""
    q = as_dual(q)
    if isinstance(q, DualQuaternion):
        return DualReal(q.st.norm2(), 2 * (q.st * q.in_.conjugate()).w)
    st = q.st
    return DualReal(_real(st * _conj(st)), 2 * _real(st * _conj(q.in_)))


def sqrt_dual(a: DualReal) -> DualReal:
    a = as_dual(a)
    if not isinstance(a, DualReal) or not (a.st > 0 and appreciable(a)):
        raise DomainError(f"no dual square root for {a!r}")
    r = math.sqrt(a.st)
    return DualReal(r, a.in_ / (2 * r))
