"""Quaternion scalars and the scalar-field abstraction.

A quaternion is written q = a0 + a1*i + a2*j + a3*k with real components
and imaginary units obeying i**2 = j**2 = k**2 = i*j*k = -1.  The
multiplication is associative but not commutative, so code built on top
of this module must never rely on q*p == p*q.

Every quaternion splits uniquely into a pair of complex numbers,
q = x + y*j with x = a0 + a1*i and y = a2 + a3*i.  That representation
is what the matrix layer (:mod:`qpcp.linalg`) stores internally, and
what makes the complex numbers a genuine subset of the quaternions.
"""

from __future__ import annotations

import math
import operator
from dataclasses import dataclass, field
from typing import Any, Callable

__all__ = [
    "Quaternion",
    "ScalarField",
    "REAL_FIELD",
    "COMPLEX_FIELD",
    "QUATERNION_FIELD",
]


@dataclass(frozen=True)
class Quaternion:
    """A quaternion a0 + a1*i + a2*j + a3*k stored as four floats."""

    a0: float = 0.0
    a1: float = 0.0
    a2: float = 0.0
    a3: float = 0.0

    @classmethod
    def from_real(cls, r: float) -> "Quaternion":
        return cls(float(r), 0.0, 0.0, 0.0)

    @classmethod
    def from_complex_pair(cls, x: complex, y: complex) -> "Quaternion":
        """Build q = x + y*j from the complex pair (x, y)."""
        x = complex(x)
        y = complex(y)
        return cls(x.real, x.imag, y.real, y.imag)

    def to_complex_pair(self) -> tuple[complex, complex]:
        """Split q into (x, y) with q = x + y*j.

        This is a pure relabelling of the four components; no arithmetic
        is performed, so round-tripping is bit-exact.
        """
        return complex(self.a0, self.a1), complex(self.a2, self.a3)

    def conj(self) -> "Quaternion":
        """Quaternion conjugate a0 - a1*i - a2*j - a3*k."""
        return Quaternion(self.a0, -self.a1, -self.a2, -self.a3)

    def __abs__(self) -> float:
        # hypot scales internally, so components near the float max do
        # not overflow when squared.
        return math.hypot(self.a0, self.a1, self.a2, self.a3)

    def __add__(self, other: "Quaternion | float") -> "Quaternion":
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return Quaternion(self.a0 + other.a0, self.a1 + other.a1,
                          self.a2 + other.a2, self.a3 + other.a3)

    __radd__ = __add__

    def __sub__(self, other: "Quaternion | float") -> "Quaternion":
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other: "Quaternion | float") -> "Quaternion":
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return other + (-self)

    def __neg__(self) -> "Quaternion":
        return Quaternion(-self.a0, -self.a1, -self.a2, -self.a3)

    def __mul__(self, other: "Quaternion | float") -> "Quaternion":
        """Hamilton product; non-commutative for genuinely quaternionic factors."""
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        p, q = self, other
        return Quaternion(
            p.a0 * q.a0 - p.a1 * q.a1 - p.a2 * q.a2 - p.a3 * q.a3,
            p.a0 * q.a1 + p.a1 * q.a0 + p.a2 * q.a3 - p.a3 * q.a2,
            p.a0 * q.a2 - p.a1 * q.a3 + p.a2 * q.a0 + p.a3 * q.a1,
            p.a0 * q.a3 + p.a1 * q.a2 - p.a2 * q.a1 + p.a3 * q.a0,
        )

    def __rmul__(self, other: float) -> "Quaternion":
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return other * self

    def is_close(self, other: "Quaternion", tol: float = 1e-12) -> bool:
        return abs(self - other) <= tol * max(1.0, abs(self), abs(other))

    def __repr__(self) -> str:
        return (f"Quaternion({self.a0:g}, {self.a1:g}, "
                f"{self.a2:g}, {self.a3:g})")


def _coerce(value: Any) -> Quaternion:
    if isinstance(value, Quaternion):
        return value
    if isinstance(value, (int, float)):
        return Quaternion.from_real(value)
    return NotImplemented


@dataclass(frozen=True)
class ScalarField:
    """Uniform scalar interface over the reals, complexes and quaternions.

    Downstream modules are written once against this interface (plus the
    matrix types), so the same solver runs over all three fields.  The
    reals and complexes commute; the quaternions do not, which is why
    ``conj(p*q) == conj(q)*conj(p)`` is stated with the factors reversed.
    """

    name: str
    is_commutative: bool
    zero: Any
    one: Any
    from_real: Callable[[float], Any]
    conj: Callable[[Any], Any]
    magnitude: Callable[[Any], float]
    add: Callable[[Any, Any], Any] = field(default=operator.add)
    sub: Callable[[Any, Any], Any] = field(default=operator.sub)
    mul: Callable[[Any, Any], Any] = field(default=operator.mul)

    def __repr__(self) -> str:
        return f"ScalarField({self.name})"


REAL_FIELD = ScalarField(
    name="real",
    is_commutative=True,
    zero=0.0,
    one=1.0,
    from_real=float,
    conj=lambda r: r,
    magnitude=abs,
)

COMPLEX_FIELD = ScalarField(
    name="complex",
    is_commutative=True,
    zero=0j,
    one=1 + 0j,
    from_real=complex,
    conj=lambda z: complex(z).conjugate(),
    magnitude=abs,
)

QUATERNION_FIELD = ScalarField(
    name="quaternion",
    is_commutative=False,
    zero=Quaternion(),
    one=Quaternion(1.0),
    from_real=Quaternion.from_real,
    conj=Quaternion.conj,
    magnitude=abs,
)
