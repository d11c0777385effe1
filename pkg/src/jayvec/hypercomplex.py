"""Split-complex ("jay") scalars: a + jb with j*j = +1 and j not real.

The ring has zero divisors, e.g. (1 + j)(1 - j) = 0, so no general
division is offered.  ``conj`` and ``modulus_squared`` are the building
blocks callers need for the hyperbolic invariants.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

RTOL = 1e-12
ATOL = 1e-14


@dataclass(frozen=True)
class JayScalar:
    """Split-complex number ``re + j*jay``.

    Equality is componentwise.  Real numbers mix in on either side of
    ``+``, ``-`` and ``*``.
    """

    re: float = 0.0
    jay: float = 0.0

    def __add__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        return JayScalar(self.re + other.re, self.jay + other.jay)

    __radd__ = __add__

    def __sub__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        return JayScalar(self.re - other.re, self.jay - other.jay)

    def __rsub__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        return other - self

    def __neg__(self):
        return JayScalar(-self.re, -self.jay)

    def __mul__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        return jay_mul(self, other)

    __rmul__ = __mul__

    def conj(self) -> JayScalar:
        return jay_conj(self)

    def modulus_squared(self) -> float:
        """``x * conj(x)``, which is real: re**2 - jay**2 (may be negative)."""
        return self.re * self.re - self.jay * self.jay

    def is_zero_divisor(self, atol: float = ATOL) -> bool:
        """True when the value lies on one of the null lines re = +-jay."""
        return abs(self.modulus_squared()) <= atol * max(1.0, self.re * self.re + self.jay * self.jay)

    def isclose(self, other, rtol: float = RTOL, atol: float = ATOL) -> bool:
        other = _coerce(other)
        return (math.isclose(self.re, other.re, rel_tol=rtol, abs_tol=atol)
                and math.isclose(self.jay, other.jay, rel_tol=rtol, abs_tol=atol))

    def to_dict(self) -> dict:
        return {"re": self.re, "jay": self.jay}

    @classmethod
    def from_dict(cls, d) -> JayScalar:
        return cls(float(d["re"]), float(d["jay"]))

    def __repr__(self):
        sign = "-" if self.jay < 0 or (self.jay == 0 and math.copysign(1.0, self.jay) < 0) else "+"
        return f"({self.re!r} {sign} j{abs(self.jay)!r})"


J = JayScalar(0.0, 1.0)


def _coerce(x):
    if isinstance(x, JayScalar):
        return x
    if isinstance(x, (int, float)) and not isinstance(x, bool):
        return JayScalar(float(x), 0.0)
    try:
        return JayScalar(float(x), 0.0)
    except (TypeError, ValueError):
        return NotImplemented


def jay_mul(x: JayScalar, y: JayScalar) -> JayScalar:
    return JayScalar(x.re * y.re + x.jay * y.jay, x.re * y.jay + x.jay * y.re)


def jay_conj(x: JayScalar) -> JayScalar:
    return JayScalar(x.re, -x.jay)


def jay_exp(phi: float) -> JayScalar:
    """Return ``exp(j*phi) = cosh(phi) + j sinh(phi)``.

    Raises:
        ValueError: ``phi`` is not finite.
        OverflowError: cosh/sinh of ``phi`` exceeds the float range.
    """
    phi = float(phi)
    if not math.isfinite(phi):
        raise ValueError(f"hyperbolic angle must be finite, got {phi!r}")
    try:
        return JayScalar(math.cosh(phi), math.sinh(phi))
    except OverflowError:
        raise OverflowError(f"exp(j*{phi!r}) is outside the floating-point range") from None
