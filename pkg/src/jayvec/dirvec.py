"""Bivectors a + ib and jay-vectors a + jb over real 3-space.

A bivector carries an ellipse with conjugate semi-diameters {a, b}; a
jay-vector carries a hyperbola and its conjugate with the same pair.
Multiplying by exp(i*phi) or exp(j*phi) sweeps through all other
conjugate pairs of the same curves, which is what ``rotate_csd`` and
``boost_csd`` compute directly on the real parts.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DegeneratePairError, IsotropicError
from .hypercomplex import JayScalar, jay_exp

# |2 a.b| / (a^2 + b^2) above this has no finite hyperbolic angle.
ISOTROPY_THRESHOLD = 1.0 - 1e-9
PARALLEL_TOL = 1e-12


def as_vec3(v) -> np.ndarray:
    """Coerce a 2- or 3-sequence to a float 3-vector (2-vectors get z = 0)."""
    v = np.asarray(v, dtype=float)
    if v.shape == (2,):
        v = np.append(v, 0.0)
    if v.shape != (3,):
        raise ValueError(f"expected a 2- or 3-vector, got shape {v.shape}")
    if not np.all(np.isfinite(v)):
        raise ValueError("vector components must be finite")
    return v


def _jay(x) -> JayScalar:
    return x if isinstance(x, JayScalar) else JayScalar(float(x), 0.0)


class Bivector:
    """``re + i*im`` with real 3-vector parts."""

    __slots__ = ("re", "im")
    __hash__ = None

    def __init__(self, re, im=(0.0, 0.0, 0.0)):
        self.re = as_vec3(re)
        self.im = as_vec3(im)

    @classmethod
    def from_complex(cls, z) -> Bivector:
        z = np.asarray(z, dtype=complex)
        return cls(z.real, z.imag)

    def to_complex(self) -> np.ndarray:
        return self.re + 1j * self.im

    def conj(self) -> Bivector:
        return Bivector(self.re, -self.im)

    def __eq__(self, other):
        if not isinstance(other, Bivector):
            return NotImplemented
        return bool(np.array_equal(self.re, other.re) and np.array_equal(self.im, other.im))

    def __add__(self, other):
        return Bivector(self.re + other.re, self.im + other.im)

    def __sub__(self, other):
        return Bivector(self.re - other.re, self.im - other.im)

    def __neg__(self):
        return Bivector(-self.re, -self.im)

    def __mul__(self, s):
        s = complex(s)
        return Bivector(s.real * self.re - s.imag * self.im, s.real * self.im + s.imag * self.re)

    __rmul__ = __mul__

    def dot(self, other: Bivector) -> complex:
        return complex(self.re @ other.re - self.im @ other.im,
                       self.re @ other.im + self.im @ other.re)

    def cross(self, other: Bivector) -> Bivector:
        return Bivector(np.cross(self.re, other.re) - np.cross(self.im, other.im),
                        np.cross(self.re, other.im) + np.cross(self.im, other.re))

    def to_dict(self) -> dict:
        return {"re": self.re.tolist(), "im": self.im.tolist()}

    @classmethod
    def from_dict(cls, d) -> Bivector:
        return cls(d["re"], d["im"])

    def __repr__(self):
        return f"Bivector(re={self.re.tolist()}, im={self.im.tolist()})"


class JayVector:
    """``re + j*jay`` with real 3-vector parts and j*j = +1."""

    __slots__ = ("re", "jay")
    __hash__ = None

    def __init__(self, re, jay=(0.0, 0.0, 0.0)):
        self.re = as_vec3(re)
        self.jay = as_vec3(jay)

    def conj(self) -> JayVector:
        return JayVector(self.re, -self.jay)

    def __eq__(self, other):
        if not isinstance(other, JayVector):
            return NotImplemented
        return bool(np.array_equal(self.re, other.re) and np.array_equal(self.jay, other.jay))

    def isclose(self, other: JayVector, rtol=1e-10, atol=1e-12) -> bool:
        return bool(np.allclose(self.re, other.re, rtol=rtol, atol=atol)
                    and np.allclose(self.jay, other.jay, rtol=rtol, atol=atol))

    def __add__(self, other):
        return JayVector(self.re + other.re, self.jay + other.jay)

    def __sub__(self, other):
        return JayVector(self.re - other.re, self.jay - other.jay)

    def __neg__(self):
        return JayVector(-self.re, -self.jay)

    def __mul__(self, s):
        s = _jay(s)
        return JayVector(s.re * self.re + s.jay * self.jay, s.re * self.jay + s.jay * self.re)

    __rmul__ = __mul__

    def dot(self, other: JayVector) -> JayScalar:
        return JayScalar(float(self.re @ other.re + self.jay @ other.jay),
                         float(self.re @ other.jay + self.jay @ other.re))

    def cross(self, other: JayVector) -> JayVector:
        return JayVector(np.cross(self.re, other.re) + np.cross(self.jay, other.jay),
                         np.cross(self.re, other.jay) + np.cross(self.jay, other.re))

    def to_dict(self) -> dict:
        return {"re": self.re.tolist(), "jay": self.jay.tolist()}

    @classmethod
    def from_dict(cls, d) -> JayVector:
        return cls(d["re"], d["jay"])

    def __repr__(self):
        return f"JayVector(re={self.re.tolist()}, jay={self.jay.tolist()})"


def dot(A, B):
    """Bilinear scalar product (no conjugation).

    Jay-vectors give a ``JayScalar``; bivectors give a ``complex``.
    """
    return A.dot(B)


def cross(A, B):
    return A.cross(B)


def is_parallel(a, b, tol: float = PARALLEL_TOL) -> bool:
    a, b = as_vec3(a), as_vec3(b)
    scale = np.linalg.norm(a) * np.linalg.norm(b)
    return scale == 0.0 or np.linalg.norm(np.cross(a, b)) <= tol * scale


def _check_pair(a, b):
    a, b = as_vec3(a), as_vec3(b)
    if is_parallel(a, b):
        raise DegeneratePairError(f"semi-diameters {a.tolist()} and {b.tolist()} are parallel or zero")
    return a, b


def rotate_csd(a, b, phi: float):
    """Conjugate pair (c, d) of the same ellipse, from c + id = exp(i*phi)(a + ib)."""
    a, b = _check_pair(a, b)
    c, s = math.cos(phi), math.sin(phi)
    return a * c - b * s, a * s + b * c


def boost_csd(a, b, phi: float):
    """Conjugate pair (c, d) of the same hyperbolas, from c + jd = exp(j*phi)(a + jb)."""
    a, b = _check_pair(a, b)
    e = jay_exp(phi)
    return a * e.re + b * e.jay, a * e.jay + b * e.re


@dataclass(frozen=True, eq=False)
class PrincipalForm:
    """``A = exp(j*phi)(p + jq)`` with p.q = 0."""

    phi: float
    p: np.ndarray
    q: np.ndarray

    def reconstruct(self) -> JayVector:
        return jay_exp(self.phi) * JayVector(self.p, self.q)


def _tanh2phi(A: JayVector) -> float:
    s = float(A.re @ A.re + A.jay @ A.jay)
    if s == 0.0:
        raise IsotropicError("zero jay-vector has no principal axes")
    return 2.0 * float(A.re @ A.jay) / s


def principal_axes(A: JayVector) -> PrincipalForm:
    """Split ``A`` into a hyperbolic angle and orthogonal principal semi-axes.

    phi comes from tanh(2 phi) = 2 a.b / (a^2 + b^2) on the principal atanh
    branch; then p + jq = exp(-j phi) A.

    Raises:
        IsotropicError: ``A.A`` is a zero divisor, i.e. a = +-b, so the
            ratio above reaches 1 and no finite phi exists.
    """
    ratio = _tanh2phi(A)
    if abs(ratio) > ISOTROPY_THRESHOLD:
        raise IsotropicError(
            f"A.A is a zero divisor (|tanh 2phi| = {abs(ratio):.17g}); "
            "no finite principal angle exists (see is_isotropic for the A.conj(A) test)")
    phi = 0.5 * math.atanh(ratio)
    pq = jay_exp(-phi) * A
    return PrincipalForm(phi, pq.re, pq.jay)


def is_isotropic(A: JayVector, tol: float = 1e-12) -> bool:
    """True iff A.conj(A) vanishes, i.e. the hyperbolas of ``A`` are rectangular.

    The jay part of A.conj(A) is identically zero; the real part is a^2 - b^2.
    """
    w = A.dot(A.conj())
    return abs(w.re) < tol and abs(w.jay) < tol


def orthogonal_companion(A: JayVector, beta=1.0, gamma=0.0) -> JayVector:
    """A jay-vector ``B`` with ``A.B = 0``.

    B = beta (q - j (q^2/p^2) p) + gamma (p x q), with p, q the principal
    semi-axes of ``A``.  ``gamma = 0`` keeps ``B`` in the plane of ``A``.
    ``beta`` and ``gamma`` may be reals or jay-scalars.
    """
    form = principal_axes(A)
    p, q = form.p, form.q
    p2 = float(p @ p)
    if p2 <= PARALLEL_TOL * float(A.re @ A.re + A.jay @ A.jay):
        raise DegeneratePairError("principal semi-axis p vanishes (A has parallel parts)")
    coplanar = JayVector(q, -(float(q @ q) / p2) * p)
    normal = JayVector(np.cross(p, q))
    return _jay(beta) * coplanar + _jay(gamma) * normal
