"""Central conics generated by a pair of conjugate semi-diameters.

Curves live in 3-space on an explicit orthonormal plane frame; the 2D
coefficient work happens in that frame's coordinates (x along the first
frame vector, y along the second).
"""

from __future__ import annotations

import csv
import enum
import math
import sys
from dataclasses import dataclass

import numpy as np

from .dirvec import JayVector, as_vec3, is_parallel, principal_axes
from .errors import DegeneratePairError, IsotropicError

_X = np.array([1.0, 0.0, 0.0])
_Y = np.array([0.0, 1.0, 0.0])


class ConicKind(enum.Enum):
    ELLIPSE = "ellipse"
    HYPERBOLA_H = "hyperbola_h"
    HYPERBOLA_H_PRIME = "hyperbola_h_prime"


class Branch(enum.IntEnum):
    PLUS = 1
    MINUS = -1


@dataclass(frozen=True, eq=False)
class CsdPair:
    """Conjugate semi-diameters ``a``, ``b`` from a common centre."""

    a: np.ndarray
    b: np.ndarray

    def __post_init__(self):
        a, b = as_vec3(self.a), as_vec3(self.b)
        if is_parallel(a, b):
            raise DegeneratePairError(f"semi-diameters {a.tolist()} and {b.tolist()} are parallel or zero")
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)

    def jay(self) -> JayVector:
        return JayVector(self.a, self.b)


def plane_frame(pair: CsdPair):
    """Default orthonormal frame of the pair's plane.

    Pairs lying in z = 0 use (x, y) so coefficients come out in world
    coordinates; otherwise Gram-Schmidt starting from ``a``.
    """
    if pair.a[2] == 0.0 and pair.b[2] == 0.0:
        return _X.copy(), _Y.copy()
    e1 = pair.a / np.linalg.norm(pair.a)
    w = pair.b - (pair.b @ e1) * e1
    return e1, w / np.linalg.norm(w)


def _check_frame(pair, frame):
    e1, e2 = (as_vec3(f) for f in frame)
    n = np.cross(e1, e2)
    scale = np.linalg.norm(pair.a) + np.linalg.norm(pair.b)
    if abs(n @ pair.a) > 1e-10 * scale or abs(n @ pair.b) > 1e-10 * scale:
        raise ValueError("frame does not span the plane of the pair")
    return e1, e2


@dataclass(frozen=True, eq=False)
class ConicImplicit2D:
    """``cxx x^2 + 2 cxy x y + cyy y^2 = rhs`` in frame coordinates.

    ``cxy`` is the off-diagonal entry of the symmetric coefficient matrix,
    so the xy term of the expanded polynomial is ``2*cxy``.
    """

    cxx: float
    cxy: float
    cyy: float
    rhs: float
    frame: tuple

    def matrix(self) -> np.ndarray:
        return np.array([[self.cxx, self.cxy], [self.cxy, self.cyy]])

    def determinant(self) -> float:
        return self.cxx * self.cyy - self.cxy * self.cxy

    def coords(self, r) -> np.ndarray:
        """Frame coordinates of point(s) ``r`` (shape (3,) or (N, 3))."""
        e1, e2 = self.frame
        r = np.asarray(r, dtype=float)
        return np.stack([r @ e1, r @ e2], axis=-1)

    def evaluate(self, r):
        xy = self.coords(r)
        x, y = xy[..., 0], xy[..., 1]
        return self.cxx * x * x + 2.0 * self.cxy * x * y + self.cyy * y * y

    def residual(self, r):
        return self.evaluate(r) - self.rhs

    def is_proportional(self, other: ConicImplicit2D, rtol: float = 1e-10) -> bool:
        """Same curve set up to a positive overall factor (same frame assumed)."""
        u = np.array([self.cxx, self.cxy, self.cyy]) / self.rhs
        v = np.array([other.cxx, other.cxy, other.cyy]) / other.rhs
        k = (u @ v) / (v @ v)
        return k > 0 and bool(np.allclose(u, k * v, rtol=rtol, atol=rtol * np.abs(u).max()))


def delta1(pair: CsdPair, frame=None) -> float:
    """Determinant of the 2x2 matrix with columns a, b in frame coordinates."""
    e1, e2 = plane_frame(pair) if frame is None else _check_frame(pair, frame)
    a1, a2 = pair.a @ e1, pair.a @ e2
    b1, b2 = pair.b @ e1, pair.b @ e2
    return float(a1 * b2 - a2 * b1)


def reciprocal_pair(pair: CsdPair):
    """In-plane vectors a*, b* with a*.a = b*.b = 1 and a*.b = b*.a = 0."""
    cols = np.column_stack([pair.a, pair.b])
    gram = cols.T @ cols
    if np.linalg.det(gram) <= 1e-24 * np.trace(gram) ** 2:
        raise DegeneratePairError("pair is singular in its plane")
    recip = cols @ np.linalg.inv(gram)
    return recip[:, 0], recip[:, 1]


def conic_point(pair: CsdPair, kind: ConicKind, branch=Branch.PLUS, theta=0.0):
    """Point(s) of the ellipse or either hyperbola of ``pair``.

    Ellipse: a cos t + b sin t.  H: +-a cosh t + b sinh t.
    H': a sinh t +- b cosh t.  ``theta`` may be an array, giving (N, 3).
    """
    s = float(Branch(branch))
    t = np.asarray(theta, dtype=float)[..., None]
    a, b = pair.a, pair.b
    if kind is ConicKind.ELLIPSE:
        return a * np.cos(t) + b * np.sin(t)
    if kind is ConicKind.HYPERBOLA_H:
        return s * a * np.cosh(t) + b * np.sinh(t)
    if kind is ConicKind.HYPERBOLA_H_PRIME:
        return a * np.sinh(t) + s * b * np.cosh(t)
    raise ValueError(f"unknown conic kind {kind!r}")


def implicit_form(pair: CsdPair, kind: ConicKind, frame=None) -> ConicImplicit2D:
    """Implicit equation of the conic, divided through by delta1^2."""
    e1, e2 = plane_frame(pair) if frame is None else _check_frame(pair, frame)
    a1, a2 = pair.a @ e1, pair.a @ e2
    b1, b2 = pair.b @ e1, pair.b @ e2
    d2 = (a1 * b2 - a2 * b1) ** 2
    if d2 == 0.0:
        raise DegeneratePairError("pair is singular in its plane")
    if kind is ConicKind.ELLIPSE:
        cxx, cxy, cyy, rhs = a2 * a2 + b2 * b2, -(a1 * a2 + b1 * b2), a1 * a1 + b1 * b1, 1.0
    else:
        cxx, cxy, cyy = b2 * b2 - a2 * a2, a1 * a2 - b1 * b2, b1 * b1 - a1 * a1
        rhs = 1.0 if kind is ConicKind.HYPERBOLA_H else -1.0
    return ConicImplicit2D(float(cxx / d2), float(cxy / d2), float(cyy / d2), rhs, (e1, e2))


def polar_reciprocal(conic: ConicImplicit2D) -> ConicImplicit2D:
    """Polar reciprocal with respect to the unit circle of the frame.

    x.Kx = 1 with K = C/rhs maps to x.K^-1 x = 1, i.e. x.C^-1 x = 1/rhs,
    so a conjugate hyperbola (rhs = -1) stays on the -1 side.
    """
    cinv = np.linalg.inv(conic.matrix())
    return ConicImplicit2D(float(cinv[0, 0]), float(cinv[0, 1]), float(cinv[1, 1]),
                           1.0 / conic.rhs, conic.frame)


def asymptote_directions(pair: CsdPair):
    """The common asymptote directions a + b and a - b (unnormalised)."""
    return pair.a + pair.b, pair.a - pair.b


def eccentricity(pair: CsdPair, kind: ConicKind) -> float:
    """Eccentricity from the principal semi-axes.

    The ellipse uses the eigenvalues of its implicit form.  Hyperbolas
    reduce a + jb to principal axes p, q first: H has transverse
    semi-axis |p| and e = sqrt(1 + q^2/p^2); H' swaps the roles.
    """
    if kind is ConicKind.ELLIPSE:
        lo, hi = np.linalg.eigvalsh(implicit_form(pair, kind).matrix())
        if lo <= 0:
            raise DegeneratePairError("ellipse form is not positive definite")
        return math.sqrt(max(0.0, 1.0 - lo / hi))
    form = principal_axes(pair.jay())
    p2, q2 = float(form.p @ form.p), float(form.q @ form.q)
    if p2 == 0.0 or q2 == 0.0:
        raise IsotropicError("degenerate hyperbola: a principal semi-axis vanishes")
    if kind is ConicKind.HYPERBOLA_H:
        return math.sqrt(1.0 + q2 / p2)
    return math.sqrt(1.0 + p2 / q2)


def write_points_csv(points, out=None):
    """One ``x,y,z`` row per sample; ``out`` is a path, a text stream or None (stdout)."""
    points = np.atleast_2d(np.asarray(points, dtype=float))
    if out is None or isinstance(out, str) and out == "-":
        _write_rows(sys.stdout, points)
    elif isinstance(out, str):
        with open(out, "w", newline="") as fh:
            _write_rows(fh, points)
    else:
        _write_rows(out, points)


def _write_rows(fh, points):
    w = csv.writer(fh)
    w.writerow(["x", "y", "z"])
    for p in points:
        w.writerow([repr(float(c)) for c in p])
