"""Ellipsoids and conjugate hyperboloid pairs centred on the origin.

Triads of conjugate semi-diameters (CSDs) are generated from rotations
for an ellipsoid r.Ar = 1, and from pseudo-rotations Q (Q^T E Q = E,
E = diag(-1, -1, 1)) for the pair r.Hr = +-1.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np

from .dirvec import as_vec3
from .errors import (DefinitenessError, OrthogonalityError, SignatureError,
                     SingularTriadError)

E = np.diag([-1.0, -1.0, 1.0])
SINGULAR_TOL = 1e-10
ORTHO_TOL = 1e-10


def as_mat3(M) -> np.ndarray:
    M = np.asarray(M, dtype=float)
    if M.shape != (3, 3):
        raise ValueError(f"expected a 3x3 matrix, got shape {M.shape}")
    if not np.all(np.isfinite(M)):
        raise ValueError("matrix entries must be finite")
    return M


def _symmetric(M, rtol=1e-10) -> np.ndarray:
    M = as_mat3(M)
    if np.abs(M - M.T).max() > rtol * max(1.0, np.abs(M).max()):
        raise ValueError("matrix is not symmetric")
    return 0.5 * (M + M.T)


@dataclass(frozen=True, eq=False)
class Triad:
    a: np.ndarray
    b: np.ndarray
    c: np.ndarray

    def __post_init__(self):
        for name in "abc":
            object.__setattr__(self, name, as_vec3(getattr(self, name)))

    @classmethod
    def from_matrix(cls, M) -> Triad:
        M = np.asarray(M, dtype=float)
        return cls(M[:, 0], M[:, 1], M[:, 2])

    def matrix(self) -> np.ndarray:
        """Columns a, b, c."""
        return np.column_stack([self.a, self.b, self.c])

    def delta(self) -> float:
        return float(self.a @ np.cross(self.b, self.c))

    def oriented(self) -> Triad:
        """Same triad with a and b swapped if needed so that a.(b x c) > 0."""
        return self if self.delta() > 0 else Triad(self.b, self.a, self.c)

    def to_list(self):
        return [self.a.tolist(), self.b.tolist(), self.c.tolist()]


def reciprocal_triad(t: Triad, tol: float = SINGULAR_TOL) -> Triad:
    """a* = (b x c)/D, b* = (c x a)/D, c* = (a x b)/D with D = a.(b x c)."""
    delta = t.delta()
    scale = np.linalg.norm(t.a) * np.linalg.norm(t.b) * np.linalg.norm(t.c)
    if scale == 0.0 or abs(delta) <= tol * scale:
        raise SingularTriadError(f"triad is (nearly) linearly dependent: |delta| = {abs(delta):.3e}", delta)
    return Triad(np.cross(t.b, t.c) / delta, np.cross(t.c, t.a) / delta, np.cross(t.a, t.b) / delta)


@dataclass(frozen=True, eq=False)
class Ellipsoid:
    """r.Ar = 1 with A symmetric positive definite."""

    A: np.ndarray

    def __post_init__(self):
        A = _symmetric(self.A)
        w = np.linalg.eigvalsh(A)
        if w[0] <= 0:
            raise DefinitenessError(f"ellipsoid matrix is not positive definite, eigenvalues {w.tolist()}", w)
        object.__setattr__(self, "A", A)

    def form(self, r):
        r = np.asarray(r, dtype=float)
        return np.einsum("...i,ij,...j->...", r, self.A, r)


def ellipsoid_from_triad(t: Triad) -> Ellipsoid:
    """The ellipsoid having ``t`` as CSDs: A = N N^T with N = (a*|b*|c*)."""
    N = reciprocal_triad(t).matrix()
    return Ellipsoid(N @ N.T)


def ellipsoid_point(t: Triad, phi, theta):
    """a cos(phi) sin(theta) + b sin(phi) sin(theta) + c cos(theta); broadcasts."""
    phi = np.asarray(phi, dtype=float)[..., None]
    theta = np.asarray(theta, dtype=float)[..., None]
    return t.a * np.cos(phi) * np.sin(theta) + t.b * np.sin(phi) * np.sin(theta) + t.c * np.cos(theta)


def pd_sqrt(A, tol: float = 1e-12) -> np.ndarray:
    """Unique symmetric positive definite square root of a symmetric PD matrix."""
    A = np.asarray(A, dtype=float)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {A.shape}")
    if np.abs(A - A.T).max() > 1e-10 * max(1.0, np.abs(A).max()):
        raise ValueError("matrix is not symmetric")
    w, V = np.linalg.eigh(0.5 * (A + A.T))
    if w[0] <= tol * max(abs(w[-1]), 1e-300):
        raise DefinitenessError(f"matrix is not positive definite, eigenvalues {w.tolist()}", w)
    U = (V * np.sqrt(w)) @ V.T
    return 0.5 * (U + U.T)


def is_rotation(R, tol: float = ORTHO_TOL) -> bool:
    R = np.asarray(R, dtype=float)
    return (R.shape == (3, 3) and np.abs(R.T @ R - np.eye(3)).max() <= tol
            and abs(np.linalg.det(R) - 1.0) <= tol)


def csd_triad_ellipsoid(ell: Ellipsoid, R) -> Triad:
    """CSD triad (a|b|c) = U^-1 R, U the PD square root of A."""
    R = as_mat3(R)
    if not is_rotation(R):
        raise OrthogonalityError("R is not a proper rotation (R^T R = I, det R = +1)")
    U = pd_sqrt(ell.A)
    return Triad.from_matrix(np.linalg.solve(U, R))


@dataclass(frozen=True, eq=False)
class HyperboloidPair:
    """Two-sheet H: r.Hr = +1 and its one-sheet conjugate H': r.Hr = -1.

    ``eigenvalues`` are ordered (-a^-2, -b^-2, +c^-2): positive last, the
    negatives by descending magnitude.  ``frame`` holds the matching unit
    eigenvectors as columns and is a proper rotation.
    """

    H: np.ndarray
    eigenvalues: np.ndarray = field(init=False)
    frame: np.ndarray = field(init=False)

    def __post_init__(self):
        H = _symmetric(self.H)
        w, V = np.linalg.eigh(H)
        scale = np.abs(w).max()
        signs = np.sign(np.where(np.abs(w) <= 1e-12 * scale, 0.0, w))
        if scale == 0.0 or np.count_nonzero(signs == 0) or np.count_nonzero(signs > 0) != 1:
            raise SignatureError(
                f"hyperboloid pair needs signature (-,-,+), eigenvalue signs {signs.tolist()}", w)
        neg = [i for i in np.argsort(-np.abs(w)) if w[i] < 0]
        order = neg + [int(np.argmax(w))]
        w, V = w[order], V[:, order]
        for k in range(2):
            if V[np.argmax(np.abs(V[:, k])), k] < 0:
                V[:, k] = -V[:, k]
        V[:, 2] = np.cross(V[:, 0], V[:, 1])
        object.__setattr__(self, "H", H)
        object.__setattr__(self, "eigenvalues", w)
        object.__setattr__(self, "frame", V)

    def semi_axes(self) -> np.ndarray:
        """(a, b, c) with eigenvalues (-a^-2, -b^-2, c^-2)."""
        return 1.0 / np.sqrt(np.abs(self.eigenvalues))

    def form(self, r):
        r = np.asarray(r, dtype=float)
        return np.einsum("...i,ij,...j->...", r, self.H, r)


def factor_hyperboloid(hp: HyperboloidPair):
    """Return (U, E, frame) with H = frame (U E U) frame^T.

    ``U`` is diag(1/a, 1/b, 1/c) in the eigen-frame.
    """
    U = np.diag(np.sqrt(np.abs(hp.eigenvalues)))
    return U, E.copy(), hp.frame.copy()


def hyperboloid_from_triad(t: Triad) -> HyperboloidPair:
    """Pair for which ``t`` is a CSD triad (a, b on H', c on H)."""
    r = reciprocal_triad(t)
    H = -np.outer(r.a, r.a) - np.outer(r.b, r.b) + np.outer(r.c, r.c)
    return HyperboloidPair(H)


def hyperboloid_point(t: Triad, phi, theta, sheet: str = "two", sign: int = 1):
    """Parametric point of the two-sheet H or the one-sheet H' of triad ``t``.

    two:  a cos(phi) sinh(theta) + b sin(phi) sinh(theta) +- c cosh(theta)
    one:  a cos(phi) cosh(theta) + b sin(phi) cosh(theta) + c sinh(theta)
    """
    phi = np.asarray(phi, dtype=float)[..., None]
    theta = np.asarray(theta, dtype=float)[..., None]
    if sheet == "two":
        return (t.a * np.cos(phi) * np.sinh(theta) + t.b * np.sin(phi) * np.sinh(theta)
                + sign * t.c * np.cosh(theta))
    if sheet == "one":
        return t.a * np.cos(phi) * np.cosh(theta) + t.b * np.sin(phi) * np.cosh(theta) + t.c * np.sinh(theta)
    raise ValueError(f"sheet must be 'one' or 'two', got {sheet!r}")


def pseudo_orthogonality_defect(Q) -> float:
    """max |Q^T E Q - E|, relative to max(1, max|Q|^2)."""
    Q = as_mat3(Q)
    return float(np.abs(Q.T @ E @ Q - E).max() / max(1.0, np.abs(Q).max() ** 2))


@dataclass(frozen=True, eq=False)
class PseudoRotation:
    """Q with Q^T E Q = E and det Q = +1."""

    Q: np.ndarray

    def __post_init__(self):
        Q = as_mat3(self.Q)
        defect = pseudo_orthogonality_defect(Q)
        if defect > ORTHO_TOL:
            raise OrthogonalityError(f"Q^T E Q != E (relative defect {defect:.3e})")
        det = np.linalg.det(Q)
        if abs(det - 1.0) > ORTHO_TOL * max(1.0, np.abs(Q).max() ** 3):
            raise OrthogonalityError(f"det Q = {det!r}, expected +1")
        object.__setattr__(self, "Q", Q)

    def __matmul__(self, other: PseudoRotation) -> PseudoRotation:
        return PseudoRotation(self.Q @ other.Q)

    def inverse(self) -> PseudoRotation:
        # Q^T E Q = E  implies  Q^-1 = E Q^T E
        return PseudoRotation(E @ self.Q.T @ E)

    def columns(self):
        return self.Q[:, 0], self.Q[:, 1], self.Q[:, 2]


def pseudo_rotation_generator(axis: int, theta: float) -> PseudoRotation:
    """Q1 (boost mixing 2,3), Q2 (boost mixing 1,3) or Q3 (rotation about 3)."""
    if axis in (1, 2):
        ch, sh = math.cosh(theta), math.sinh(theta)
        i = 1 if axis == 1 else 0
        Q = np.eye(3)
        Q[i, i] = Q[2, 2] = ch
        Q[i, 2] = Q[2, i] = sh
    elif axis == 3:
        c, s = math.cos(theta), math.sin(theta)
        Q = np.array([[c, -s, 0.0], [s, c, 0.0], [0.0, 0.0, 1.0]])
    else:
        raise ValueError(f"axis must be 1, 2 or 3, got {axis!r}")
    return PseudoRotation(Q)


def csd_triad_hyperboloid(hp: HyperboloidPair, Q) -> Triad:
    """CSD triad a = U^-1 l, b = U^-1 m, c = U^-1 n of the pair, in world coordinates.

    a, b land on H' (r.Hr = -1), c on H (r.Hr = +1).
    """
    if not isinstance(Q, PseudoRotation):
        Q = PseudoRotation(Q)
    U, _, V = factor_hyperboloid(hp)
    return Triad.from_matrix(V @ np.linalg.solve(U, Q.Q))


@dataclass(frozen=True, eq=False)
class ComplexTriad:
    L: np.ndarray
    M: np.ndarray
    N: np.ndarray

    def matrix(self) -> np.ndarray:
        return np.column_stack([self.L, self.M, self.N])


def complexify_triad(l, m, n, tol: float = ORTHO_TOL) -> ComplexTriad:
    """Map a pseudo-orthonormal triad to the columns of a complex rotation.

    L = (l1, l2, i l3), M = (m1, m2, i m3), N = (-i n1, -i n2, n3), so that
    (L|M|N)^T (L|M|N) = I with transpose, not conjugate transpose.
    """
    Q = np.column_stack([as_vec3(l), as_vec3(m), as_vec3(n)])
    defect = pseudo_orthogonality_defect(Q)
    if defect > tol:
        raise OrthogonalityError(f"triad is not pseudo-orthonormal (relative defect {defect:.3e})")
    R = Q.astype(complex)
    R[2, :2] *= 1j
    R[:2, 2] *= -1j
    return ComplexTriad(R[:, 0], R[:, 1], R[:, 2])


class Surface(enum.Enum):
    ON_H = "on_h"
    ON_H_PRIME = "on_h_prime"
    ON_CONE = "on_cone"
    OFF = "off"


@dataclass(frozen=True)
class Membership:
    surface: Surface
    value: float  # r.Hr


def quadric_membership(quadric, r, tol: float = 1e-10) -> Membership:
    """Classify ``r`` by r.Hr in {+1, -1, 0}; for an ellipsoid +1 means on E.

    ``quadric`` may be a HyperboloidPair, an Ellipsoid or a bare matrix.
    """
    if isinstance(quadric, HyperboloidPair):
        M = quadric.H
    elif isinstance(quadric, Ellipsoid):
        M = quadric.A
    else:
        M = as_mat3(quadric)
    r = as_vec3(r)
    v = float(r @ M @ r)
    scale = max(1.0, float(np.abs(M).max() * (r @ r)))
    if abs(v - 1.0) <= tol * scale:
        return Membership(Surface.ON_H, v)
    if abs(v + 1.0) <= tol * scale:
        return Membership(Surface.ON_H_PRIME, v)
    if abs(v) <= tol * scale:
        return Membership(Surface.ON_CONE, v)
    return Membership(Surface.OFF, v)


def check_csd_conditions(M, t: Triad):
    """Matrix of a_i.M a_j for the triad columns; CSDs make it diagonal."""
    T = t.matrix()
    return T.T @ as_mat3(M) @ T


__all__ = [
    "E", "Triad", "Ellipsoid", "HyperboloidPair", "PseudoRotation", "ComplexTriad",
    "Surface", "Membership", "reciprocal_triad", "ellipsoid_from_triad", "ellipsoid_point",
    "pd_sqrt", "is_rotation", "csd_triad_ellipsoid", "factor_hyperboloid",
    "hyperboloid_from_triad", "hyperboloid_point", "pseudo_rotation_generator",
    "pseudo_orthogonality_defect", "csd_triad_hyperboloid", "complexify_triad",
    "quadric_membership", "check_csd_conditions",
]
