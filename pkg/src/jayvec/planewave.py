"""Exponential plane-wave solutions of M_ij d^2 phi / dx_i dx_j = 0.

For an elliptic M every central section of r.Mr = 1 is an ellipse and
any CSD pair {a, b} of it gives phi = Re(alpha exp(T(a + ib).x)).  For a
hyperbolic M normalised so that r.Mr = 1 is a one-sheet hyperboloid a
section is an ellipse (bivector solution), a hyperbola (jay-vector
solution) or a pair of parallel lines (single real exponential).
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .dirvec import as_vec3, boost_csd, rotate_csd
from .errors import ClassError, ConstructionError, FrameError, InvariantViolation
from .quadrics import as_mat3, pd_sqrt

SYMMETRY_TOL = 1e-10
SINGULAR_TOL = 1e-10
DEGENERACY_TOL = 1e-9  # |det R| relative to max(|a|,|h|,|g|)^2
FRAME_TOL = 1e-10
FD_STEP = 1e-4


class OperatorClass(enum.Enum):
    ELLIPTIC = "elliptic"
    HYPERBOLIC = "hyperbolic"
    DEGENERATE = "degenerate"


@dataclass(frozen=True, eq=False)
class PdeOperator:
    M: np.ndarray
    kind: OperatorClass
    eigenvalues: np.ndarray


def classify_operator(M, tol: float = SINGULAR_TOL) -> PdeOperator:
    """Classify by eigenvalue signs.

    ``M`` is symmetrised; an asymmetry above 1e-10 relative is rejected.
    A negative definite matrix is reported elliptic, since -M gives the
    same PDE.
    """
    M = as_mat3(M)
    if np.abs(M - M.T).max() > SYMMETRY_TOL * max(1.0, np.abs(M).max()):
        raise ValueError("operator matrix is not symmetric")
    M = 0.5 * (M + M.T)
    w = np.linalg.eigvalsh(M)
    scale = np.abs(w).max()
    if scale == 0.0 or np.abs(w).min() <= tol * scale:
        kind = OperatorClass.DEGENERATE
    elif np.all(w > 0) or np.all(w < 0):
        kind = OperatorClass.ELLIPTIC
    else:
        kind = OperatorClass.HYPERBOLIC
    return PdeOperator(M, kind, w)


def normalize_one_sheet(op: PdeOperator) -> np.ndarray:
    """``M`` or ``-M``, whichever has exactly one negative eigenvalue."""
    if op.kind is not OperatorClass.HYPERBOLIC:
        raise ClassError(f"operator is {op.kind.value}, not hyperbolic")
    return op.M if np.count_nonzero(op.eigenvalues < 0) == 1 else -op.M


def solution_matrix(op: PdeOperator) -> np.ndarray:
    """Sign-normalised matrix the CSD constructions work with."""
    if op.kind is OperatorClass.HYPERBOLIC:
        return normalize_one_sheet(op)
    if op.kind is OperatorClass.ELLIPTIC:
        return op.M if op.eigenvalues[0] > 0 else -op.M
    raise ClassError("degenerate operator: no plane-wave construction")


@dataclass(frozen=True, eq=False)
class SectionFrame:
    """Orthonormal m, n spanning the central plane (m x n).x = 0."""

    m: np.ndarray
    n: np.ndarray

    def __post_init__(self):
        m, n = as_vec3(self.m), as_vec3(self.n)
        if (abs(m @ m - 1.0) > FRAME_TOL or abs(n @ n - 1.0) > FRAME_TOL
                or abs(m @ n) > FRAME_TOL):
            raise FrameError(f"frame is not orthonormal: |m|^2={m @ m!r}, |n|^2={n @ n!r}, m.n={m @ n!r}")
        object.__setattr__(self, "m", m)
        object.__setattr__(self, "n", n)

    def normal(self) -> np.ndarray:
        return np.cross(self.m, self.n)

    def lift(self, coords) -> np.ndarray:
        """3-vector with frame coordinates ``coords``."""
        return coords[0] * self.m + coords[1] * self.n

    @classmethod
    def random(cls, rng) -> SectionFrame:
        q, _ = np.linalg.qr(rng.standard_normal((3, 2)))
        return cls(q[:, 0], q[:, 1])


@dataclass(frozen=True)
class SectionForm:
    """a (m.x)^2 + 2h (m.x)(n.x) + g (n.x)^2 restricted to the plane."""

    a: float
    h: float
    g: float

    def matrix(self) -> np.ndarray:
        return np.array([[self.a, self.h], [self.h, self.g]])

    def det(self) -> float:
        return self.a * self.g - self.h * self.h


class SectionClass(enum.Enum):
    ELLIPSE = "ellipse"
    HYPERBOLA = "hyperbola"
    PARALLEL_LINES = "parallel_lines"


def section_form(M, f: SectionFrame) -> SectionForm:
    if not isinstance(f, SectionFrame):
        f = SectionFrame(*f)
    M = as_mat3(M)
    return SectionForm(float(f.m @ M @ f.m), float(f.m @ M @ f.n), float(f.n @ M @ f.n))


def classify_section(s: SectionForm, tol: float = DEGENERACY_TOL) -> SectionClass:
    """Ellipse, hyperbola or parallel lines; nothing else can come from a one-sheet surface.

    Raises:
        InvariantViolation: the form is negative definite or zero, which a
            one-sheet hyperboloid or an ellipsoid cannot produce.
    """
    scale = max(abs(s.a), abs(s.h), abs(s.g)) ** 2
    if scale == 0.0:
        raise InvariantViolation("section form vanishes identically")
    det = s.det()
    if abs(det) <= tol * scale:
        return SectionClass.PARALLEL_LINES
    if det < 0:
        return SectionClass.HYPERBOLA
    if s.a > 0:
        return SectionClass.ELLIPSE
    raise InvariantViolation(f"section form {s} is negative definite; the source is not a one-sheet hyperboloid")


def _sign_fix(v: np.ndarray) -> np.ndarray:
    return -v if v[np.argmax(np.abs(v))] < 0 else v


def csd_pair_elliptic(M, f: SectionFrame, psi: float = 0.0):
    """CSD pair of the elliptic section with M a.a = M b.b = 1, M a.b = 0.

    The seed pair comes from the inverse PD square root of the 2x2
    restricted form; ``psi`` then rotates it through the family.
    """
    if not isinstance(f, SectionFrame):
        f = SectionFrame(*f)
    s = section_form(M, f)
    R = s.matrix()
    if s.a <= 0 or s.det() <= DEGENERACY_TOL * max(abs(s.a), abs(s.h), abs(s.g)) ** 2:
        raise ClassError(f"section form {s} is not positive definite")
    C = np.linalg.inv(pd_sqrt(R))
    a, b = f.lift(C[:, 0]), f.lift(C[:, 1])
    return rotate_csd(a, b, psi)


def csd_pair_hyperbolic(M, f: SectionFrame, psi: float = 0.0):
    """CSD pair of the hyperbolic section with M a.a = 1, M b.b = -1, M a.b = 0.

    ``a`` is on the section hyperbola, ``b`` on its conjugate; ``psi``
    boosts the pair through the family.
    """
    if not isinstance(f, SectionFrame):
        f = SectionFrame(*f)
    s = section_form(M, f)
    if classify_section(s) is not SectionClass.HYPERBOLA:
        raise ClassError(f"section form {s} is not a hyperbola")
    w, V = np.linalg.eigh(s.matrix())
    a = f.lift(_sign_fix(V[:, 1]) / math.sqrt(w[1]))
    b = f.lift(_sign_fix(V[:, 0]) / math.sqrt(-w[0]))
    return boost_csd(a, b, psi)


def degenerate_direction(s: SectionForm, f: SectionFrame) -> np.ndarray:
    """Direction d of the parallel-line section, with M d.d = 0.

    d = sqrt(g) m - sqrt(a) n when h >= 0 and sqrt(g) m + sqrt(a) n when
    h < 0, so d spans the kernel of the perfect-square form.
    """
    if not isinstance(f, SectionFrame):
        f = SectionFrame(*f)
    scale = max(abs(s.a), abs(s.h), abs(s.g)) ** 2
    if abs(s.det()) > DEGENERACY_TOL * scale:
        raise InvariantViolation(f"section form {s} is not degenerate (det R = {s.det()!r})")
    a, g = s.a, s.g
    if a <= 0 and g <= 0:
        a, g = -a, -g
    slack = math.sqrt(DEGENERACY_TOL * scale)
    if a < -slack or g < -slack:
        raise InvariantViolation(f"section form {s} has a and g of opposite sign")
    ra, rg = math.sqrt(max(a, 0.0)), math.sqrt(max(g, 0.0))
    sign = -1.0 if s.h >= 0 else 1.0
    closed = np.array([rg, sign * ra])
    # kernel eigenvector avoids sqrt() amplifying rounding in a tiny a or g
    w, V = np.linalg.eigh(s.matrix())
    v = V[:, int(np.argmin(np.abs(w)))] * math.hypot(ra, rg)
    if v @ closed < 0:
        v = -v
    return f.lift(v)


class WaveKind(enum.Enum):
    ELLIPTIC_BIVECTOR = "elliptic_bivector"
    HYPERBOLIC_JAY = "hyperbolic_jay"
    DEGENERATE_LINE = "degenerate_line"


@dataclass(frozen=True, eq=False)
class WaveSolution:
    """Closed-form plane wave.

    elliptic:   (amp_plus cos(T b.x) - amp_minus sin(T b.x)) exp(T a.x)
    hyperbolic: (amp_plus cosh(T b.x) + amp_minus sinh(T b.x)) exp(T a.x)
    degenerate: amp_plus exp(T a.x), with ``a`` the line direction d

    Evaluators accept a point (3,) or a batch (N, 3).
    """

    kind: WaveKind
    a: np.ndarray
    b: np.ndarray
    T: float = 1.0
    amp_plus: float = 1.0
    amp_minus: float = 0.0

    def _parts(self, x):
        x = np.asarray(x, dtype=float)
        u = self.T * (x @ self.a)
        v = self.T * (x @ self.b)
        ap, am = self.amp_plus, self.amp_minus
        if self.kind is WaveKind.ELLIPTIC_BIVECTOR:
            c = ap * np.cos(v) - am * np.sin(v)
            s = -ap * np.sin(v) - am * np.cos(v)
            sgn = -1.0
        elif self.kind is WaveKind.HYPERBOLIC_JAY:
            c = ap * np.cosh(v) + am * np.sinh(v)
            s = ap * np.sinh(v) + am * np.cosh(v)
            sgn = 1.0
        else:
            c = ap * np.ones_like(u)
            s = np.zeros_like(u)
            sgn = 0.0
        return np.exp(u), c, s, sgn, v

    def value(self, x):
        eu, c, _, _, _ = self._parts(x)
        return c * eu

    def gradient(self, x):
        eu, c, s, _, _ = self._parts(x)
        return self.T * eu[..., None] * (c[..., None] * self.a + s[..., None] * self.b)

    def hessian(self, x):
        eu, c, s, sgn, _ = self._parts(x)
        aa = np.outer(self.a, self.a)
        bb = np.outer(self.b, self.b)
        ab = np.outer(self.a, self.b)
        ab = ab + ab.T
        c, s, eu = c[..., None, None], s[..., None, None], eu[..., None, None]
        return self.T ** 2 * eu * (c * (aa + sgn * bb) + s * ab)

    def envelope(self, x):
        """Size of phi and its derivatives, used to make residuals scale-free."""
        eu, _, _, _, v = self._parts(x)
        amp = abs(self.amp_plus) + abs(self.amp_minus)
        if self.kind is WaveKind.HYPERBOLIC_JAY:
            return amp * eu * np.cosh(v)
        return amp * eu

    def to_dict(self) -> dict:
        return {"kind": self.kind.value, "a": self.a.tolist(), "b": self.b.tolist(), "T": self.T,
                "amp_plus": self.amp_plus, "amp_minus": self.amp_minus}

    @classmethod
    def from_dict(cls, d) -> WaveSolution:
        return cls(WaveKind(d["kind"]), as_vec3(d["a"]), as_vec3(d.get("b", (0.0, 0.0, 0.0))),
                   float(d.get("T", 1.0)), float(d.get("amp_plus", 1.0)), float(d.get("amp_minus", 0.0)))


def _quad(M, x, y) -> float:
    return float(x @ M @ y)


def build_solution(kind, a, b=None, M=None, T: float = 1.0, amp_plus: float = 1.0,
                   amp_minus: float = 0.0, tol: float = 1e-9) -> WaveSolution:
    """Validate the family conditions against ``M`` and build the solution.

    elliptic:   M a.a = M b.b and M a.b = 0
    hyperbolic: M a.a = +1, M b.b = -1, M a.b = 0 (M one-sheet normalised)
    degenerate: M a.a = 0; ``b`` is ignored

    Raises:
        ConstructionError: names the failing condition and its residual.
    """
    kind = WaveKind(kind)
    M = as_mat3(M)
    a = as_vec3(a)
    b = np.zeros(3) if kind is WaveKind.DEGENERATE_LINE or b is None else as_vec3(b)
    scale = np.linalg.norm(M, 2) * (a @ a + b @ b)
    if scale == 0.0:
        raise ConstructionError("zero wave vectors", "nonzero", 0.0)
    if kind is WaveKind.ELLIPTIC_BIVECTOR:
        checks = [("M a.a = M b.b", _quad(M, a, a) - _quad(M, b, b)), ("M a.b = 0", _quad(M, a, b))]
    elif kind is WaveKind.HYPERBOLIC_JAY:
        checks = [("M a.a = +1", _quad(M, a, a) - 1.0), ("M b.b = -1", _quad(M, b, b) + 1.0),
                  ("M a.b = 0", _quad(M, a, b))]
    else:
        checks = [("M d.d = 0", _quad(M, a, a))]
    for name, r in checks:
        if abs(r) > tol * max(scale, 1.0):
            raise ConstructionError(f"condition {name} fails with residual {r:.3e}", name, r)
    return WaveSolution(kind, a, b, float(T), float(amp_plus), float(amp_minus))


def _fd_contraction(sol: WaveSolution, M, x, h):
    out = np.zeros(len(x))
    eye = np.eye(3) * h
    f0 = sol.value(x)
    for i in range(3):
        ei = eye[i]
        out += M[i, i] * (sol.value(x + ei) - 2.0 * f0 + sol.value(x - ei)) / (h * h)
        for j in range(i + 1, 3):
            ej = eye[j]
            mixed = (sol.value(x + ei + ej) - sol.value(x + ei - ej)
                     - sol.value(x - ei + ej) + sol.value(x - ei - ej)) / (4.0 * h * h)
            out += (M[i, j] + M[j, i]) * mixed
    return out


def residual(sol: WaveSolution, M, points, method: str = "analytic", h: float = FD_STEP) -> float:
    """Scale-free PDE residual, max over ``points`` of |M_ij d_i d_j phi| / scale.

    scale = T^2 ||M||_2 (|a|^2 + |b|^2) * envelope(x).  ``method`` is
    "analytic" (closed-form Hessian) or "fd" (central differences, step h).
    """
    M = as_mat3(M)
    x = np.atleast_2d(np.asarray(points, dtype=float))
    if method == "analytic":
        lap = np.einsum("ij,nij->n", M, sol.hessian(x))
    elif method == "fd":
        lap = _fd_contraction(sol, M, x, h)
    else:
        raise ValueError(f"method must be 'analytic' or 'fd', got {method!r}")
    scale = sol.T ** 2 * np.linalg.norm(M, 2) * (sol.a @ sol.a + sol.b @ sol.b) * sol.envelope(x)
    if not np.any(scale > 0):
        return 0.0
    return float(np.max(np.abs(lap) / scale))


@dataclass(frozen=True, eq=False)
class SectionSolution:
    operator: PdeOperator
    matrix: np.ndarray  # sign-normalised operator actually used
    section: SectionForm
    section_class: SectionClass
    solution: WaveSolution


def solve_section(M, f: SectionFrame, psi: float = 0.0, T: float = 1.0,
                  amp_plus: float = 1.0, amp_minus: float = 0.0) -> SectionSolution:
    """Full pipeline: classify, normalise, cut the section, pick the family."""
    if not isinstance(f, SectionFrame):
        f = SectionFrame(*f)
    op = classify_operator(M)
    N = solution_matrix(op)
    s = section_form(N, f)
    cls = classify_section(s)
    if cls is SectionClass.ELLIPSE:
        a, b = csd_pair_elliptic(N, f, psi)
        sol = build_solution(WaveKind.ELLIPTIC_BIVECTOR, a, b, N, T, amp_plus, amp_minus)
    elif cls is SectionClass.HYPERBOLA:
        a, b = csd_pair_hyperbolic(N, f, psi)
        sol = build_solution(WaveKind.HYPERBOLIC_JAY, a, b, N, T, amp_plus, amp_minus)
    else:
        d = degenerate_direction(s, f)
        sol = build_solution(WaveKind.DEGENERATE_LINE, d, None, N, T, amp_plus, amp_minus)
    return SectionSolution(op, N, s, cls, sol)


def ruled_lines(a: float, b: float, c: float, alpha: float):
    """The two parallel lines through (+-a cos alpha, +-b sin alpha, 0) on
    -x^2/a^2 - y^2/b^2 + z^2/c^2 = -1, as ((point, direction), (point, direction))."""
    if not (a > 0 and b > 0 and c > 0):
        raise ValueError(f"semi-axes must be positive, got {(a, b, c)}")
    ca, sa = math.cos(alpha), math.sin(alpha)
    direction = np.array([-a * sa, b * ca, c])
    p = np.array([a * ca, b * sa, 0.0])
    return (p, direction.copy()), (-p, direction.copy())


def random_points(n: int, seed: int = 0) -> np.ndarray:
    """n points uniform in [-1, 1]^3, deterministic in ``seed``."""
    return np.random.default_rng(seed).uniform(-1.0, 1.0, size=(n, 3))
