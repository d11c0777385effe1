"""Command-line front end: one JSON document in, one JSON document out.

    jayvec classify --input op.json
    jayvec solve --input job.json | jayvec verify --input -
    jayvec demo

A short human-readable summary goes to stderr.  Exit codes: 0 success,
2 validation error, 3 residual above tolerance.
"""

from __future__ import annotations

import argparse
import json
import math
import sys

import numpy as np

from . import conics, planewave, quadrics
from .dirvec import JayVector
from .errors import JayvecError
from .hypercomplex import JayScalar

EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_RESIDUAL = 3

COMMANDS = ("classify", "section", "solve", "csd", "verify", "demo")
DEFAULT_TOL = 1e-10
DEFAULT_FD_TOL = 1e-5
DEFAULT_POINTS = 100


class InputError(Exception):
    """Malformed or inconsistent job document."""


def _load(source):
    try:
        if source in (None, "-"):
            text = sys.stdin.read()
        else:
            with open(source) as fh:
                text = fh.read()
    except OSError as exc:
        raise InputError(f"cannot read input: {exc}") from None
    if not text.strip():
        return {}
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"malformed JSON: {exc}") from None
    if not isinstance(doc, dict):
        raise InputError("malformed JSON: top level must be an object")
    return doc


def _matrix(doc, key="matrix"):
    if key not in doc:
        raise InputError(f"missing field '{key}'")
    try:
        M = np.asarray(doc[key], dtype=float)
    except (TypeError, ValueError):
        raise InputError(f"field '{key}' is not a numeric array") from None
    if M.shape != (3, 3):
        raise InputError(f"dimension mismatch: '{key}' must be 3x3, got shape {M.shape}")
    return M


def _vector(value, name):
    try:
        v = np.asarray(value, dtype=float)
    except (TypeError, ValueError):
        raise InputError(f"field '{name}' is not a numeric array") from None
    if v.shape != (3,):
        raise InputError(f"dimension mismatch: '{name}' must have 3 components, got shape {v.shape}")
    return v


def _frame(doc):
    if "frame" not in doc:
        raise InputError("missing field 'frame' (object with 'm' and 'n')")
    fr = doc["frame"]
    if isinstance(fr, dict):
        m, n = fr.get("m"), fr.get("n")
    elif isinstance(fr, (list, tuple)) and len(fr) == 2:
        m, n = fr
    else:
        raise InputError("field 'frame' must be {'m': [..], 'n': [..]} or [m, n]")
    return planewave.SectionFrame(_vector(m, "frame.m"), _vector(n, "frame.n"))


def _float(doc, key, default):
    try:
        return float(doc.get(key, default))
    except (TypeError, ValueError):
        raise InputError(f"field '{key}' must be a number") from None


class Job:
    """Parsed configuration shared by all commands."""

    def __init__(self, command, doc, args):
        self.command = command
        self.doc = doc
        self.tol = args.tol if args.tol is not None else _float(doc, "tol", DEFAULT_TOL)
        self.fd_tol = _float(doc, "fd_tol", DEFAULT_FD_TOL)
        self.seed = args.seed if args.seed is not None else int(doc.get("seed", 0))
        self.n_points = int(doc.get("points", DEFAULT_POINTS))
        self.emit_points = args.emit_points
        self.csv = args.csv
        self.summary = []

    def note(self, line):
        self.summary.append(line)


def _emit(job, points):
    if job.emit_points and points is not None:
        conics.write_points_csv(points, job.csv)
        job.note(f"wrote {len(points)} samples to {job.csv}")


def _section_samples(N, f, s, cls, n):
    if cls is planewave.SectionClass.ELLIPSE:
        a, b = planewave.csd_pair_elliptic(N, f)
        pair = conics.CsdPair(a, b)
        return conics.conic_point(pair, conics.ConicKind.ELLIPSE, theta=np.linspace(0, 2 * math.pi, n, endpoint=False))
    if cls is planewave.SectionClass.HYPERBOLA:
        a, b = planewave.csd_pair_hyperbolic(N, f)
        pair = conics.CsdPair(a, b)
        k = max(n // 2, 1)
        t = np.linspace(-2.0, 2.0, k)
        return np.vstack([conics.conic_point(pair, conics.ConicKind.HYPERBOLA_H, conics.Branch.PLUS, t),
                          conics.conic_point(pair, conics.ConicKind.HYPERBOLA_H, conics.Branch.MINUS, t)])
    d = planewave.degenerate_direction(s, f)
    w, V = np.linalg.eigh(s.matrix())
    i = int(np.argmax(np.abs(w)))
    p0 = f.lift(V[:, i] / math.sqrt(abs(w[i])))
    k = max(n // 2, 1)
    t = np.linspace(-2.0, 2.0, k)[:, None]
    return np.vstack([p0 + t * d, -p0 + t * d])


def cmd_classify(job):
    op = planewave.classify_operator(_matrix(job.doc))
    job.note(f"operator is {op.kind.value}; eigenvalues {np.round(op.eigenvalues, 12).tolist()}")
    return {"class": op.kind.value, "eigenvalues": op.eigenvalues.tolist()}, EXIT_OK


def cmd_section(job):
    op = planewave.classify_operator(_matrix(job.doc))
    N = planewave.solution_matrix(op)
    f = _frame(job.doc)
    s = planewave.section_form(N, f)
    cls = planewave.classify_section(s)
    job.note(f"section (a, h, g) = ({s.a:.6g}, {s.h:.6g}, {s.g:.6g}), det R = {s.det():.3e}: {cls.value}")
    out = {"operator_class": op.kind.value, "normalized_matrix": N.tolist(),
           "a": s.a, "h": s.h, "g": s.g, "det_R": s.det(), "class": cls.value}
    if cls is planewave.SectionClass.PARALLEL_LINES:
        out["direction"] = planewave.degenerate_direction(s, f).tolist()
    if job.emit_points:
        _emit(job, _section_samples(N, f, s, cls, job.emit_points))
    return out, EXIT_OK


def _residual_report(job, sol, N):
    pts = planewave.random_points(job.n_points, job.seed)
    ra = planewave.residual(sol, N, pts, "analytic")
    rf = planewave.residual(sol, N, pts, "fd")
    ok = ra <= job.tol and rf <= job.fd_tol
    job.note(f"residual analytic {ra:.3e} (tol {job.tol:g}), finite-difference {rf:.3e} (tol {job.fd_tol:g})"
             + ("" if ok else "  FAILED"))
    return ra, rf, ok


def cmd_solve(job):
    M = _matrix(job.doc)
    f = _frame(job.doc)
    res = planewave.solve_section(M, f, psi=_float(job.doc, "psi", 0.0), T=_float(job.doc, "T", 1.0),
                                  amp_plus=_float(job.doc, "amp_plus", 1.0),
                                  amp_minus=_float(job.doc, "amp_minus", 0.0))
    ra, rf, ok = _residual_report(job, res.solution, res.matrix)
    job.note(f"{res.operator.kind.value} operator, {res.section_class.value} section -> {res.solution.kind.value}")
    sol = res.solution.to_dict()
    sol.update(residual_analytic=ra, residual_fd=rf)
    out = {"matrix": M.tolist(), "frame": {"m": f.m.tolist(), "n": f.n.tolist()},
           "operator_class": res.operator.kind.value, "section_class": res.section_class.value,
           "seed": job.seed, "points": job.n_points, "tol": job.tol, "fd_tol": job.fd_tol,
           "solution": sol}
    if job.emit_points:
        s = res.section
        _emit(job, _section_samples(res.matrix, f, s, res.section_class, job.emit_points))
    return out, EXIT_OK if ok else EXIT_RESIDUAL


def cmd_verify(job):
    M = _matrix(job.doc)
    raw = job.doc.get("solution", job.doc)
    if not isinstance(raw, dict) or "kind" not in raw or "a" not in raw:
        raise InputError("missing solution: need 'solution' object with at least 'kind' and 'a'")
    try:
        kind = planewave.WaveKind(raw["kind"])
    except ValueError:
        raise InputError(f"unknown solution kind {raw['kind']!r}") from None
    a = _vector(raw["a"], "solution.a")
    b = _vector(raw.get("b", [0.0, 0.0, 0.0]), "solution.b")
    N = planewave.solution_matrix(planewave.classify_operator(M))
    sol = planewave.build_solution(kind, a, b, N, _float(raw, "T", 1.0), _float(raw, "amp_plus", 1.0),
                                   _float(raw, "amp_minus", 0.0))
    ra, rf, ok = _residual_report(job, sol, N)
    out = {"solution": sol.to_dict(), "seed": job.seed, "points": job.n_points,
           "residual_analytic": ra, "residual_fd": rf, "ok": ok}
    for key in ("residual_analytic", "residual_fd"):
        if key in raw:
            out[f"{key}_reported"] = raw[key]
    return out, EXIT_OK if ok else EXIT_RESIDUAL


def _pseudo_rotation(value):
    if isinstance(value, dict) and "Q" in value:
        return quadrics.PseudoRotation(value["Q"])
    if isinstance(value, list) and value and all(isinstance(s, dict) for s in value):
        Q = quadrics.PseudoRotation(np.eye(3))
        for step in value:
            try:
                Q = Q @ quadrics.pseudo_rotation_generator(int(step["axis"]), float(step["theta"]))
            except (KeyError, TypeError) as exc:
                raise InputError(f"pseudo_rotation step needs 'axis' and 'theta': {exc}") from None
        return Q
    return quadrics.PseudoRotation(np.asarray(value, dtype=float))


def cmd_csd(job):
    doc = job.doc
    M = _matrix(doc)
    if "rotation" in doc:
        R = _matrix(doc, "rotation")
        ell = quadrics.Ellipsoid(M)
        t = quadrics.csd_triad_ellipsoid(ell, R)
        job.note(f"ellipsoid CSD triad, delta = {t.delta():.6g}")
        out = {"type": "ellipsoid_triad", "triad": t.to_list(),
               "conditions": quadrics.check_csd_conditions(ell.A, t).tolist()}
        if job.emit_points:
            k = max(int(math.sqrt(job.emit_points)), 2)
            ph, th = np.meshgrid(np.linspace(0, 2 * math.pi, k), np.linspace(0, math.pi, k))
            _emit(job, quadrics.ellipsoid_point(t, ph.ravel(), th.ravel()))
        return out, EXIT_OK
    if "pseudo_rotation" in doc:
        hp = quadrics.HyperboloidPair(M)
        Q = _pseudo_rotation(doc["pseudo_rotation"])
        t = quadrics.csd_triad_hyperboloid(hp, Q)
        ct = quadrics.complexify_triad(*Q.columns())
        R = ct.matrix()
        job.note(f"hyperboloid CSD triad, delta = {t.delta():.6g}")
        out = {"type": "hyperboloid_triad", "triad": t.to_list(), "Q": Q.Q.tolist(),
               "conditions": quadrics.check_csd_conditions(hp.H, t).tolist(),
               "complex_rotation": {"re": R.real.tolist(), "im": R.imag.tolist()}}
        if job.emit_points:
            k = max(int(math.sqrt(job.emit_points)), 2)
            ph, th = np.meshgrid(np.linspace(0, 2 * math.pi, k), np.linspace(-1.5, 1.5, k))
            _emit(job, quadrics.hyperboloid_point(t, ph.ravel(), th.ravel(), sheet="one"))
        return out, EXIT_OK
    op = planewave.classify_operator(M)
    N = planewave.solution_matrix(op)
    f = _frame(doc)
    s = planewave.section_form(N, f)
    cls = planewave.classify_section(s)
    psi = _float(doc, "psi", 0.0)
    if cls is planewave.SectionClass.ELLIPSE:
        a, b = planewave.csd_pair_elliptic(N, f, psi)
    elif cls is planewave.SectionClass.HYPERBOLA:
        a, b = planewave.csd_pair_hyperbolic(N, f, psi)
    else:
        raise JayvecError("section is a pair of parallel lines: no conjugate semi-diameters")
    job.note(f"{cls.value} section CSD pair a = {np.round(a, 12).tolist()}, b = {np.round(b, 12).tolist()}")
    out = {"type": "section_pair", "section_class": cls.value, "a": a.tolist(), "b": b.tolist(),
           "Maa": float(a @ N @ a), "Mbb": float(b @ N @ b), "Mab": float(a @ N @ b)}
    if job.emit_points:
        _emit(job, _section_samples(N, f, s, cls, job.emit_points))
    return out, EXIT_OK


def cmd_demo(job):
    rng = np.random.default_rng(job.seed)
    alpha, beta = rng.uniform(-3, 3, size=2)
    A = JayVector([1, 0, 0], [0, 0, 7])
    B = JayScalar(1.0, 1.0) * JayVector([7, 0, -1]) + JayVector([0, alpha + beta, 0])
    w = A.dot(B)
    job.note(f"A = i + 7j k, B = (1+j)(7i - k) + (alpha+beta) j:  A.B = {w.re:g} + j{w.jay:g}")
    lines = []
    a, b, c, al = 2.0, 1.5, 0.5, 0.7
    t = np.linspace(-2, 2, 41)[:, None]
    worst = 0.0
    for p, d in planewave.ruled_lines(a, b, c, al):
        x = p + t * d
        r = -x[:, 0] ** 2 / a ** 2 - x[:, 1] ** 2 / b ** 2 + x[:, 2] ** 2 / c ** 2 + 1.0
        worst = max(worst, float(np.abs(r).max()))
        lines.append({"point": p.tolist(), "direction": d.tolist()})
    job.note(f"ruled lines on -x^2/{a**2:g} - y^2/{b**2:g} + z^2/{c**2:g} = -1: max residual {worst:.2e}")
    out = {"dot_example": {"alpha": alpha, "beta": beta, "A": A.to_dict(), "B": B.to_dict(),
                           "A_dot_B": w.to_dict()},
           "ruled_lines": {"a": a, "b": b, "c": c, "alpha": al, "lines": lines, "max_residual": worst}}
    return out, EXIT_OK


HANDLERS = {"classify": cmd_classify, "section": cmd_section, "solve": cmd_solve,
            "csd": cmd_csd, "verify": cmd_verify, "demo": cmd_demo}


def build_parser():
    p = argparse.ArgumentParser(prog="jayvec", description=__doc__.splitlines()[0])
    p.add_argument("command", choices=COMMANDS)
    p.add_argument("--input", default=None, help="job JSON file, or - for stdin (default: stdin; demo needs none)")
    p.add_argument("--output", default="-", help="report JSON file, or - for stdout")
    p.add_argument("--tol", type=float, default=None, help="analytic residual tolerance (default 1e-10)")
    p.add_argument("--seed", type=int, default=None, help="seed for residual sample points")
    p.add_argument("--emit-points", type=int, default=0, metavar="N",
                   help="write N conic/quadric samples as CSV")
    p.add_argument("--csv", default="points.csv", help="CSV path for --emit-points (- for stdout)")
    return p


def run(argv=None, stdout=None, stderr=None):
    """Run one command; returns the process exit code."""
    stdout = sys.stdout if stdout is None else stdout
    stderr = sys.stderr if stderr is None else stderr
    args = build_parser().parse_args(argv)
    try:
        if args.command == "demo" and args.input is None:
            doc = {}
        else:
            doc = _load(args.input)
        job = Job(args.command, doc, args)
        out, code = HANDLERS[args.command](job)
    except InputError as exc:
        print(f"jayvec {args.command}: {exc}", file=stderr)
        return EXIT_VALIDATION
    except (JayvecError, ValueError, OverflowError) as exc:
        print(f"jayvec {args.command}: {type(exc).__name__}: {exc}", file=stderr)
        return EXIT_VALIDATION
    out = {"command": args.command, **out}
    text = json.dumps(out, indent=2)
    if args.output in (None, "-"):
        print(text, file=stdout)
    else:
        with open(args.output, "w") as fh:
            fh.write(text + "\n")
    for line in job.summary:
        print(line, file=stderr)
    return code


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
