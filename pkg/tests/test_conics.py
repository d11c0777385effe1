import io
import math

import numpy as np
import pytest

from jayvec.conics import (Branch, ConicKind, CsdPair, ConicImplicit2D, asymptote_directions,
                           conic_point, delta1, eccentricity, implicit_form, plane_frame,
                           polar_reciprocal, reciprocal_pair, write_points_csv)
from jayvec.dirvec import boost_csd, principal_axes, rotate_csd
from jayvec.errors import DegeneratePairError

from util import random_pair, random_rotation

KINDS = list(ConicKind)
RHS = {ConicKind.ELLIPSE: 1.0, ConicKind.HYPERBOLA_H: 1.0, ConicKind.HYPERBOLA_H_PRIME: -1.0}


def tangency_residual(K, rhs, u):
    """Relative discriminant of x.Kx = rhs restricted to the line u.x = 1."""
    x0 = u / (u @ u)
    d = np.array([-u[1], u[0]])
    A, B, C = d @ K @ d, 2 * x0 @ K @ d, x0 @ K @ x0 - rhs
    return abs(B * B - 4 * A * C) / (B * B + abs(4 * A * C))


def test_reciprocal_unit_pair():
    a_s, b_s = reciprocal_pair(CsdPair([1, 0], [0, 1]))
    assert np.allclose(a_s, [1, 0, 0]) and np.allclose(b_s, [0, 1, 0])


def test_reciprocal_axis_pair():
    a_s, b_s = reciprocal_pair(CsdPair([4, 0], [0, 0.5]))
    assert np.allclose(a_s, [0.25, 0, 0]) and np.allclose(b_s, [0, 2, 0])


def test_reciprocal_matrix_inverse_oracle():
    pair = CsdPair([2, 1], [1, 3])
    assert delta1(pair) == pytest.approx(5.0)
    inv = np.linalg.inv(np.array([[2.0, 1.0], [1.0, 3.0]]).T)
    a_s, b_s = reciprocal_pair(pair)
    assert np.allclose(a_s[:2], inv[0]) and np.allclose(b_s[:2], inv[1])
    assert np.allclose(a_s, [0.6, -0.2, 0]) and np.allclose(b_s, [-0.2, 0.4, 0])


def test_reciprocal_random_3d(rng):
    for _ in range(50):
        a, b = random_pair(rng)
        a_s, b_s = reciprocal_pair(CsdPair(a, b))
        assert np.allclose([a_s @ a, a_s @ b, b_s @ a, b_s @ b], [1, 0, 0, 1], atol=1e-10)
        n = np.cross(a, b)
        assert abs(a_s @ n) < 1e-10 * np.linalg.norm(n) * np.linalg.norm(a_s)


def test_parallel_pair_rejected():
    with pytest.raises(DegeneratePairError):
        CsdPair([1, 1, 0], [2, 2, 0])


def test_conic_point_at_zero():
    pair = CsdPair([1, 2, 0], [-1, 0.5, 0])
    assert np.array_equal(conic_point(pair, ConicKind.ELLIPSE, theta=0.0), pair.a)
    assert np.array_equal(conic_point(pair, ConicKind.HYPERBOLA_H, Branch.PLUS, 0.0), pair.a)
    assert np.array_equal(conic_point(pair, ConicKind.HYPERBOLA_H, Branch.MINUS, 0.0), -pair.a)
    assert np.array_equal(conic_point(pair, ConicKind.HYPERBOLA_H_PRIME, Branch.PLUS, 0.0), pair.b)


def test_axis_aligned_forms():
    pair = CsdPair([3, 0], [0, 2])
    f = implicit_form(pair, ConicKind.ELLIPSE)
    assert (f.cxx, f.cxy, f.cyy, f.rhs) == pytest.approx((1 / 9, 0, 1 / 4, 1))
    f = implicit_form(pair, ConicKind.HYPERBOLA_H)
    assert (f.cxx, f.cxy, f.cyy, f.rhs) == pytest.approx((1 / 9, 0, -1 / 4, 1))
    f = implicit_form(pair, ConicKind.HYPERBOLA_H_PRIME)
    assert (f.cxx, f.cxy, f.cyy, f.rhs) == pytest.approx((1 / 9, 0, -1 / 4, -1))


@pytest.mark.parametrize("kind", KINDS)
def test_determinant_sign(rng, kind):
    for _ in range(20):
        a, b = random_pair(rng, planar=True)
        f = implicit_form(CsdPair(a, b), kind)
        eig = np.linalg.eigvalsh(f.matrix())
        if kind is ConicKind.ELLIPSE:
            assert f.determinant() > 0 and eig.min() > 0
        else:
            assert f.determinant() < 0 and eig[0] < 0 < eig[1]
        # raw coefficients have determinant +-delta1^2; scaling each by 1/delta1^2 leaves +-1/delta1^2
        d = delta1(CsdPair(a, b))
        assert abs(f.determinant()) == pytest.approx(1 / d ** 2, rel=1e-10)


@pytest.mark.parametrize("kind", KINDS)
def test_sampled_points_on_form(rng, kind):
    for _ in range(20):
        pair = CsdPair(*random_pair(rng))
        f = implicit_form(pair, kind)
        theta = np.linspace(0, 2 * math.pi, 100, endpoint=False)
        if kind is not ConicKind.ELLIPSE:
            theta = np.linspace(-2, 2, 100)
        for branch in Branch:
            pts = conic_point(pair, kind, branch, theta)
            assert np.abs(f.residual(pts)).max() <= 1e-10 * np.abs(f.evaluate(pts)).max()
            assert f.rhs == RHS[kind]


def test_asymptotes_simple():
    u, v = asymptote_directions(CsdPair([1, 0], [0, 1]))
    assert np.allclose(u, [1, 1, 0]) and np.allclose(v, [1, -1, 0])


def test_rectangular_asymptotes_orthogonal(rng):
    Q = random_rotation(rng)
    u, v = asymptote_directions(CsdPair(2.5 * Q[:, 0], 2.5 * Q[:, 1]))
    assert abs(u @ v) < 1e-12


def test_asymptote_limit(rng):
    for _ in range(10):
        pair = CsdPair(*random_pair(rng))
        u, v = asymptote_directions(pair)
        r = conic_point(pair, ConicKind.HYPERBOLA_H, Branch.PLUS, 20.0)
        assert np.allclose(r / np.linalg.norm(r), u / np.linalg.norm(u), atol=1e-6)
        r = conic_point(pair, ConicKind.HYPERBOLA_H_PRIME, Branch.PLUS, 20.0)
        assert np.allclose(r / np.linalg.norm(r), u / np.linalg.norm(u), atol=1e-6)
        r = conic_point(pair, ConicKind.HYPERBOLA_H, Branch.PLUS, -20.0)
        assert np.allclose(r / np.linalg.norm(r), v / np.linalg.norm(v), atol=1e-6)


def test_eccentricity_examples():
    assert eccentricity(CsdPair([1, 0], [0, 1]), ConicKind.ELLIPSE) == pytest.approx(0.0, abs=1e-8)
    assert eccentricity(CsdPair([1, 0], [0, 1]), ConicKind.HYPERBOLA_H) == pytest.approx(math.sqrt(2))
    e = eccentricity(CsdPair([2, 0], [0, 1]), ConicKind.HYPERBOLA_H)
    # focus at distance c with c^2 = p^2 + q^2, e = c / p
    assert e == pytest.approx(math.sqrt(5) / 2, rel=1e-14)
    assert e == pytest.approx(math.sqrt(1 + 1 / 4), rel=1e-14)
    assert eccentricity(CsdPair([2, 0], [0, 1]), ConicKind.HYPERBOLA_H_PRIME) == pytest.approx(math.sqrt(5))


def test_eccentricity_focus_oracle_random(rng):
    for _ in range(20):
        pair = CsdPair(*random_pair(rng, planar=True))
        e = eccentricity(pair, ConicKind.ELLIPSE)
        assert 0 <= e < 1
        # semi-axes from extreme radii of the sampled ellipse
        pts = conic_point(pair, ConicKind.ELLIPSE, theta=np.linspace(0, 2 * math.pi, 20001))
        r = np.linalg.norm(pts, axis=1)
        assert e == pytest.approx(math.sqrt(1 - (r.min() / r.max()) ** 2), abs=1e-5)
        for kind in (ConicKind.HYPERBOLA_H, ConicKind.HYPERBOLA_H_PRIME):
            assert eccentricity(pair, kind) > 1


def test_eccentricity_h_transverse_is_vertex_distance(rng):
    for _ in range(10):
        pair = CsdPair(*random_pair(rng, planar=True))
        form = principal_axes(pair.jay())
        p, q = np.linalg.norm(form.p), np.linalg.norm(form.q)
        # closest approach of H to the centre is the transverse semi-axis
        pts = conic_point(pair, ConicKind.HYPERBOLA_H, Branch.PLUS, np.linspace(-6, 6, 200001))
        assert np.linalg.norm(pts, axis=1).min() == pytest.approx(p, rel=1e-6)
        assert eccentricity(pair, ConicKind.HYPERBOLA_H) == pytest.approx(math.hypot(p, q) / p)


def test_polar_reciprocity_principal_axes(rng):
    for _ in range(20):
        p, q = rng.uniform(0.3, 3.0, size=2)
        t = rng.uniform(0, 2 * math.pi, size=30)
        s = rng.uniform(-2, 2, size=30)
        cases = [
            (np.diag([1 / p**2, 1 / q**2]), 1.0, np.diag([p**2, q**2]), 1.0,
             np.column_stack([p * np.cos(t), q * np.sin(t)])),
            (np.diag([1 / p**2, -1 / q**2]), 1.0, np.diag([p**2, -q**2]), 1.0,
             np.column_stack([p * np.cosh(s), q * np.sinh(s)])),
            (np.diag([1 / p**2, -1 / q**2]), -1.0, np.diag([p**2, -q**2]), -1.0,
             np.column_stack([p * np.sinh(s), q * np.cosh(s)])),
        ]
        for K, rhs, Kd, rhsd, pts in cases:
            for u in pts:
                assert u @ K @ u == pytest.approx(rhs)
                assert tangency_residual(Kd, rhsd, u) <= 1e-9
            conic = ConicImplicit2D(K[0, 0], 0.0, K[1, 1], rhs, plane_frame(CsdPair([1, 0], [0, 1])))
            dual = polar_reciprocal(conic)
            assert np.allclose(dual.matrix(), Kd) and dual.rhs == rhsd


@pytest.mark.parametrize("kind", KINDS)
def test_polar_reciprocal_general_pair(rng, kind):
    for _ in range(20):
        pair = CsdPair(*random_pair(rng))
        conic = implicit_form(pair, kind)
        dual = polar_reciprocal(conic)
        theta = rng.uniform(-1.5, 1.5, size=10)
        for r in conic_point(pair, kind, Branch.PLUS, theta):
            u = conic.coords(r)
            assert tangency_residual(dual.matrix(), dual.rhs, u) <= 1e-9


def test_csd_tangency_fd(rng):
    h = 1e-6
    for _ in range(20):
        pair = CsdPair(*random_pair(rng))
        a, b = pair.a, pair.b

        def tangent(kind, t0):
            return (conic_point(pair, kind, Branch.PLUS, t0 + h) - conic_point(pair, kind, Branch.PLUS, t0 - h)) / (2 * h)

        def par(u, v):
            return np.linalg.norm(np.cross(u, v)) / (np.linalg.norm(u) * np.linalg.norm(v))

        assert par(tangent(ConicKind.ELLIPSE, 0.0), b) <= 1e-8
        assert par(tangent(ConicKind.ELLIPSE, math.pi / 2), a) <= 1e-8
        assert par(tangent(ConicKind.HYPERBOLA_H, 0.0), b) <= 1e-8
        assert par(tangent(ConicKind.HYPERBOLA_H_PRIME, 0.0), a) <= 1e-8


def test_rotated_and_boosted_pairs_share_form(rng):
    for _ in range(50):
        a, b = random_pair(rng)
        frame = plane_frame(CsdPair(a, b))
        phi = rng.uniform(-3, 3)
        ref = implicit_form(CsdPair(a, b), ConicKind.ELLIPSE)
        rot = implicit_form(CsdPair(*rotate_csd(a, b, phi)), ConicKind.ELLIPSE, frame)
        assert ref.is_proportional(rot)
        c, d = boost_csd(a, b, phi / 2)
        for kind in (ConicKind.HYPERBOLA_H, ConicKind.HYPERBOLA_H_PRIME):
            ref = implicit_form(CsdPair(a, b), kind)
            assert ref.is_proportional(implicit_form(CsdPair(c, d), kind, frame))


def test_is_proportional_rejects_different_curve():
    f = implicit_form(CsdPair([1, 0], [0, 1]), ConicKind.ELLIPSE)
    g = implicit_form(CsdPair([2, 0], [0, 1]), ConicKind.ELLIPSE)
    assert not f.is_proportional(g)
    h = implicit_form(CsdPair([1, 0], [0, 1]), ConicKind.HYPERBOLA_H_PRIME)
    assert not implicit_form(CsdPair([1, 0], [0, 1]), ConicKind.HYPERBOLA_H).is_proportional(h)


def test_frame_must_span_plane():
    pair = CsdPair([1, 0, 0], [0, 1, 0])
    with pytest.raises(ValueError):
        implicit_form(pair, ConicKind.ELLIPSE, frame=([1, 0, 0], [0, 0, 1]))


def test_csv_output(tmp_path):
    pair = CsdPair([1, 0], [0, 2])
    pts = conic_point(pair, ConicKind.ELLIPSE, theta=np.linspace(0, 1, 5))
    buf = io.StringIO()
    write_points_csv(pts, buf)
    lines = buf.getvalue().splitlines()
    assert lines[0] == "x,y,z" and len(lines) == 6
    path = tmp_path / "pts.csv"
    write_points_csv(pts, str(path))
    back = np.loadtxt(path, delimiter=",", skiprows=1)
    assert np.array_equal(back, pts)
