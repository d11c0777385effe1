"""Random generators shared by the test modules."""

import numpy as np


def random_rotation(rng):
    q, r = np.linalg.qr(rng.standard_normal((3, 3)))
    q = q * np.sign(np.diag(r))
    if np.linalg.det(q) < 0:
        q[:, 0] = -q[:, 0]
    return q


def random_spd(rng, lo=0.25, hi=4.0):
    R = random_rotation(rng)
    return R @ np.diag(rng.uniform(lo, hi, 3)) @ R.T


def random_one_sheet(rng, lo=0.25, hi=4.0):
    """Symmetric matrix with eigenvalue signs (+, +, -)."""
    R = random_rotation(rng)
    w = rng.uniform(lo, hi, 3) * np.array([1.0, 1.0, -1.0])
    return R @ np.diag(w) @ R.T


def random_two_sheet(rng, lo=0.25, hi=4.0):
    """Symmetric matrix with eigenvalue signs (-, -, +)."""
    return -random_one_sheet(rng, lo, hi)


def random_triad(rng, max_cond=1e3):
    while True:
        T = rng.standard_normal((3, 3))
        if np.linalg.cond(T) < max_cond:
            return T


def random_pair(rng, planar=False):
    while True:
        a, b = rng.standard_normal(3), rng.standard_normal(3)
        if planar:
            a[2] = b[2] = 0.0
        if np.linalg.norm(np.cross(a, b)) > 0.1 * np.linalg.norm(a) * np.linalg.norm(b):
            return a, b


def rel_err(x, y):
    x, y = np.asarray(x, dtype=float), np.asarray(y, dtype=float)
    return float(np.abs(x - y).max() / max(np.abs(y).max(), 1e-300))
