"""Ambient-embedding oracles, independent of the package's polar formulas.

The hyperbolic plane is checked through the upper hyperboloid sheet in
Minkowski 3-space, the sphere through unit vectors in Euclidean 3-space.
Only unit curvatures are covered; that is all the tests need.
"""

import math

import numpy as np


def hyperboloid_point(r, phi):
    """Polar (r, phi) about the base point (1, 0, 0) of x0^2 - x1^2 - x2^2 = 1."""
    return np.array([math.cosh(r), math.sinh(r) * math.cos(phi), math.sinh(r) * math.sin(phi)])


def hyperboloid_distance(r1, phi1, r2, phi2):
    a = hyperboloid_point(r1, phi1)
    b = hyperboloid_point(r2, phi2)
    mink = a[0] * b[0] - a[1] * b[1] - a[2] * b[2]
    return math.acosh(max(mink, 1.0))


def sphere_point(r, phi):
    """Polar (r, phi) about the base point (0, 0, 1) of the unit sphere."""
    return np.array([math.sin(r) * math.cos(phi), math.sin(r) * math.sin(phi), math.cos(r)])


def sphere_distance(r1, phi1, r2, phi2):
    dot = float(sphere_point(r1, phi1) @ sphere_point(r2, phi2))
    return math.acos(max(-1.0, min(1.0, dot)))


def planar_distance(r1, phi1, r2, phi2):
    a = np.array([r1 * math.cos(phi1), r1 * math.sin(phi1)])
    b = np.array([r2 * math.cos(phi2), r2 * math.sin(phi2)])
    return float(np.linalg.norm(a - b))


def ambient_distance(r1, phi1, r2, phi2, curvature):
    """Dispatcher for the unit-curvature branches -1, 0, +1."""
    if curvature == -1.0:
        return hyperboloid_distance(r1, phi1, r2, phi2)
    if curvature == 1.0:
        return sphere_distance(r1, phi1, r2, phi2)
    if curvature == 0.0:
        return planar_distance(r1, phi1, r2, phi2)
    raise ValueError(f"oracle only covers unit curvatures, got {curvature}")
