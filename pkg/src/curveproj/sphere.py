"""Multivalued closest-point projections on the full unit sphere.

Outside an open hemisphere the closest-point map onto a great circle stops
being single-valued: the two points orthogonal to the circle's plane are
equidistant from all of it.  Working in ambient unit-vector coordinates
(where orthogonality is a scalar product) this module builds the great
circle L_theta through a base point, the polar circle M of points at
quarter-circle distance from the base, the angle correspondence psi pairing
each antipodal pair of M with the unique direction theta whose projection
degenerates to the whole line, and interval representations of the
degenerate-angle sets of subsets of M.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .geometry import TWO_PI, GeodesicAngle, SurfacePoint

# The degenerate locus has measure zero: whole-line hits are detected by
# construction, not by chance, so the tolerance is essentially exact.
ORTHOGONAL_TOL = 1e-12

SINGLETON = "singleton"
WHOLE_LINE = "whole_line"


@dataclass(frozen=True)
class AmbientPoint:
    """A unit vector in 3-space (checked to 1e-12)."""

    x: float
    y: float
    z: float

    def __post_init__(self):
        n = self.x * self.x + self.y * self.y + self.z * self.z
        if abs(n - 1.0) > 1e-12:
            raise ValueError(f"not a unit vector: |q|^2 = {n!r}")

    @classmethod
    def from_vector(cls, v) -> "AmbientPoint":
        v = np.asarray(v, dtype=float)
        norm = float(np.linalg.norm(v))
        if norm == 0.0:
            raise ValueError("cannot normalize the zero vector")
        return cls(float(v[0] / norm), float(v[1] / norm), float(v[2] / norm))

    def as_array(self) -> np.ndarray:
        return np.array([self.x, self.y, self.z])


@dataclass(frozen=True)
class MultiProjection:
    """Result of the set-valued projection: a single point of the line, or
    the whole line when the input is orthogonal to its plane."""

    kind: str
    point: AmbientPoint | None = None

    def __post_init__(self):
        if self.kind not in (SINGLETON, WHOLE_LINE):
            raise ValueError(f"unknown projection kind {self.kind!r}")
        if (self.point is None) != (self.kind == WHOLE_LINE):
            raise ValueError("a point is present exactly for singleton projections")


@dataclass(frozen=True)
class AngleSet:
    """Disjoint, sorted closed subintervals of [0, pi)."""

    intervals: tuple

    def __post_init__(self):
        ivs = tuple((float(lo), float(hi)) for lo, hi in self.intervals)
        prev = 0.0
        for lo, hi in ivs:
            if not 0.0 <= lo <= hi <= math.pi:
                raise ValueError(f"interval ({lo}, {hi}) leaves [0, pi)")
            if lo < prev:
                raise ValueError("intervals must be sorted and disjoint")
            prev = hi
        object.__setattr__(self, "intervals", ivs)

    def total_length(self) -> float:
        return sum(hi - lo for lo, hi in self.intervals)

    def contains(self, theta: float, tol: float = 0.0) -> bool:
        return any(lo - tol <= theta <= hi + tol for lo, hi in self.intervals)

    def complement(self) -> "AngleSet":
        gaps = []
        cursor = 0.0
        for lo, hi in self.intervals:
            if lo > cursor:
                gaps.append((cursor, lo))
            cursor = max(cursor, hi)
        if cursor < math.pi:
            gaps.append((cursor, math.pi))
        return AngleSet(tuple(gaps))


def tangent_frame(base: AmbientPoint) -> tuple[np.ndarray, np.ndarray]:
    """Deterministic orthonormal tangent basis (v0, w0) at the base point.

    v0 points along base x z-hat (falling back to x-hat at the poles of
    that construction) and w0 = base x v0, so directions rotate
    counter-clockwise as seen from outside along the base axis.
    """
    b = base.as_array()
    v0 = np.cross(b, np.array([0.0, 0.0, 1.0]))
    n = np.linalg.norm(v0)
    if n < 1e-12:
        v0 = np.array([1.0, 0.0, 0.0])
    else:
        v0 = v0 / n
    w0 = np.cross(b, v0)
    return v0, w0


def direction_vector(theta: GeodesicAngle, base: AmbientPoint) -> np.ndarray:
    """Unit tangent v_theta at the base point, theta counter-clockwise from v0."""
    v0, w0 = tangent_frame(base)
    return math.cos(theta.theta) * v0 + math.sin(theta.theta) * w0


def degenerate_point(theta: GeodesicAngle, base: AmbientPoint) -> AmbientPoint:
    """The point base x v_theta orthogonal to the whole line L_theta."""
    q = np.cross(base.as_array(), direction_vector(theta, base))
    return AmbientPoint.from_vector(q)


def multivalued_project(
    theta: GeodesicAngle, q: AmbientPoint, base: AmbientPoint
) -> MultiProjection:
    """Set-valued closest-point projection of q onto the great circle L_theta.

    L_theta is the full great circle through the base point with tangent
    v_theta.  If q is orthogonal to its plane (q = +-(base x v_theta), up
    to 1e-12) every point of the circle is equally close and the whole
    line is returned; otherwise the unique closest point is the normalized
    projection of q onto the plane spanned by base and v_theta.
    """
    v = direction_vector(theta, base)
    qv = q.as_array()
    along_base = float(qv @ base.as_array())
    along_dir = float(qv @ v)
    if abs(along_base) <= ORTHOGONAL_TOL and abs(along_dir) <= ORTHOGONAL_TOL:
        return MultiProjection(WHOLE_LINE)
    foot = along_base * base.as_array() + along_dir * v
    return MultiProjection(SINGLETON, AmbientPoint.from_vector(foot))


def psi(q: AmbientPoint, base: AmbientPoint) -> float:
    """The unique theta in [0, pi) with <q, v_theta> = 0, for q on the polar
    circle M of the base point.

    Antipodal points share their psi value, so psi descends to a bijection
    between antipodal pairs of M and directions.
    """
    qv = q.as_array()
    if abs(float(qv @ base.as_array())) > ORTHOGONAL_TOL:
        raise ValueError("psi is defined only on the polar circle of the base point")
    v0, w0 = tangent_frame(base)
    return math.atan2(-float(qv @ v0), float(qv @ w0)) % math.pi


def _as_matrix(points) -> np.ndarray:
    if isinstance(points, np.ndarray):
        return np.asarray(points, dtype=float)
    return np.array([p.as_array() for p in points])


def psi_values(points, base: AmbientPoint) -> np.ndarray:
    """Vectorized psi over points of M ((n, 3) array or AmbientPoint list)."""
    mat = _as_matrix(points)
    if np.any(np.abs(mat @ base.as_array()) > ORTHOGONAL_TOL):
        raise ValueError("psi is defined only on the polar circle of the base point")
    v0, w0 = tangent_frame(base)
    return np.arctan2(-(mat @ v0), mat @ w0) % math.pi


def polar_circle_arc(
    base: AmbientPoint, s_start: float, s_end: float, n: int
) -> np.ndarray:
    """n points of the arc cos(s) v0 + sin(s) w0, s in [s_start, s_end], on
    the polar circle M (endpoints included)."""
    if n < 2:
        raise ValueError(f"need at least 2 samples, got {n}")
    v0, w0 = tangent_frame(base)
    s = np.linspace(s_start, s_end, n)
    return np.cos(s)[:, None] * v0[None, :] + np.sin(s)[:, None] * w0[None, :]


def ambient_from_polar(point: SurfacePoint, base: AmbientPoint) -> AmbientPoint:
    """Unit-sphere chart: polar (r, phi) about the base to an ambient vector."""
    v0, w0 = tangent_frame(base)
    tangent = math.cos(point.phi) * v0 + math.sin(point.phi) * w0
    q = math.cos(point.r) * base.as_array() + math.sin(point.r) * tangent
    return AmbientPoint.from_vector(q)


def polar_from_ambient(q: AmbientPoint, base: AmbientPoint) -> SurfacePoint:
    """Inverse chart; the angle of the base point itself is canonically 0."""
    v0, w0 = tangent_frame(base)
    qv = q.as_array()
    r = math.acos(max(-1.0, min(1.0, float(qv @ base.as_array()))))
    if r == 0.0:
        return SurfacePoint(0.0)
    phi = math.atan2(float(qv @ w0), float(qv @ v0)) % TWO_PI
    return SurfacePoint(r, phi)


def exceptional_sets(
    points, base: AmbientPoint, n_theta: int
) -> tuple[AngleSet, AngleSet]:
    """Degenerate and regular direction sets for a subset A of M.

    The first AngleSet is the closure of psi(A) represented as merged
    intervals: psi values closer than the grid resolution pi/n_theta are
    clustered, each cluster contributing [min, max] (degenerate intervals
    for isolated values).  The second is its complement in [0, pi); for
    directions there the projection of A is a finite point set.
    """
    if n_theta < 1:
        raise ValueError(f"n_theta must be >= 1, got {n_theta}")
    psis = np.sort(psi_values(points, base))
    if psis.size == 0:
        empty = AngleSet(())
        return empty, empty.complement()
    gap = math.pi / n_theta
    intervals = []
    lo = hi = float(psis[0])
    for value in psis[1:]:
        value = float(value)
        if value - hi <= gap:
            hi = value
        else:
            intervals.append((lo, hi))
            lo = hi = value
    intervals.append((lo, hi))
    degenerate = AngleSet(tuple(intervals))
    return degenerate, degenerate.complement()


def write_scan_csv(path, thetas, kinds) -> None:
    """Serialize a direction scan as `theta,kind` rows."""
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write("theta,kind\n")
        for theta, kind in zip(thetas, kinds):
            fh.write(f"{theta:.17g},{kind}\n")


def write_intervals_csv(path, angle_set: AngleSet) -> None:
    """Serialize an AngleSet as `start,end` rows."""
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write("start,end\n")
        for lo, hi in angle_set.intervals:
            fh.write(f"{lo:.17g},{hi:.17g}\n")
