"""Finite point-cloud approximations of self-similar sets, pushed onto a surface.

Attractors of iterated function systems of planar similarities have a known
similarity dimension, which makes them the standard ground truth for
empirical projection experiments.  The clouds are transported from the unit
square to the surface through the exponential map at the base point, which
in polar coordinates is simply (rho, phi) -> (scale * rho, phi) and is
bi-Lipschitz on compact sets, so the dimension label survives the trip.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .geometry import TWO_PI, SurfaceModel, SurfacePoint

MAX_ATTRACTOR_POINTS = 10**7

_SQUARE_CENTER = np.array([0.5, 0.5])


@dataclass(frozen=True)
class IFSSpec:
    """An iterated function system of planar similarities x -> ratio*x + t.

    maps is a tuple of (ratio, (tx, ty)) contractions whose images of the
    unit square must stay inside it with pairwise disjoint interiors (the
    open set condition, checked at depth 1).  expected_dimension must equal
    log(#maps)/log(1/ratio) when all ratios coincide.
    """

    maps: tuple
    depth: int
    expected_dimension: float

    def __post_init__(self):
        maps = tuple((float(ratio), (float(t[0]), float(t[1]))) for ratio, t in self.maps)
        object.__setattr__(self, "maps", maps)
        if not maps:
            raise ValueError("an IFS needs at least one map")
        if self.depth < 1:
            raise ValueError(f"depth must be >= 1, got {self.depth}")
        boxes = []
        for ratio, (tx, ty) in maps:
            if not 0.0 < ratio < 1.0:
                raise ValueError(f"contraction ratio must lie in (0, 1), got {ratio}")
            if tx < 0.0 or ty < 0.0 or tx + ratio > 1.0 or ty + ratio > 1.0:
                raise ValueError(
                    f"map image [{tx}, {tx + ratio}] x [{ty}, {ty + ratio}] leaves "
                    "the unit square"
                )
            boxes.append((tx, tx + ratio, ty, ty + ratio))
        for i in range(len(boxes)):
            for j in range(i + 1, len(boxes)):
                ax0, ax1, ay0, ay1 = boxes[i]
                bx0, bx1, by0, by1 = boxes[j]
                if min(ax1, bx1) > max(ax0, bx0) and min(ay1, by1) > max(ay0, by0):
                    raise ValueError(
                        f"maps {i} and {j} have overlapping images; the open set "
                        "condition fails"
                    )
        ratios = {ratio for ratio, _ in maps}
        if len(ratios) == 1:
            want = similarity_dimension(len(maps), next(iter(ratios)))
            if abs(self.expected_dimension - want) > 1e-12 * max(1.0, abs(want)):
                raise ValueError(
                    f"expected_dimension {self.expected_dimension} disagrees with "
                    f"log(n)/log(1/ratio) = {want!r}"
                )


@dataclass(frozen=True)
class PointCloud:
    """A finite set of surface points with a dimension label.

    Stored as parallel radius/angle arrays; point(i) materializes a single
    SurfacePoint.  The arrays are frozen read-only.
    """

    r: np.ndarray
    phi: np.ndarray
    label: str = ""
    expected_dimension: float = math.nan

    def __post_init__(self):
        r = np.array(self.r, dtype=float)
        phi = np.array(self.phi, dtype=float)
        if r.ndim != 1 or phi.shape != r.shape:
            raise ValueError("r and phi must be matching 1-d arrays")
        if np.any(r < 0.0):
            raise ValueError("all radii must be >= 0")
        phi = np.where(r == 0.0, 0.0, phi % TWO_PI)
        r.flags.writeable = False
        phi.flags.writeable = False
        object.__setattr__(self, "r", r)
        object.__setattr__(self, "phi", phi)

    def __len__(self) -> int:
        return len(self.r)

    def point(self, i: int) -> SurfacePoint:
        return SurfacePoint(float(self.r[i]), float(self.phi[i]))


def similarity_dimension(n_maps: int, ratio: float) -> float:
    """log(n)/log(1/ratio), the dimension of an equal-ratio attractor."""
    return math.log(n_maps) / math.log(1.0 / ratio)


def cantor_maps(ratio: float = 1.0 / 3.0) -> tuple:
    """Two maps keeping the left and right ends of the bottom edge."""
    return ((ratio, (0.0, 0.0)), (ratio, (1.0 - ratio, 0.0)))


def corner_maps(n_corners: int, ratio: float) -> tuple:
    """Maps toward 2, 3 or 4 corners of the unit square."""
    corners = (
        (0.0, 0.0),
        (1.0 - ratio, 0.0),
        (0.0, 1.0 - ratio),
        (1.0 - ratio, 1.0 - ratio),
    )
    if not 2 <= n_corners <= 4:
        raise ValueError(f"n_corners must be 2, 3 or 4, got {n_corners}")
    return tuple((ratio, c) for c in corners[:n_corners])


def cantor_spec(depth: int, ratio: float = 1.0 / 3.0) -> IFSSpec:
    return IFSSpec(cantor_maps(ratio), depth, similarity_dimension(2, ratio))


def corner_dust_spec(n_corners: int, ratio: float, depth: int) -> IFSSpec:
    return IFSSpec(
        corner_maps(n_corners, ratio), depth, similarity_dimension(n_corners, ratio)
    )


def generate_attractor(spec: IFSSpec) -> np.ndarray:
    """All depth-fold compositions of the maps applied to the square center.

    Returns an (n_maps**depth, 2) array ordered lexicographically by the
    composition index string, outermost map first.  Purely deterministic.
    """
    total = len(spec.maps) ** spec.depth
    if total > MAX_ATTRACTOR_POINTS:
        raise ValueError(
            f"{len(spec.maps)}^{spec.depth} = {total} points exceeds the "
            f"{MAX_ATTRACTOR_POINTS} cap"
        )
    pts = _SQUARE_CENTER[None, :].copy()
    for _ in range(spec.depth):
        pts = np.concatenate(
            [ratio * pts + np.array(t) for ratio, t in spec.maps], axis=0
        )
    return pts


def push_to_surface(
    planar: np.ndarray,
    model: SurfaceModel,
    scale: float,
    label: str = "",
    expected_dimension: float = math.nan,
) -> PointCloud:
    """Transport planar points through the exponential map at the base point.

    A planar point with polar form (rho, phi) about the square center maps
    to the surface point (scale * rho, phi).  The radial factor must keep
    every image inside the domain ball.
    """
    if not scale > 0.0:
        raise ValueError(f"scale must be > 0, got {scale}")
    planar = np.asarray(planar, dtype=float)
    dx = planar[:, 0] - _SQUARE_CENTER[0]
    dy = planar[:, 1] - _SQUARE_CENTER[1]
    r = scale * np.hypot(dx, dy)
    worst = float(r.max()) if len(r) else 0.0
    if worst > model.domain_radius:
        raise ValueError(
            f"scaled cloud leaves the domain: max radius {worst:.6g} > "
            f"m = {model.domain_radius}"
        )
    phi = np.arctan2(dy, dx) % TWO_PI
    return PointCloud(r, phi, label=label, expected_dimension=expected_dimension)


def fit_scale(planar: np.ndarray, model: SurfaceModel, fraction: float = 0.99) -> float:
    """Largest radial factor keeping the cloud within fraction * m of the base."""
    planar = np.asarray(planar, dtype=float)
    rho = np.hypot(planar[:, 0] - _SQUARE_CENTER[0], planar[:, 1] - _SQUARE_CENTER[1])
    top = float(rho.max()) if len(rho) else 0.0
    if top == 0.0:
        return 1.0
    return fraction * model.domain_radius / top


def write_cloud_csv(cloud: PointCloud, path) -> None:
    """Serialize a cloud as `r,phi` rows with 17 significant digits."""
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write("r,phi\n")
        for r, phi in zip(cloud.r, cloud.phi):
            fh.write(f"{r:.17g},{phi:.17g}\n")
