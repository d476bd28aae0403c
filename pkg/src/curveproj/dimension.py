"""Box-counting dimension and covered-length estimation for 1-d samples.

The box dimension stands in for the Hausdorff dimension here: it is never
smaller, computable from finite samples, and equal on the self-similar test
sets this package generates.  Boxes are anchored at 0 for determinism.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .geometry import GeodesicAngle, SurfaceModel, projection_values
from .fractal import PointCloud

# Saturation thresholds for the automatic scale ladder: occupancy growth
# below 5% per octave, or boxes resolving individual samples.
_GROWTH_FLOOR = 1.05
_OCCUPANCY_CAP = 0.5
_MAX_OCTAVES = 48
_MIN_SCALES = 4


@dataclass(frozen=True)
class DimensionEstimate:
    """Box-count table and the log-log regression through it.

    counts holds (epsilon, n_boxes) pairs in descending epsilon order;
    slope is the least-squares slope of log n_boxes against log(1/epsilon)
    over scale_range = (eps_min, eps_max); r_squared its fit quality,
    defined as 1 for an exact (e.g. constant) fit.
    """

    counts: tuple
    slope: float
    r_squared: float
    scale_range: tuple


@dataclass(frozen=True)
class MeasureEstimate:
    """Total length of the union of epsilon-boxes covering the sample."""

    epsilon: float
    covered_length: float


def occupied_boxes(values, epsilon: float) -> int:
    """Number of distinct indices floor(v / epsilon) over the sample."""
    values = np.asarray(values, dtype=float)
    return int(np.unique(np.floor(values / epsilon)).size)


def box_count_1d(values, epsilons) -> DimensionEstimate:
    """Box-count a sample of reals over the given scales.

    Parameters
    ----------
    values : array-like, nonempty
    epsilons : array-like
        At least 4 positive scales, sorted in descending order.

    Returns
    -------
    DimensionEstimate
        Counts per scale and the ordinary-least-squares slope of
        log n_boxes vs log(1/epsilon).
    """
    values = np.asarray(values, dtype=float)
    if values.size == 0:
        raise ValueError("values must be nonempty")
    eps = np.asarray(epsilons, dtype=float)
    if eps.size < _MIN_SCALES:
        raise ValueError(f"need at least {_MIN_SCALES} scales, got {eps.size}")
    if np.any(eps <= 0.0):
        raise ValueError("all scales must be positive")
    if np.any(np.diff(eps) >= 0.0):
        raise ValueError("scales must be strictly descending")
    counts = tuple((float(e), occupied_boxes(values, e)) for e in eps)
    x = np.log(1.0 / eps)
    y = np.log([n for _, n in counts])
    xm = x.mean()
    ym = y.mean()
    sxx = float(np.sum((x - xm) ** 2))
    slope = float(np.sum((x - xm) * (y - ym)) / sxx)
    sse = float(np.sum((y - (ym + slope * (x - xm))) ** 2))
    sst = float(np.sum((y - ym) ** 2))
    r_squared = 1.0 - sse / sst if sst > 0.0 else 1.0
    return DimensionEstimate(
        counts=counts,
        slope=slope,
        r_squared=r_squared,
        scale_range=(float(eps.min()), float(eps.max())),
    )


def measure_estimate_1d(values, epsilon: float) -> MeasureEstimate:
    """Length epsilon * (occupied boxes) of the covering at one scale."""
    if not epsilon > 0.0:
        raise ValueError(f"epsilon must be > 0, got {epsilon}")
    values = np.asarray(values, dtype=float)
    if values.size == 0:
        raise ValueError("values must be nonempty")
    return MeasureEstimate(float(epsilon), float(epsilon) * occupied_boxes(values, epsilon))


def auto_epsilons(values) -> list[float]:
    """Resolution-matched scale ladder for box counting.

    Starts at diameter/8 and halves per octave until occupancy saturates
    (growth below 5% per octave, or boxes starting to resolve individual
    samples), always keeping at least 4 scales.  Degenerate samples with
    zero diameter get a flat ladder below 1/8.
    """
    values = np.asarray(values, dtype=float)
    if values.size == 0:
        raise ValueError("values must be nonempty")
    diam = float(values.max() - values.min())
    base = diam if diam > 0.0 else 1.0
    eps = [base / 8.0]
    ns = [occupied_boxes(values, eps[0])]
    for k in range(1, _MAX_OCTAVES + 1):
        e = base / 8.0 / 2.0**k
        n = occupied_boxes(values, e)
        saturated = n < _GROWTH_FLOOR * ns[-1] or n >= _OCCUPANCY_CAP * values.size
        if saturated and len(eps) >= _MIN_SCALES:
            break
        eps.append(e)
        ns.append(n)
    return eps


def project_cloud(
    cloud: PointCloud,
    theta: GeodesicAngle,
    model: SurfaceModel,
    transformed: bool = False,
) -> np.ndarray:
    """Signed projection coordinates of every cloud point onto L_theta.

    Order is preserved; the transformed flag returns the chord coordinates
    instead of arc lengths.  Domain violations propagate from the geometry.
    """
    signed, chord = projection_values(theta.theta, cloud.r, cloud.phi, model)
    out = chord if transformed else signed
    return np.asarray(out, dtype=float)


def write_counts_csv(estimate: DimensionEstimate, path) -> None:
    """Serialize the (epsilon, n_boxes) table as `epsilon,n_boxes` rows."""
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write("epsilon,n_boxes\n")
        for eps, n in estimate.counts:
            fh.write(f"{eps:.17g},{n}\n")
