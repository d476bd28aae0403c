"""Command-line driver: projections, transversality reports, angle sweeps,
and the whole-sphere counterexample scan.

Subcommands
-----------
project         project one polar point onto a line and print the result
transversality  sample the decomposition constants and scan for violations
sweep           project a fractal cloud over a theta grid, estimating the
                box dimension and covered length per angle (CSV, optional SVG)
counterexample  scan projections of an arc of the polar great circle
dimension       box-count a CSV of reals

The CURVEPROJ_THREADS environment variable caps worker threads for the
sweep's angle grid; rows are always written in grid order, so output bytes
do not depend on the thread count.
"""

from __future__ import annotations

import argparse
import math
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .dimension import auto_epsilons, box_count_1d, measure_estimate_1d, project_cloud, write_counts_csv
from .fractal import IFSSpec, cantor_spec, corner_dust_spec, fit_scale, generate_attractor, push_to_surface
from .geometry import GeodesicAngle, SurfaceModel, SurfacePoint, signed_projection
from .sphere import (
    AmbientPoint,
    exceptional_sets,
    polar_circle_arc,
    tangent_frame,
    write_intervals_csv,
    write_scan_csv,
)
from .transversality import check_definition

# paper-style equatorial base point for the counterexample scan
_COUNTEREXAMPLE_BASE = (0.0, 1.0, 0.0)

_FRACTAL_PRESETS = {
    "cantor": dict(corners=None, ratio=1.0 / 3.0, depth=10),
    "three-corner": dict(corners=3, ratio=0.2, depth=10),
    "four-corner": dict(corners=4, ratio=0.315, depth=7),
}


@dataclass(frozen=True)
class SweepConfig:
    """Everything a sweep needs; identical configs give identical bytes."""

    curvature: float
    domain_radius: float
    ifs: IFSSpec
    scale: float | None
    n_theta: int
    epsilons: tuple | None
    seed: int
    output_path: str
    svg_path: str | None = None
    label: str = ""

    def __post_init__(self):
        if self.n_theta < 8:
            raise ValueError(f"n_theta must be >= 8, got {self.n_theta}")


@dataclass(frozen=True)
class SweepRow:
    theta: float
    dim_estimate: float
    r_squared: float
    measure_estimate: float
    n_points: int


def _worker_count(n_items: int) -> int:
    env = os.environ.get("CURVEPROJ_THREADS", "").strip()
    if env:
        workers = int(env)
        if workers < 1:
            raise ValueError(f"CURVEPROJ_THREADS must be >= 1, got {env}")
    else:
        workers = os.cpu_count() or 1
    return max(1, min(workers, n_items))


def _parallel_map(fn, items: list) -> list:
    workers = _worker_count(len(items))
    if workers == 1:
        return [fn(item) for item in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))


def theta_grid(n_theta: int) -> np.ndarray:
    """Midpoint grid theta_i = pi (i + 1/2) / n, staying inside (0, pi)."""
    return (np.arange(n_theta) + 0.5) * (math.pi / n_theta)


def run_sweep(config: SweepConfig):
    """Project the configured cloud over the theta grid.

    Returns (rows, cloud); rows are in grid order regardless of the worker
    count.
    """
    model = SurfaceModel(config.curvature, config.domain_radius)
    planar = generate_attractor(config.ifs)
    scale = config.scale if config.scale is not None else fit_scale(planar, model)
    cloud = push_to_surface(
        planar,
        model,
        scale,
        label=config.label,
        expected_dimension=config.ifs.expected_dimension,
    )

    def row(theta_val: float) -> SweepRow:
        values = project_cloud(cloud, GeodesicAngle(theta_val), model)
        eps = list(config.epsilons) if config.epsilons is not None else auto_epsilons(values)
        est = box_count_1d(values, eps)
        meas = measure_estimate_1d(values, est.scale_range[0])
        return SweepRow(
            theta=theta_val,
            dim_estimate=est.slope,
            r_squared=est.r_squared,
            measure_estimate=meas.covered_length,
            n_points=len(values),
        )

    rows = _parallel_map(row, [float(t) for t in theta_grid(config.n_theta)])
    return rows, cloud


def write_rows_csv(path, rows) -> None:
    """Sweep rows with 17 significant digits and LF line endings."""
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write("theta,dim_estimate,r_squared,measure_estimate,n_points\n")
        for row in rows:
            fh.write(
                f"{row.theta:.17g},{row.dim_estimate:.17g},{row.r_squared:.17g},"
                f"{row.measure_estimate:.17g},{row.n_points}\n"
            )


def write_sweep_svg(path, rows, reference: float) -> None:
    """Dimension-vs-angle polyline with a horizontal reference line,
    fixed 800x400 viewport."""
    width, height = 800, 400
    left, right, top, bottom = 55.0, 15.0, 15.0, 35.0
    dims = [row.dim_estimate for row in rows]
    y_top = max(max(dims, default=0.0), reference, 0.1) * 1.15
    x_span = width - left - right
    y_span = height - top - bottom

    def sx(theta: float) -> float:
        return left + theta / math.pi * x_span

    def sy(value: float) -> float:
        return top + (1.0 - value / y_top) * y_span

    points = " ".join(f"{sx(row.theta):.2f},{sy(row.dim_estimate):.2f}" for row in rows)
    ref_y = sy(reference)
    lines = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}">',
        f'<rect width="{width}" height="{height}" fill="white"/>',
        f'<line x1="{left}" y1="{top}" x2="{left}" y2="{height - bottom}" stroke="black"/>',
        f'<line x1="{left}" y1="{height - bottom}" x2="{width - right}" '
        f'y2="{height - bottom}" stroke="black"/>',
        f'<line x1="{left}" y1="{ref_y:.2f}" x2="{width - right}" y2="{ref_y:.2f}" '
        f'stroke="firebrick" stroke-dasharray="6 4"/>',
        f'<polyline points="{points}" fill="none" stroke="steelblue" stroke-width="1.5"/>',
        f'<text x="{left - 45}" y="{top + 10}" font-size="12">{y_top:.2f}</text>',
        f'<text x="{left - 45}" y="{height - bottom}" font-size="12">0</text>',
        f'<text x="{left - 45}" y="{ref_y + 4:.2f}" font-size="12" '
        f'fill="firebrick">{reference:.3f}</text>',
        f'<text x="{left}" y="{height - bottom + 16}" font-size="12">theta = 0</text>',
        f'<text x="{width - right - 60}" y="{height - bottom + 16}" font-size="12">pi</text>',
        "</svg>",
    ]
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write("\n".join(lines) + "\n")


def classify_arc_directions(arc_points: np.ndarray, base: AmbientPoint, thetas) -> list[str]:
    """Classify the projection of a connected arc of M per direction.

    The inner products <q, v_theta> over the arc decide everything: a sign
    change (or an exact zero) means the arc meets the point orthogonal to
    the whole line; a uniform sign collapses the arc to the single point
    +-v_theta.
    """
    v0, w0 = tangent_frame(base)
    a = arc_points @ v0
    b = arc_points @ w0
    kinds = []
    for theta in thetas:
        inner = math.cos(theta) * a + math.sin(theta) * b
        lo = float(inner.min())
        hi = float(inner.max())
        kinds.append("whole_line" if lo <= 0.0 <= hi else "point")
    return kinds


def _build_ifs(name: str, ratio: float | None, depth: int | None) -> IFSSpec:
    preset = _FRACTAL_PRESETS[name]
    ratio = preset["ratio"] if ratio is None else ratio
    depth = preset["depth"] if depth is None else depth
    if preset["corners"] is None:
        return cantor_spec(depth, ratio)
    return corner_dust_spec(preset["corners"], ratio, depth)


def _parse_epsilons(text: str):
    if text == "auto":
        return None
    return tuple(float(tok) for tok in text.split(",") if tok.strip())


def _read_values(path) -> list[float]:
    values = []
    with open(path, "r", encoding="utf-8") as fh:
        for i, line in enumerate(fh):
            token = line.strip().split(",")[0]
            if not token:
                continue
            try:
                values.append(float(token))
            except ValueError:
                if i == 0:
                    continue  # header line
                raise ValueError(f"{path}:{i + 1}: not a number: {token!r}") from None
    if not values:
        raise ValueError(f"{path}: no numeric values found")
    return values


# --- subcommands ------------------------------------------------------------


def cmd_project(ns) -> int:
    model = SurfaceModel(ns.curvature, ns.domain_radius)
    result = signed_projection(
        GeodesicAngle(ns.theta), SurfacePoint(ns.r, ns.phi), model
    )
    print(f"signed_coordinate = {result.signed_coordinate:.12g}")
    print(f"transformed = {result.transformed:.12g}")
    print(f"incidence_angle = {result.incidence_angle:.12g}")
    point = result.projected_point
    print(f"projected_point: r = {point.r:.12g}, phi = {point.phi:.12g}")
    return 0


def cmd_transversality(ns) -> int:
    model = SurfaceModel(ns.curvature, ns.domain_radius)
    report = check_definition(model, ns.n_pairs, ns.n_thetas, ns.max_order, ns.seed)
    print(
        f"c_hat={report.c_hat:.6g}, C_hat={report.C_hat:.6g}, "
        f"c_analytic={report.c_analytic:.6g}, C_analytic={report.C_analytic:.6g}, "
        f"violations={len(report.violations)}"
    )
    if ns.out:
        with open(ns.out, "w", encoding="utf-8", newline="") as fh:
            fh.write("quantity,value\n")
            fh.write(f"c_hat,{report.c_hat:.17g}\n")
            fh.write(f"C_hat,{report.C_hat:.17g}\n")
            fh.write(f"c_analytic,{report.c_analytic:.17g}\n")
            fh.write(f"C_analytic,{report.C_analytic:.17g}\n")
            fh.write(f"c_prime,{report.c_prime:.17g}\n")
            fh.write(f"sample_count,{report.sample_count}\n")
            fh.write(f"theta_count,{report.theta_count}\n")
            fh.write(f"seed,{report.seed}\n")
            fh.write(f"violations,{len(report.violations)}\n")
            for order, bound in enumerate(report.derivative_bounds, start=1):
                fh.write(f"derivative_bound_{order},{bound:.17g}\n")
            fh.write(f"point_tilde_derivative_sup,{report.point_tilde_derivative_sup:.17g}\n")
            fh.write(f"point_tilde_derivative_limit,{report.point_tilde_derivative_limit:.17g}\n")
            fh.write(f"point_derivative_sup,{report.point_derivative_sup:.17g}\n")
            fh.write(f"point_derivative_limit,{report.point_derivative_limit:.17g}\n")
    return 0 if not report.violations else 1


def cmd_sweep(ns) -> int:
    config = SweepConfig(
        curvature=ns.curvature,
        domain_radius=ns.domain_radius,
        ifs=_build_ifs(ns.fractal, ns.ratio, ns.depth),
        scale=ns.scale,
        n_theta=ns.n_theta,
        epsilons=_parse_epsilons(ns.epsilons),
        seed=ns.seed,
        output_path=ns.out,
        svg_path=ns.svg,
        label=ns.fractal,
    )
    rows, cloud = run_sweep(config)
    write_rows_csv(config.output_path, rows)
    if config.svg_path:
        write_sweep_svg(config.svg_path, rows, cloud.expected_dimension)
    dims = sorted(row.dim_estimate for row in rows)
    median = dims[len(dims) // 2]
    print(
        f"wrote {len(rows)} rows to {config.output_path} "
        f"(expected dimension {cloud.expected_dimension:.6g}, median estimate {median:.6g})"
    )
    return 0


def cmd_counterexample(ns) -> int:
    base = AmbientPoint(*_COUNTEREXAMPLE_BASE)
    half = ns.arc_length / 2.0
    arc = polar_circle_arc(base, -half, half, ns.arc_samples)
    degenerate, _regular = exceptional_sets(arc, base, ns.n_theta)
    thetas = theta_grid(ns.n_theta)
    kinds = classify_arc_directions(arc, base, thetas)
    if ns.out:
        write_scan_csv(ns.out, thetas, kinds)
        write_intervals_csv(ns.intervals_out or ns.out + ".intervals.csv", degenerate)
    lo, hi = degenerate.intervals[0]
    below = [k for theta, k in zip(thetas, kinds) if theta < lo]
    n_single = sum(1 for k in below if k == "point")
    n_line = sum(1 for k in kinds if k == "whole_line")
    print(f"psi_interval = [{lo:.6g}, {hi:.6g}], length {hi - lo:.6g} "
          f"(arc length {ns.arc_length:.6g}, grid resolution {math.pi / ns.n_theta:.3g})")
    print(f"epsilon = {lo:.6g}; single-point projections below epsilon: "
          f"{n_single}/{len(below)}")
    print(f"whole-line hits across the scan: {n_line}/{len(kinds)}")
    return 0 if n_single == len(below) else 1


def cmd_dimension(ns) -> int:
    values = _read_values(ns.values)
    eps = _parse_epsilons(ns.epsilons)
    est = box_count_1d(values, list(eps) if eps is not None else auto_epsilons(values))
    print(f"slope = {est.slope:.6g}")
    print(f"r_squared = {est.r_squared:.6g}")
    print(f"scales = {len(est.counts)} in [{est.scale_range[0]:.6g}, {est.scale_range[1]:.6g}]")
    if ns.out:
        write_counts_csv(est, ns.out)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="curveproj",
        description="Geodesic projections and dimension experiments on "
        "constant-curvature surfaces.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_model_args(p):
        p.add_argument("-K", "--curvature", type=float, default=-1.0,
                       help="Gaussian curvature (default -1)")
        p.add_argument("-m", "--domain-radius", type=float, default=2.0,
                       dest="domain_radius", help="domain ball radius (default 2)")

    p = sub.add_parser("project", help="project one point onto a geodesic line")
    add_model_args(p)
    p.add_argument("--theta", type=float, required=True, help="line direction in [0, pi)")
    p.add_argument("--r", type=float, required=True, help="point radius")
    p.add_argument("--phi", type=float, required=True, help="point angle")
    p.set_defaults(func=cmd_project)

    p = sub.add_parser("transversality", help="constants and violation scan")
    add_model_args(p)
    p.add_argument("--n-pairs", type=int, default=10_000)
    p.add_argument("--n-thetas", type=int, default=1000)
    p.add_argument("--max-order", type=int, default=4)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", help="write the report as a quantity,value CSV")
    p.set_defaults(func=cmd_transversality)

    p = sub.add_parser("sweep", help="dimension/measure sweep over the theta grid")
    add_model_args(p)
    p.add_argument("--fractal", choices=sorted(_FRACTAL_PRESETS), default="three-corner")
    p.add_argument("--ratio", type=float, default=None, help="contraction ratio")
    p.add_argument("--depth", type=int, default=None, help="composition depth")
    p.add_argument("--scale", type=float, default=None,
                   help="radial factor (default: auto-fit to the domain)")
    p.add_argument("--n-theta", type=int, default=180, dest="n_theta")
    p.add_argument("--epsilons", default="auto",
                   help="'auto' or comma-separated descending scales")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True, help="output CSV path")
    p.add_argument("--svg", default=None, help="optional SVG plot path")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("counterexample", help="whole-sphere arc projection scan")
    p.add_argument("--n-theta", type=int, default=10_000, dest="n_theta")
    p.add_argument("--arc-length", type=float, default=0.4)
    p.add_argument("--arc-samples", type=int, default=4000)
    p.add_argument("--out", help="scan CSV path (interval CSV written alongside)")
    p.add_argument("--intervals-out", default=None)
    p.set_defaults(func=cmd_counterexample)

    p = sub.add_parser("dimension", help="box-count a CSV of reals")
    p.add_argument("values", help="input file, one real per line (header allowed)")
    p.add_argument("--epsilons", default="auto")
    p.add_argument("--out", help="write the epsilon,n_boxes table")
    p.set_defaults(func=cmd_dimension)
    return parser


def main(argv=None) -> int:
    ns = build_parser().parse_args(argv)
    try:
        return ns.func(ns)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    raise SystemExit(main())
