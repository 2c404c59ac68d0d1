"""Boundary-limit experiments on the span metric.

Each experiment walks a geometric sequence of inner-normal depths ``t`` at a
base boundary point, rebuilds the kernel model at every depth (the adaptive
degree escalation in ``dirichlet.build_model`` keeps the truncation floor
below the quantity being measured), and records a table of columns plus a set
of named pass/fail gates.  Results serialize to CSV and a small hand-rolled
SVG log-log plot; nothing here depends on a plotting stack.

The four experiments:

* ``metric_distance``    - s(z_t) * dist(z_t)^2 -> 1/4 at rate O(t)
* ``curvature_limit``    - kappa_n(z_t) -> Burbea's disk value at rate O(t^4)
* ``localization``       - s_{U cap D} / s_D -> 1, from above, with an exact
                           two-sided sandwich from closed-form neighbors
* ``scaling_kernel``     - kernels of blown-up domains -> half-plane kernel,
                           with boundary Hausdorff convergence at rate O(t)
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np

from .curvature import burbea_bound, curvature_profile
from .dirichlet import build_model
from .domains import (
    DefiningFunctionPatch,
    Domain,
    curve_samples_in_ball,
    hausdorff_distance_local,
    limit_halfplane,
    outward_normal,
    scaled_domain,
    scaling_map,
    signed_distance,
)
from .errors import ConfigError
from .reference import DiskMetric, HalfPlaneMetric, LensMetric


def default_schedule(start: float = 0.1, count: int = 10) -> tuple[float, ...]:
    return tuple(start * 0.5**j for j in range(count))


@dataclass(frozen=True)
class ExperimentConfig:
    """Shared knobs for all boundary-limit experiments."""

    base_point: complex
    steps: tuple[float, ...] = default_schedule()
    metric_tol: float = 1e-8
    curvature_tol: float = 1e-10
    orders: tuple[int, ...] = (1, 2)
    clip_radius: float = 5.0
    grid_x: tuple[float, float, int] = (-1.0, 0.5, 5)
    grid_y: tuple[float, float, int] = (-0.75, 0.75, 5)

    def __post_init__(self):
        if len(self.steps) < 2:
            raise ConfigError("need at least two depth steps")
        if any(t <= 0 for t in self.steps):
            raise ConfigError("depth steps must be positive")
        if list(self.steps) != sorted(self.steps, reverse=True):
            raise ConfigError("depth steps must decrease")


@dataclass
class ExperimentResult:
    name: str
    columns: dict[str, np.ndarray]
    gates: dict[str, bool]
    meta: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(self.gates.values())

    def table(self) -> str:
        names = list(self.columns)
        widths = [max(len(n), 13) for n in names]
        lines = ["  ".join(n.rjust(w) for n, w in zip(names, widths))]
        rows = len(next(iter(self.columns.values())))
        for i in range(rows):
            lines.append(
                "  ".join(
                    f"{self.columns[n][i]:{w}.6e}" for n, w in zip(names, widths)
                )
            )
        return "\n".join(lines)

    def gate_lines(self) -> list[str]:
        return [
            f"[{'PASS' if ok else 'FAIL'}] {self.name}: {gate}"
            for gate, ok in self.gates.items()
        ]

    def save(self, directory: str) -> list[str]:
        import os

        os.makedirs(directory, exist_ok=True)
        csv_path = os.path.join(directory, f"{self.name}.csv")
        write_csv(csv_path, self.columns)
        written = [csv_path]
        plot_cols = self.meta.get("plot_columns", [])
        if plot_cols and "t" in self.columns:
            svg_path = os.path.join(directory, f"{self.name}.svg")
            series = {c: np.abs(self.columns[c]) for c in plot_cols}
            write_loglog_svg(svg_path, self.columns["t"], series, title=self.name)
            written.append(svg_path)
        return written


def write_csv(path: str, columns: dict[str, np.ndarray]) -> None:
    names = list(columns)
    rows = len(next(iter(columns.values())))
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(",".join(names) + "\n")
        for i in range(rows):
            fh.write(",".join("%.17g" % float(columns[n][i]) for n in names) + "\n")


def decay_order(steps, gaps) -> float:
    """Least-squares slope of log|gap| against log t (positive gaps only)."""
    t = np.asarray(steps, dtype=float)
    g = np.abs(np.asarray(gaps, dtype=float))
    mask = g > 0
    if np.count_nonzero(mask) < 2:
        return float("nan")
    x, y = np.log(t[mask]), np.log(g[mask])
    return float(np.polyfit(x, y, 1)[0])


def cauchy_decay(values, factor: float = 3.0) -> bool:
    """Last increment no more than ``factor`` times the one before it."""
    v = np.asarray(values, dtype=float)
    if v.size < 3:
        return False
    return abs(v[-1] - v[-2]) <= factor * abs(v[-2] - v[-3]) + 1e-300


def _normal_points(domain: Domain, p: complex, steps) -> tuple[complex, np.ndarray]:
    nu = outward_normal(domain, p)
    return nu, np.array([p - t * nu for t in steps], dtype=complex)


def _cauchy_gate(gates: dict, label: str, values: np.ndarray) -> None:
    gates[f"{label} increments Cauchy (factor 3)"] = cauchy_decay(values)


class _Diagnostics:
    """Per-step model diagnostics shared by all experiments."""

    def __init__(self, count: int):
        self.degree = np.zeros(count)
        self.eps_model = np.zeros(count)
        self.condition = np.zeros(count)

    def record(self, i: int, model) -> None:
        self.degree[i] = model.meta["degree"]
        self.eps_model[i] = model.eps_model
        self.condition[i] = model.meta["condition"]

    def columns(self) -> dict[str, np.ndarray]:
        return {"degree": self.degree, "eps_model": self.eps_model}

    def meta(self) -> dict:
        return {
            "degrees": [int(d) for d in self.degree],
            "eps_model": self.eps_model.tolist(),
            "condition": self.condition.tolist(),
        }


# -- experiment 1: metric times squared distance ------------------------------


def metric_distance_experiment(domain: Domain, config: ExperimentConfig) -> ExperimentResult:
    """s(z_t) * dist(z_t)^2 -> 1/4 along the inner normal."""
    _, points = _normal_points(domain, config.base_point, config.steps)
    t = np.array(config.steps, dtype=float)
    metric = np.empty_like(t)
    dist = np.empty_like(t)
    diag = _Diagnostics(t.size)
    for i, z in enumerate(points):
        model = build_model(domain, probes=[z], watch_order=0, tol=config.metric_tol)
        metric[i] = model.metric(complex(z))
        dist[i] = -signed_distance(domain, complex(z))
        diag.record(i, model)
    product = metric * dist**2
    gap = product - 0.25
    order = decay_order(t, gap)
    gates = {
        f"|s*dist^2 - 1/4| <= 1e-2 at t={t[-1]:g}": bool(abs(gap[-1]) <= 1e-2),
        "decay order >= 0.9": bool(order >= 0.9),
    }
    _cauchy_gate(gates, "product", product)
    return ExperimentResult(
        name="metric_distance",
        columns={
            "t": t,
            "metric": metric,
            "dist": dist,
            "product": product,
            "gap": gap,
            **diag.columns(),
        },
        gates=gates,
        meta={"order": order, "plot_columns": ["gap"], **diag.meta()},
    )


# -- experiment 2: curvature boundary limits ----------------------------------


def curvature_limit_experiment(domain: Domain, config: ExperimentConfig) -> ExperimentResult:
    """kappa_n(z_t) -> the disk's curvature value for each watched order."""
    _, points = _normal_points(domain, config.base_point, config.steps)
    t = np.array(config.steps, dtype=float)
    orders = tuple(config.orders)
    top = max(orders)
    kappas = {n: np.empty_like(t) for n in orders}
    diag = _Diagnostics(t.size)
    for i, z in enumerate(points):
        model = build_model(
            domain, probes=[z], watch_order=top, tol=config.curvature_tol
        )
        profile = curvature_profile(model, complex(z), orders=orders)
        for n in orders:
            kappas[n][i] = profile[n]
        diag.record(i, model)
    columns: dict[str, np.ndarray] = {"t": t}
    gates: dict[str, bool] = {}
    plot_cols = []
    slopes = {}
    pinned = {1: 1e-2, 2: 5e-2}
    for n in orders:
        bound = burbea_bound(n)
        gap = np.abs(kappas[n] - bound) / abs(bound)
        columns[f"kappa{n}"] = kappas[n]
        columns[f"gap{n}"] = gap
        plot_cols.append(f"gap{n}")
        slopes[n] = decay_order(t, gap)
        tol = pinned.get(n, 5e-2)
        gates[f"|kappa{n} - ({bound:g})|/|{bound:g}| <= {tol:g} at t={t[-1]:g}"] = bool(
            gap[-1] <= tol
        )
        gates[f"kappa{n} gap decreasing over last 4 steps"] = bool(
            np.all(np.diff(gap[-4:]) < 0)
        )
        _cauchy_gate(gates, f"kappa{n}", kappas[n])
    columns.update(diag.columns())
    return ExperimentResult(
        name="curvature_limit",
        columns=columns,
        gates=gates,
        meta={"plot_columns": plot_cols, "gap_slopes": slopes, **diag.meta()},
    )


# -- experiment 3: localization ------------------------------------------------


def localization_experiment(domain: Domain, config: ExperimentConfig) -> ExperimentResult:
    """The metric of a one-sided neighborhood piece against the full domain.

    ``U`` is the disk around the base boundary point whose radius is half the
    distance to the rest of the boundary, so ``U cap D`` is an exact
    two-corner lens with a closed-form metric.  Domain monotonicity makes the
    computed ratio structurally >= 1: the lens value is exact and the model
    value never exceeds the true metric of the larger domain.  The sandwich
    column is the closed-form lower metric (the full outer disk) divided by
    the lens metric; the true ratio lives between 1 and 1/sandwich.
    """
    p = complex(config.base_point)
    circle = domain.outer.circle_data()
    if circle is None:
        raise ConfigError("localization needs a circular outer boundary")
    center, radius, _ = circle
    nu, points = _normal_points(domain, p, config.steps)
    spare = [curve.distance_to(p)[0] for curve in domain.holes]
    reach = min(spare) if spare else radius
    u_radius = reach / 2.0
    if max(config.steps) >= u_radius:
        raise ConfigError("depth steps must stay inside the localization disk")
    lens = LensMetric.from_disks(center, radius, p, u_radius)
    outer_disk = DiskMetric(center, radius)
    t = np.array(config.steps, dtype=float)
    ratio = np.empty_like(t)
    sandwich = np.empty_like(t)
    diag = _Diagnostics(t.size)
    for i, z in enumerate(points):
        model = build_model(domain, probes=[z], watch_order=0, tol=config.metric_tol)
        s_domain = model.metric(complex(z))
        s_lens = float(lens.metric(complex(z)))
        ratio[i] = s_lens / s_domain
        sandwich[i] = outer_disk.metric(complex(z)) / s_lens
        diag.record(i, model)
    # Textbook half-disk sandwich in first-power form: the density ratio of the
    # half-plane to the half-disk of radius u at depth t, (u^2-t^2)/(u^2+t^2).
    halfdisk_ratio = (u_radius**2 - t**2) / (u_radius**2 + t**2)
    small = t <= 0.02
    gates = {
        "ratio >= 1 at every depth": bool(np.all(ratio >= 1.0 - 1e-12)),
        f"|ratio - 1| <= 1e-2 at t={t[-1]:g}": bool(abs(ratio[-1] - 1.0) <= 1e-2),
        "ratio - 1 <= 2 * (1 - sandwich) once t <= 0.02": bool(
            np.all((ratio - 1.0)[small] <= 2.0 * (1.0 - sandwich[small]))
        ),
    }
    _cauchy_gate(gates, "ratio", ratio)
    return ExperimentResult(
        name="localization",
        columns={
            "t": t,
            "ratio": ratio,
            "gap": ratio - 1.0,
            "sandwich": sandwich,
            "halfdisk_ratio": halfdisk_ratio,
            **diag.columns(),
        },
        gates=gates,
        meta={"u_radius": u_radius, "plot_columns": ["gap"], **diag.meta()},
    )


# -- experiment 4: scaling principle -------------------------------------------


def scaling_kernel_experiment(domain: Domain, config: ExperimentConfig) -> ExperimentResult:
    """Kernels of blown-up domains against the limit half-plane kernel.

    At depth ``t`` the domain is rescaled by ``T(z) = (z - p_t)/dist(p_t)``;
    the rescaled kernels are compared to the half-plane kernel on a fixed grid
    in the frame of the outward normal, and the rescaled boundary is compared
    to the half-plane boundary in clipped Hausdorff distance.
    """
    p = complex(config.base_point)
    patch = DefiningFunctionPatch.from_domain(domain, p)
    half = limit_halfplane(patch)
    ref = HalfPlaneMetric(half.omega)
    x0, x1, nx = config.grid_x
    y0, y1, ny = config.grid_y
    xs = np.linspace(x0, x1, int(nx))
    ys = np.linspace(y0, y1, int(ny))
    grid = ((xs[:, None] + 1j * ys[None, :]) * patch.omega).ravel()
    ref_kernel = ref.kernel(grid[:, None], grid[None, :])

    nu, points = _normal_points(domain, p, config.steps)
    t = np.array(config.steps, dtype=float)
    sup_gap = np.empty_like(t)
    bd_gap = np.empty_like(t)
    dropped = np.zeros(t.size, dtype=int)
    diag = _Diagnostics(t.size)
    line = half.boundary_samples(config.clip_radius, count=4096)
    for i, z in enumerate(points):
        mapping = scaling_map(domain, patch, complex(z))
        blown = scaled_domain(domain, mapping)
        inside = np.array([blown.contains(complex(w)) for w in grid])
        dropped[i] = int(np.count_nonzero(~inside))
        if dropped[i]:
            warnings.warn(
                f"{dropped[i]} grid points fall outside the rescaled domain "
                f"at t={t[i]:g}; dropped from the kernel comparison",
                RuntimeWarning,
                stacklevel=2,
            )
        kept = grid[inside]
        model = build_model(blown, probes=kept, watch_order=0, tol=config.metric_tol)
        kernel = model.kernel_matrix(kept, kept)
        sup_gap[i] = float(np.max(np.abs(kernel - ref_kernel[np.ix_(inside, inside)])))
        boundary = np.concatenate(
            [curve_samples_in_ball(c, config.clip_radius) for c in blown.curves]
        )
        bd_gap[i] = hausdorff_distance_local(boundary, line, config.clip_radius)
        diag.record(i, model)
    c_fit = float(np.sum(bd_gap * t) / np.sum(t * t))
    gates = {
        f"sup kernel gap shrinks 4x ({sup_gap[0]:.2e} -> {sup_gap[-1]:.2e})": bool(
            sup_gap[-1] <= sup_gap[0] / 4.0
        ),
        "boundary Hausdorff distance <= 2 * C * t at every depth": bool(
            np.all(bd_gap <= 2.0 * c_fit * t)
        ),
        "grid points dropped only at the coarsest steps": bool(
            np.all(np.diff(dropped) <= 0)
        ),
    }
    _cauchy_gate(gates, "sup kernel gap", sup_gap)
    return ExperimentResult(
        name="scaling_kernel",
        columns={
            "t": t,
            "sup_kernel_gap": sup_gap,
            "hausdorff": bd_gap,
            "dropped": dropped.astype(float),
            **diag.columns(),
        },
        gates=gates,
        meta={
            "c_fit": c_fit,
            "omega": [patch.omega.real, patch.omega.imag],
            "gap_slope": decay_order(t, sup_gap),
            "hausdorff_slope": decay_order(t, bd_gap),
            "plot_columns": ["sup_kernel_gap", "hausdorff"],
            **diag.meta(),
        },
    )


EXPERIMENTS = {
    "metric-distance": metric_distance_experiment,
    "curvature-limit": curvature_limit_experiment,
    "localization": localization_experiment,
    "scaling-kernel": scaling_kernel_experiment,
}


def run_experiment(name: str, domain: Domain, config: ExperimentConfig) -> ExperimentResult:
    if name not in EXPERIMENTS:
        raise ConfigError(f"unknown experiment {name!r}; choose from {sorted(EXPERIMENTS)}")
    return EXPERIMENTS[name](domain, config)


# -- SVG ----------------------------------------------------------------------

_PALETTE = ["#1965b0", "#dc050c", "#4eb265", "#f7a600", "#882e72", "#777777"]


def write_loglog_svg(
    path: str,
    x: np.ndarray,
    series: dict[str, np.ndarray],
    title: str = "",
    width: int = 640,
    height: int = 440,
) -> None:
    """Minimal log-log scatter/line plot, written as a standalone SVG file."""
    margin = 64
    x = np.asarray(x, dtype=float)
    finite = [
        (label, np.asarray(y, dtype=float))
        for label, y in series.items()
    ]
    xs_all = np.log10(x)
    ys_all = np.concatenate([
        np.log10(y[(y > 0) & np.isfinite(y)]) for _, y in finite if np.any(y > 0)
    ] or [np.array([0.0])])
    x_lo, x_hi = float(np.min(xs_all)), float(np.max(xs_all))
    y_lo, y_hi = float(np.min(ys_all)), float(np.max(ys_all))
    x_hi = x_hi if x_hi > x_lo else x_lo + 1.0
    y_hi = y_hi if y_hi > y_lo else y_lo + 1.0

    def px(lx):
        return margin + (lx - x_lo) / (x_hi - x_lo) * (width - 2 * margin)

    def py(ly):
        return height - margin - (ly - y_lo) / (y_hi - y_lo) * (height - 2 * margin)

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}" font-family="monospace" font-size="11">',
        f'<rect width="{width}" height="{height}" fill="white"/>',
        f'<text x="{width / 2:.0f}" y="20" text-anchor="middle">{title}</text>',
        f'<line x1="{margin}" y1="{height - margin}" x2="{width - margin}" '
        f'y2="{height - margin}" stroke="black"/>',
        f'<line x1="{margin}" y1="{margin}" x2="{margin}" y2="{height - margin}" '
        f'stroke="black"/>',
    ]
    for d in range(int(np.floor(x_lo)), int(np.ceil(x_hi)) + 1):
        if x_lo <= d <= x_hi:
            parts.append(
                f'<text x="{px(d):.1f}" y="{height - margin + 16}" '
                f'text-anchor="middle">1e{d}</text>'
            )
    for d in range(int(np.floor(y_lo)), int(np.ceil(y_hi)) + 1):
        if y_lo <= d <= y_hi:
            parts.append(
                f'<text x="{margin - 6}" y="{py(d):.1f}" text-anchor="end">1e{d}</text>'
            )
    for idx, (label, y) in enumerate(finite):
        color = _PALETTE[idx % len(_PALETTE)]
        mask = (y > 0) & np.isfinite(y)
        if not np.any(mask):
            continue
        pts = " ".join(
            f"{px(np.log10(xv)):.1f},{py(np.log10(yv)):.1f}"
            for xv, yv in zip(x[mask], y[mask])
        )
        parts.append(
            f'<polyline points="{pts}" fill="none" stroke="{color}" stroke-width="1.5"/>'
        )
        for xv, yv in zip(x[mask], y[mask]):
            parts.append(
                f'<circle cx="{px(np.log10(xv)):.1f}" cy="{py(np.log10(yv)):.1f}" '
                f'r="2.5" fill="{color}"/>'
            )
        parts.append(
            f'<text x="{width - margin - 4}" y="{margin + 14 * (idx + 1)}" '
            f'text-anchor="end" fill="{color}">{label}</text>'
        )
    parts.append("</svg>")
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("\n".join(parts))
