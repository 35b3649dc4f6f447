"""Norm-inflation experiments: data construction, schedule, N-sweeps.

The experiment perturbs a base datum by a band pair: coefficients R on
the two unit-width frequency bands centred at +-N.  Under the schedule
R = N^r, T = N^(-eps) with r + s < 0 and r < eps < 2r, the perturbation
vanishes in the s-weighted norms (slope r + s) while the single-band
witness of the solution at time T grows like R^2 T = N^(2r - eps).  The
witness lives in the fixed band n = 1, so its growth is the same at
every target regularity theta: the exchange identity
value(theta) = <1>^(theta-s) value(s) makes the loss of regularity an
argmax-band invariance rather than a norm identity.

Reported per-theta values are these single-band lower-bound witnesses of
the solution norm (the full norm at theta >= 0 is dominated by the freely
propagated perturbation itself and grows at an unrelated rate).
"""

from __future__ import annotations

import csv
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from math import inf, isnan

import numpy as np

from . import constants
from .dynamics import (
    PicardEngine,
    QuadratureSpec,
    energy,
    fixed_point_solve,
    integrate_rk4,
    picard_series,
    series_tail_bound,
)
from .grids import FrequencyGrid, SpectralFunction, read_spectrum
from .spaces import SpaceSpec, band_restricted_norm, space_norm

__all__ = [
    "ScheduleError",
    "Schedule",
    "schedule",
    "make_band_pair",
    "smooth_profile",
    "ConditionFlags",
    "check_conditions",
    "InflationConfig",
    "InflationRow",
    "InflationReport",
    "run_point",
    "run_sweep",
    "parse_config",
    "write_config",
]


class ScheduleError(ValueError):
    """The requested schedule exponents violate a feasibility condition."""


def make_band_pair(N: int, R: float, grid: FrequencyGrid) -> SpectralFunction:
    """Coefficients R on the two bands [N-1, N+1] and [-N-1, -N+1].

    Symmetric support with real amplitudes, hence real-valued in physical
    space.  The support size is independent of N, which is what keeps
    the whole construction uniform over the sweep.
    """
    if R < 0:
        raise ValueError("R must be nonnegative")
    if N + 1 > grid.cutoff:
        raise ValueError(f"cutoff {grid.cutoff} too small for bands at +-{N + 1}")
    if R == 0:
        return SpectralFunction.zero(grid)
    pos = SpectralFunction.indicator(grid, N - 1, N + 1, R)
    neg = SpectralFunction.indicator(grid, -N - 1, -N + 1, R)
    return pos + neg


def smooth_profile(grid: FrequencyGrid, amplitude: float = 1.0) -> SpectralFunction:
    """The fixed smooth base datum: 1/3 + (1/3)cos(2x) + (1/3)cos(3x), scaled.

    Unit Wiener-algebra norm at amplitude 1 (the l1 weight is divided
    out on line grids).  Its Fourier support {0, +-2, +-3} keeps the
    band n = 1 of the second iterate clean of cross terms.
    """
    freqs = [0.0, 2.0, -2.0, 3.0, -3.0]
    vals = np.array([1 / 3, 1 / 6, 1 / 6, 1 / 6, 1 / 6]) * amplitude / grid.measure_weight
    return SpectralFunction.from_coefficients(grid, freqs, vals.astype(np.complex128))


@dataclass(frozen=True)
class Schedule:
    """Resolved sweep parameters at one N, with the diagnostic slopes."""

    s: float
    N: int
    r: float
    eps: float
    R: float
    T: float
    distance_slope: float  # r + s, must be negative
    inflation_slope: float  # 2r - eps, must be positive


def schedule(s: float, N: int, r: float | None = None, eps: float | None = None) -> Schedule:
    """R = N^r and T = N^(-eps); defaults r = -s/3, eps = -s/2.

    Refuses exponent pairs violating the feasibility system, naming the
    violated condition.
    """
    if not (s < 0):
        raise ScheduleError(f"regularity must be negative, got s = {s}")
    if N < 2:
        raise ScheduleError(f"N must be >= 2, got {N}")
    r = -s / 3.0 if r is None else float(r)
    eps = -s / 2.0 if eps is None else float(eps)
    if not r + s < 0:
        raise ScheduleError(f"condition 'r + s < 0' fails: r={r:g}, s={s:g}")
    if not r > 0:
        raise ScheduleError(f"condition 'r > 0' fails: r={r:g}")
    if not eps > r:
        raise ScheduleError(f"condition 'r < eps' fails: r={r:g}, eps={eps:g}")
    if not eps < 2 * r:
        raise ScheduleError(f"condition 'eps < 2r' fails: r={r:g}, eps={eps:g}")
    return Schedule(
        s=s,
        N=N,
        r=r,
        eps=eps,
        R=float(N) ** r,
        T=float(N) ** (-eps),
        distance_slope=r + s,
        inflation_slope=2 * r - eps,
    )


@dataclass(frozen=True)
class ConditionFlags:
    """The five numeric smallness/largeness conditions at one sweep point.

    (iv) is recorded as equivalent to (ii): both say T R << 1 after the
    common factor T R^2 is cancelled.
    """

    i: bool
    ii: bool
    iii: bool
    iv: bool
    v: bool
    values: dict[str, float]

    @property
    def all_ok(self) -> bool:
        return self.i and self.ii and self.iii and self.iv and self.v

    def failed(self) -> list[str]:
        return [name for name in ("i", "ii", "iii", "iv", "v") if not getattr(self, name)]


def check_conditions(
    s: float,
    r: float,
    eps: float,
    N: int,
    m: float,
    C: float,
    *,
    eta: float = constants.CONDITION_MARGIN,
    t_max: float = constants.T_MAX,
) -> ConditionFlags:
    """Evaluate the five conditions guarding the inflation argument at N."""
    sched = schedule(s, N, r, eps)
    R, T = sched.R, sched.T
    vals = {
        "CRN^s": C * R * float(N) ** s,
        "TR": T * R,
        "TR^2": T * R * R,
        "T": T,
    }
    # the thresholds are surrogates for strict asymptotic inequalities, so
    # boundary comparisons carry a relative slack against rounding
    slack = 1.0 + 1e-9
    i = vals["CRN^s"] < 1.0 / m
    ii = vals["TR"] <= slack / eta
    iii = vals["TR^2"] * slack >= eta * m
    v = 0.0 < T <= t_max * slack
    return ConditionFlags(i=i, ii=ii, iii=iii, iv=ii, v=v, values=vals)


@dataclass(frozen=True)
class InflationConfig:
    """Everything needed to reproduce one sweep.

    ``base_data`` is "zero", "smooth", or a spectrum CSV path; the sweep
    perturbs it by the band pair at each N.  ``solver`` picks the route
    to time T: "picard" (partial series with tail certificate), "rk4",
    or "fixed-point".  ``cross_check`` lists N values re-solved with
    rk4 for comparison.
    """

    s: float = -1.0
    thetas: tuple[float, ...] = (-1.0, 0.0, 2.0)
    family: str = "fa"
    p: float = 2.0
    q: float = 2.0
    base_data: str = "zero"
    n_values: tuple[int, ...] = (16, 32, 64, 128, 256, 512, 1024, 2048, 4096)
    r: float | None = None
    eps: float | None = None
    m: float = 2.0
    solver: str = "picard"
    series_terms: int = 5
    perturbation_scale: float = 1.0
    homogeneous: bool = False
    grid_kind: str = "torus"
    spacing: float = 1.0
    seed: int = 0
    quad: QuadratureSpec = field(default_factory=QuadratureSpec)
    rk4_dt: float = constants.RK4_DT
    cross_check: tuple[int, ...] = ()
    slope_tolerance: float = 0.25
    residual_tolerance: float = 1e-6

    def __post_init__(self):
        if self.solver not in ("picard", "rk4", "fixed-point"):
            raise ValueError(f"unknown solver {self.solver!r}")
        if not self.n_values or list(self.n_values) != sorted(set(self.n_values)):
            raise ValueError("n_values must be nonempty and strictly increasing")
        schedule(self.s, self.n_values[0], self.r, self.eps)  # refuses infeasible exponents

    def spec(self, s: float | None = None) -> SpaceSpec:
        return SpaceSpec(
            self.family, self.p, self.q, self.s if s is None else s, self.homogeneous
        )

    def space_label(self) -> str:
        if self.grid_kind == "torus" and self.family in ("fa", "mod", "wa"):
            # on the torus all the families collapse to the Fourier-Lebesgue scale
            return f"fl^{self.q:g}_s(torus)"
        return f"{self.family}^{self.p:g},{self.q:g}_s({self.grid_kind})"


def _base_band(config: InflationConfig) -> float:
    if config.base_data == "zero":
        return 0.0
    if config.base_data == "smooth":
        return 3.0
    f = read_spectrum(config.base_data)
    return float(np.abs(f.frequencies).max()) if f.indices.size else 0.0


def _resolve_base(config: InflationConfig, grid: FrequencyGrid) -> SpectralFunction:
    if config.base_data == "zero":
        return SpectralFunction.zero(grid)
    if config.base_data == "smooth":
        return smooth_profile(grid)
    f = read_spectrum(config.base_data)
    return SpectralFunction.from_coefficients(grid, f.frequencies, f.values)


def grid_for(config: InflationConfig, N: int) -> FrequencyGrid:
    """Grid big enough for all series terms of the perturbed datum at this N."""
    b = _base_band(config)
    need = (config.series_terms + 1) * int(np.ceil(N + 1 + b)) + 4
    spacing = 1.0 if config.grid_kind == "torus" else config.spacing
    return FrequencyGrid(config.grid_kind, need, spacing)


@dataclass(frozen=True)
class InflationRow:
    N: int
    R: float
    T: float
    dist_s: float
    theta_values: dict[float, float]
    band1: float
    tail: float
    residual: float
    conditions: ConditionFlags
    flags: str
    diagnostics: dict[str, float]


def run_point(
    config: InflationConfig,
    N: int,
    *,
    calibration_C: float | None = None,
) -> InflationRow:
    """One sweep row: build data, solve to T, measure witnesses and checks."""
    sched = schedule(config.s, N, config.r, config.eps)
    R, T = sched.R, sched.T
    grid = grid_for(config, N)
    bump = make_band_pair(N, R * config.perturbation_scale, grid)
    base = _resolve_base(config, grid)
    data = base + bump

    spec_s = config.spec()
    dist = space_norm(bump, spec_s)
    C_meas = dist / (R * float(N) ** config.s)
    C_used = calibration_C if calibration_C is not None else C_meas

    diagnostics: dict[str, float] = {"C_measured": C_meas}
    tail = float("nan")
    if config.solver == "picard":
        engine = PicardEngine(data, config.quad)
        result = picard_series(data, config.series_terms, T, config.quad, engine=engine)
        u_T = result.value
        tail = result.tail_bound
        residual = result.quad_error
        u1, _ = engine.iterate(1, T)
        u2, _ = engine.iterate(2, T)
        diagnostics["u1_norm_s"] = space_norm(u1, spec_s)
        diagnostics["u2_band1"] = band_restricted_norm(u2, spec_s, 1)
        high = 0.0
        for k in range(3, config.series_terms + 1):
            uk, _ = engine.iterate(k, T)
            high += space_norm(uk, spec_s)
        high += tail  # s <= 0: the weighted norms are dominated by the l1 scale
        diagnostics["sum_high_s"] = high
        denom = diagnostics["u1_norm_s"] + high
        diagnostics["dominance_ratio"] = (
            diagnostics["u2_band1"] / denom if denom > 0 else float("inf")
        )
    elif config.solver == "rk4":
        dt = min(config.rk4_dt, T / 50.0) if T > 0 else config.rk4_dt
        traj = integrate_rk4(data, T, dt, store_every=10**9)
        u_T = traj.states[-1]
        e0, e1 = energy(data), energy(u_T)
        residual = abs(e1 - e0) / max(e0, 1e-300)
    else:
        fp = fixed_point_solve(data, T, quad=config.quad)
        u_T = fp.value
        residual = fp.residual

    band1 = band_restricted_norm(u_T, spec_s, 1)
    theta_values = {
        th: band_restricted_norm(u_T, config.spec(th), 1) for th in config.thetas
    }
    diagnostics["full_norm_s"] = space_norm(u_T, spec_s)

    conds = check_conditions(
        config.s, sched.r, sched.eps, N, config.m, C_used
    )
    failed = conds.failed()
    if residual > config.residual_tolerance:
        failed.append("resid")
    flags = "ok" if not failed else "+".join(failed)
    return InflationRow(
        N=N,
        R=R,
        T=T,
        dist_s=dist,
        theta_values=theta_values,
        band1=band1,
        tail=tail,
        residual=residual,
        conditions=conds,
        flags=flags,
        diagnostics=diagnostics,
    )


@dataclass(frozen=True)
class InflationReport:
    rows: list[InflationRow]
    slopes: dict[str, float]
    targets: dict[str, float]
    slopes_ok: bool
    n_star: int | None
    monotone_beyond_n_star: bool
    space_label: str
    calibration_C: float
    cross_check_gap: float
    config: InflationConfig

    def summary(self) -> str:
        lines = [
            f"space {self.space_label}, solver {self.config.solver}, "
            f"N in {self.rows[0].N}..{self.rows[-1].N}",
            f"distance slope {self.slopes['dist']:+.4f} (target {self.targets['dist']:+.4f})",
        ]
        for th in self.config.thetas:
            key = f"theta_{th:g}"
            lines.append(
                f"growth slope at theta={th:g}: {self.slopes[key]:+.4f} "
                f"(target {self.targets[key]:+.4f})"
            )
        lines.append(f"slope assertions {'pass' if self.slopes_ok else 'FAIL'}")
        lines.append(f"N* = {self.n_star}, monotone beyond: {self.monotone_beyond_n_star}")
        if self.config.cross_check:
            lines.append(f"rk4 cross-check max relative gap {self.cross_check_gap:.3g}")
        return "\n".join(lines)

    def to_csv(self, path) -> None:
        thetas = list(self.config.thetas)
        header = (
            ["N", "R", "T", "dist_s"]
            + [f"norm_theta_{th:g}" for th in thetas]
            + ["band1", "tail", "residual", "flags"]
        )
        with open(path, "w", newline="", encoding="utf-8") as fh:
            w = csv.writer(fh)
            w.writerow(header)
            for row in self.rows:
                w.writerow(
                    [row.N, f"{row.R:.17g}", f"{row.T:.17g}", f"{row.dist_s:.17g}"]
                    + [f"{row.theta_values[th]:.17g}" for th in thetas]
                    + [
                        f"{row.band1:.17g}",
                        f"{row.tail:.17g}",
                        f"{row.residual:.17g}",
                        row.flags,
                    ]
                )


def _sweep_worker(args):
    config, N, C = args
    return run_point(config, N, calibration_C=C)


def _fit_slope(n_values, values) -> float:
    x = np.log(np.asarray(n_values, dtype=float))
    y = np.log(np.maximum(np.asarray(values, dtype=float), 1e-300))
    return float(np.polyfit(x, y, 1)[0])


def run_sweep(config: InflationConfig) -> InflationReport:
    """All rows of the N-sweep plus slope fits and their assertions.

    Rows are independent; set BBMLAB_JOBS > 1 to compute them in
    parallel processes.  The calibration constant for condition (i) is
    the measured distance ratio at the smallest N.
    """
    sched0 = schedule(config.s, config.n_values[0], config.r, config.eps)
    g0 = grid_for(config, config.n_values[0])
    bump0 = make_band_pair(config.n_values[0], sched0.R, g0)
    C_cal = space_norm(bump0, config.spec()) / (
        sched0.R * float(config.n_values[0]) ** config.s
    )

    jobs = int(os.environ.get("BBMLAB_JOBS", "1"))
    work = [(config, N, C_cal) for N in config.n_values]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            rows = list(pool.map(_sweep_worker, work))
    else:
        rows = [_sweep_worker(w) for w in work]

    n_arr = [r.N for r in rows]
    slopes = {"dist": _fit_slope(n_arr, [r.dist_s for r in rows])}
    targets = {"dist": sched0.distance_slope}
    for th in config.thetas:
        slopes[f"theta_{th:g}"] = _fit_slope(n_arr, [r.theta_values[th] for r in rows])
        targets[f"theta_{th:g}"] = sched0.inflation_slope
    tol = config.slope_tolerance
    ok = all(
        abs(slopes[k] - targets[k]) <= tol * abs(targets[k]) for k in slopes
    )

    n_star = None
    for r in rows:
        if r.conditions.all_ok and r.dist_s < 1.0 / config.m and r.band1 > config.m:
            n_star = r.N
            break
    monotone = True
    if n_star is not None:
        beyond = [r for r in rows if r.N >= n_star]
        for th in config.thetas:
            vals = [r.theta_values[th] for r in beyond]
            monotone &= all(b > a for a, b in zip(vals, vals[1:]))

    gap = 0.0
    for N in config.cross_check:
        if N not in config.n_values:
            continue
        main = rows[config.n_values.index(N)]
        alt = run_point(replace(config, solver="rk4"), N, calibration_C=C_cal)
        gap = max(gap, abs(alt.band1 - main.band1) / max(main.band1, 1e-300))

    return InflationReport(
        rows=rows,
        slopes=slopes,
        targets=targets,
        slopes_ok=ok,
        n_star=n_star,
        monotone_beyond_n_star=monotone,
        space_label=config.space_label(),
        calibration_C=C_cal,
        cross_check_gap=gap,
        config=config,
    )


# -- keyed-text config files -------------------------------------------
#
# Plain "key = value" lines, '#' comments; lists are comma separated.
# Every InflationConfig field is representable.

_CONFIG_KEYS = {
    "s": float,
    "thetas": "floats",
    "family": str,
    "p": "exp",
    "q": "exp",
    "base_data": str,
    "n": "ints",
    "r": "opt_float",
    "eps": "opt_float",
    "m": float,
    "solver": str,
    "series_terms": int,
    "perturbation_scale": float,
    "homogeneous": "bool",
    "grid_kind": str,
    "spacing": float,
    "seed": int,
    "quad.base_nodes": int,
    "quad.tol": float,
    "quad.max_levels": int,
    "rk4.dt": float,
    "cross_check": "ints",
    "slope_tolerance": float,
    "residual_tolerance": float,
}


def _parse_value(kind, raw: str):
    raw = raw.strip()
    if kind == "floats":
        return tuple(float(x) for x in raw.split(",") if x.strip()) if raw else ()
    if kind == "ints":
        return tuple(int(x) for x in raw.split(",") if x.strip()) if raw else ()
    if kind == "exp":
        return inf if raw.lower() == "inf" else float(raw)
    if kind == "opt_float":
        return None if raw == "" or raw.lower() == "none" else float(raw)
    if kind == "bool":
        if raw.lower() in ("true", "1", "yes"):
            return True
        if raw.lower() in ("false", "0", "no"):
            return False
        raise ValueError(f"bad boolean {raw!r}")
    return kind(raw)


def parse_config(path) -> InflationConfig:
    values: dict[str, object] = {}
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            text = line.split("#", 1)[0].strip()
            if not text:
                continue
            if "=" not in text:
                raise ValueError(f"{path}:{lineno}: expected 'key = value'")
            key, raw = (part.strip() for part in text.split("=", 1))
            if key not in _CONFIG_KEYS:
                raise ValueError(f"{path}:{lineno}: unknown key {key!r}")
            try:
                values[key] = _parse_value(_CONFIG_KEYS[key], raw)
            except ValueError as exc:
                raise ValueError(f"{path}:{lineno}: {exc}") from None
    quad = QuadratureSpec(
        base_nodes=values.pop("quad.base_nodes", constants.QUAD_BASE_NODES),
        tol=values.pop("quad.tol", constants.QUAD_TOL),
        max_levels=values.pop("quad.max_levels", constants.QUAD_MAX_LEVELS),
    )
    kwargs = {
        "quad": quad,
        "rk4_dt": values.pop("rk4.dt", constants.RK4_DT),
    }
    rename = {"n": "n_values"}
    for key, val in values.items():
        kwargs[rename.get(key, key)] = val
    return InflationConfig(**kwargs)


def write_config(config: InflationConfig, path) -> None:
    def fmt(v):
        if isinstance(v, tuple):
            return ", ".join(f"{x:g}" if isinstance(x, float) else str(x) for x in v)
        if v is None:
            return ""
        if isinstance(v, bool):
            return "true" if v else "false"
        if isinstance(v, float):
            return "inf" if v == inf else f"{v:g}"
        return str(v)

    lines = [
        "# bbmlab sweep configuration",
        f"s = {fmt(config.s)}",
        f"thetas = {fmt(config.thetas)}",
        f"family = {config.family}",
        f"p = {fmt(config.p)}",
        f"q = {fmt(config.q)}",
        f"base_data = {config.base_data}",
        f"n = {fmt(config.n_values)}",
        f"r = {fmt(config.r)}",
        f"eps = {fmt(config.eps)}",
        f"m = {fmt(config.m)}",
        f"solver = {config.solver}",
        f"series_terms = {config.series_terms}",
        f"perturbation_scale = {fmt(config.perturbation_scale)}",
        f"homogeneous = {fmt(config.homogeneous)}",
        f"grid_kind = {config.grid_kind}",
        f"spacing = {fmt(config.spacing)}",
        f"seed = {config.seed}",
        f"quad.base_nodes = {config.quad.base_nodes}",
        f"quad.tol = {fmt(config.quad.tol)}",
        f"quad.max_levels = {config.quad.max_levels}",
        f"rk4.dt = {fmt(config.rk4_dt)}",
        f"cross_check = {fmt(config.cross_check)}",
        f"slope_tolerance = {fmt(config.slope_tolerance)}",
        f"residual_tolerance = {fmt(config.residual_tolerance)}",
    ]
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("\n".join(lines) + "\n")
