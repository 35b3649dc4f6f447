"""BBM evolution: propagator, bilinear Duhamel term, Picard series, solvers.

The evolution solved here is u_t + u_x + u u_x - u_xxt = 0, in multiplier
form  d/dt c(xi) = -i phi(xi) (c + (1/2) c*c)  with phi(xi) = xi/(1+xi^2),
where * is coefficient convolution.  The free propagator is therefore the
unimodular multiplier exp(-i t phi(xi)).

Three independent solution routes are provided and cross-validated:

* ``picard_series``  - partial sums of the iterated Duhamel expansion,
  with a geometric tail certificate;
* ``integrate_rk4``  - classical 4-stage time stepping on the spectral
  ODE system;
* ``fixed_point_solve`` - contraction iteration of the solution map on a
  time mesh.

Duhamel integrals use composite Gauss-Legendre quadrature with
node-count doubling until the l1-scale change drops below tolerance; the
resonance phases are O(1) on the supports of interest, so few nodes are
needed.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable

import numpy as np

from . import constants
from .grids import (
    FrequencyGrid,
    SpectralFunction,
    SupportOverflowError,
    apply_multiplier,
    convolve,
    distance,
)

__all__ = [
    "phi",
    "QuadratureSpec",
    "PicardResult",
    "Trajectory",
    "FixedPointResult",
    "PicardEngine",
    "linear_propagate",
    "duhamel",
    "picard_iterate",
    "picard_series",
    "integrate_rk4",
    "fixed_point_solve",
    "energy",
    "ConvergenceRegimeError",
    "QuadratureError",
    "BlowUpError",
    "NonContractionError",
]


def phi(xi):
    """Dispersion multiplier xi / (1 + xi^2); odd, |phi| <= 1/2."""
    x = np.asarray(xi, dtype=float)
    out = x / (1.0 + x * x)
    return float(out) if out.ndim == 0 else out


class ConvergenceRegimeError(ValueError):
    """t * |u0|_l1 too large for the series / contraction machinery."""


class QuadratureError(RuntimeError):
    """Node doubling did not reach tolerance within max_levels."""


class BlowUpError(RuntimeError):
    """Coefficient magnitudes overflowed during time stepping."""


class NonContractionError(RuntimeError):
    """Solution-map iteration expanded instead of contracting."""


@dataclass(frozen=True)
class QuadratureSpec:
    """Composite Gauss-Legendre controls (config keys quad.base_nodes, quad.tol)."""

    base_nodes: int = constants.QUAD_BASE_NODES
    tol: float = constants.QUAD_TOL
    max_levels: int = constants.QUAD_MAX_LEVELS


DEFAULT_QUAD = QuadratureSpec()


@dataclass(frozen=True)
class PicardResult:
    """One Duhamel-expansion evaluation: iterate (or partial sum) at time t."""

    k: int
    t: float
    value: SpectralFunction
    quad_error: float
    tail_bound: float = 0.0

    def __post_init__(self):
        if self.quad_error < 0:
            raise ValueError("quad_error must be nonnegative")


@dataclass(frozen=True)
class Trajectory:
    times: np.ndarray
    states: list[SpectralFunction]
    dt: float

    def __post_init__(self):
        t = np.asarray(self.times, dtype=float)
        if t.size == 0 or t[0] != 0.0 or np.any(np.diff(t) <= 0):
            raise ValueError("times must start at 0 and increase strictly")
        grids = {s.grid for s in self.states}
        if len(grids) > 1:
            raise ValueError("all states must share one grid")


@dataclass(frozen=True)
class FixedPointResult:
    value: SpectralFunction
    residual: float
    ratios: tuple[float, ...]
    iterations: int


def linear_propagate(f: SpectralFunction, t: float) -> SpectralFunction:
    """Free evolution: multiply by exp(-i t phi(xi)); exact group law."""
    if t == 0.0:
        return f
    return SpectralFunction(f.grid, f.indices, f.values * np.exp(-1j * t * phi(f.frequencies)))


@lru_cache(maxsize=16)
def _gauss_legendre(n: int):
    return np.polynomial.legendre.leggauss(n)


def _composite_nodes(t: float, level: int, base: int):
    """Nodes/weights of 2^level panels of base-point Gauss-Legendre on [0, t]."""
    x, w = _gauss_legendre(base)
    edges = np.linspace(0.0, t, 2**level + 1)
    half = np.diff(edges) / 2.0
    mid = (edges[:-1] + edges[1:]) / 2.0
    nodes = (mid[:, None] + half[:, None] * x[None, :]).ravel()
    weights = (half[:, None] * w[None, :]).ravel()
    return nodes, weights


def _stack_union(fns: list[SpectralFunction], grid: FrequencyGrid):
    """Align sparse functions on the union of their supports -> (idx, matrix)."""
    idx = np.unique(np.concatenate([f.indices for f in fns])) if fns else np.zeros(0, np.int64)
    mat = np.zeros((len(fns), idx.size), dtype=np.complex128)
    for j, f in enumerate(fns):
        mat[j, np.searchsorted(idx, f.indices)] = f.values
    return idx, mat


def _duhamel_quad(
    grid: FrequencyGrid,
    integrand,  # tau array -> (indices, (n_nodes, n_idx) conv matrix, node error array)
    t: float,
    quad: QuadratureSpec,
):
    """Composite-GL evaluation of int_0^t exp(-i(t-tau)phi) phi F(tau) dtau.

    The integrand callback returns the convolution values at all nodes in
    one aligned batch.  Returns (SpectralFunction, quadrature error); the
    error is the l1 change under the final node doubling plus the
    weighted node errors reported by the integrand (the kernel has
    modulus <= 1/2).
    """
    if t == 0.0:
        return SpectralFunction.zero(grid), 0.0
    prev_sf = None
    for level in range(quad.max_levels + 1):
        nodes, weights = _composite_nodes(t, level, quad.base_nodes)
        idx, mat, node_err = integrand(nodes)
        freqs = grid.frequencies(idx)
        kernel = np.exp(-1j * np.outer(t - nodes, phi(freqs)))  # (n_nodes, n_freq)
        vals = phi(freqs) * (weights[:, None] * kernel * mat).sum(axis=0)
        cur = SpectralFunction(grid, idx, vals)
        child_err = 0.5 * float(np.abs(weights) @ node_err)
        if prev_sf is not None:
            diff = distance(cur, prev_sf)
            if diff <= quad.tol:
                return cur, diff + child_err
        prev_sf = cur
    raise QuadratureError(
        f"duhamel quadrature did not converge below {quad.tol} in {quad.max_levels} doublings"
    )


def _listwise_integrand(fn, grid: FrequencyGrid):
    """Adapt a per-node SpectralFunction evaluator to the batched contract."""

    def integrand(nodes):
        convs = [fn(float(tau)) for tau in nodes]
        idx, mat = _stack_union(convs, grid)
        return idx, mat, np.zeros(len(nodes))

    return integrand


def duhamel(
    u: Callable[[float], SpectralFunction],
    v: Callable[[float], SpectralFunction],
    t: float,
    quad: QuadratureSpec = DEFAULT_QUAD,
    *,
    grid: FrequencyGrid | None = None,
) -> tuple[SpectralFunction, float]:
    """Bilinear Duhamel term N(u,v)(t) = int_0^t U(t-tau) phi(D)(uv)(tau) dtau.

    ``u`` and ``v`` map a time to a SpectralFunction; the physical product
    uv is the coefficient convolution.  Returns the term and a quadrature
    error estimate on the l1 scale.
    """
    if t < 0:
        raise ValueError("t must be nonnegative")
    if grid is None:
        grid = u(0.0).grid
    return _duhamel_quad(
        grid, _listwise_integrand(lambda tau: convolve(u(tau), v(tau)), grid), t, quad
    )


class PicardEngine:
    """Memoised evaluation of the Duhamel-expansion iterates of one datum.

    ``iterate(k, t)`` returns (value, accumulated quadrature error).  The
    first iterate is the free evolution; higher ones sum the bilinear
    term over ordered index splittings with prefactor -i/2.  The memo
    table is keyed by (k, t); confine one engine to one thread or guard
    it externally.
    """

    def __init__(self, u0: SpectralFunction, quad: QuadratureSpec = DEFAULT_QUAD):
        self.u0 = u0
        self.grid = u0.grid
        self.quad = quad
        self._memo: dict[tuple[int, float], tuple[SpectralFunction, float]] = {}
        max_freq = float(np.abs(u0.frequencies).max()) if u0.indices.size else 0.0
        self._max_index = int(np.abs(u0.indices).max()) if u0.indices.size else 0
        self._max_freq = max_freq
        self._l1 = u0.l1()

    def require_cutoff(self, k: int):
        if k * self._max_index > self.grid.halfwidth:
            raise SupportOverflowError(
                f"cutoff {self.grid.cutoff} cannot hold the {k}-fold support sumset "
                f"(needs index range {k * self._max_index})"
            )

    def iterate(self, k: int, t: float) -> tuple[SpectralFunction, float]:
        if k < 1:
            raise ValueError("iterate index must be >= 1")
        key = (k, float(t))
        hit = self._memo.get(key)
        if hit is not None:
            return hit
        if k == 1:
            out = (linear_propagate(self.u0, t), 0.0)
        else:
            self.require_cutoff(k)
            total = SpectralFunction.zero(self.grid)
            err = 0.0
            for k1 in range(1, k // 2 + 1):
                k2 = k - k1
                mult = 1.0 if k1 == k2 else 2.0
                term, term_err = _duhamel_quad(
                    self.grid, self._pair_integrand(k1, k2), t, self.quad
                )
                total = total + (-0.5j * mult) * term
                err += 0.5 * mult * term_err
            out = (total, err)
        self._memo[key] = out
        return out

    def _values_at(self, k: int, nodes: np.ndarray):
        """Aligned iterate values at the nodes: (idx, matrix, errors, l1 norms)."""
        if k == 1:
            idx = self.u0.indices
            mat = (
                np.exp(-1j * np.outer(nodes, phi(self.grid.frequencies(idx))))
                * self.u0.values[None, :]
            )
            errs = np.zeros(len(nodes))
        else:
            fns, err_list = [], []
            for tau in nodes:
                v, e = self.iterate(k, float(tau))
                fns.append(v)
                err_list.append(e)
            idx, mat = _stack_union(fns, self.grid)
            errs = np.asarray(err_list)
        l1 = np.abs(mat).sum(axis=1) * self.grid.measure_weight
        return idx, mat, errs, l1

    def _pair_integrand(self, k1: int, k2: int):
        """Batched convolution of the two iterate families across all nodes."""

        def integrand(nodes):
            ia, A, ea, la = self._values_at(k1, nodes)
            ib, B, eb, lb = self._values_at(k2, nodes)
            n = len(nodes)
            if ia.size == 0 or ib.size == 0:
                return np.zeros(0, np.int64), np.zeros((n, 0), np.complex128), np.zeros(n)
            sums = (ia[:, None] + ib[None, :]).ravel()
            m = self.grid.halfwidth
            if sums.min() < -m or sums.max() > m:
                raise SupportOverflowError(
                    f"iterate support sumset exceeds the grid range [-{m}, {m}]"
                )
            uniq = np.unique(sums)
            scatter = np.zeros((sums.size, uniq.size))
            scatter[np.arange(sums.size), np.searchsorted(uniq, sums)] = 1.0
            prods = np.einsum("ja,jb->jab", A, B).reshape(n, -1)
            mat = (prods @ scatter) * self.grid.measure_weight
            return uniq, mat, la * eb + ea * lb + ea * eb

        return integrand


def picard_iterate(
    u0: SpectralFunction,
    k: int,
    t: float,
    quad: QuadratureSpec = DEFAULT_QUAD,
    *,
    engine: PicardEngine | None = None,
) -> PicardResult:
    """The k-th term of the Duhamel expansion of the solution at time t."""
    if t < 0:
        raise ValueError("t must be nonnegative")
    if engine is None:
        engine = PicardEngine(u0, quad)
    engine.require_cutoff(k)
    value, err = engine.iterate(k, t)
    return PicardResult(k=k, t=t, value=value, quad_error=err)


def series_tail_bound(l1_norm: float, t: float, K: int, c: float = constants.C_PICARD) -> float:
    """Geometric bound on the l1 mass of all terms beyond index K."""
    rho = c * t * l1_norm
    if rho >= 1.0:
        return float("inf")
    return l1_norm * rho**K / (1.0 - rho)


def picard_series(
    u0: SpectralFunction,
    K: int,
    t: float,
    quad: QuadratureSpec = DEFAULT_QUAD,
    *,
    c: float = constants.C_PICARD,
    engine: PicardEngine | None = None,
) -> PicardResult:
    """Partial sum of the first K expansion terms with a tail certificate.

    Refuses when c * t * |u0|_l1 >= 1 (outside the contraction regime the
    geometric certificate is vacuous and the series may diverge).
    """
    if K < 1:
        raise ValueError("K must be >= 1")
    m = u0.l1()
    if c * t * m >= 1.0:
        raise ConvergenceRegimeError(
            f"c*t*|u0|_l1 = {c * t * m:.3g} >= 1: outside the convergence regime"
        )
    if engine is None:
        engine = PicardEngine(u0, quad)
    total = SpectralFunction.zero(u0.grid)
    err = 0.0
    for k in range(1, K + 1):
        value, e = engine.iterate(k, t)
        total = total + value
        err += e
    return PicardResult(
        k=K, t=t, value=total, quad_error=err, tail_bound=series_tail_bound(m, t, K, c)
    )


def _rhs(u: SpectralFunction) -> SpectralFunction:
    quad_term = convolve(u, u, truncate=True)
    lin = apply_multiplier(u, lambda xi: -1j * phi(xi))
    return lin + apply_multiplier(quad_term, lambda xi: -0.5j * phi(xi))


def integrate_rk4(
    u0: SpectralFunction,
    T: float,
    dt: float = constants.RK4_DT,
    *,
    store_every: int = 1,
    blowup_limit: float = 1e100,
) -> Trajectory:
    """Classical 4-stage time stepping of the spectral ODE system.

    Products are spectrally truncated at the cutoff (the convolution is
    linear over tracked supports, so no circular aliasing can occur).
    Real data stays Hermitian-symmetric to rounding.
    """
    if dt <= 0 or dt > constants.RK4_DT_MAX:
        raise ValueError(f"dt must lie in (0, {constants.RK4_DT_MAX}]")
    if T < 0:
        raise ValueError("T must be nonnegative")
    n_steps = max(1, int(np.ceil(T / dt - 1e-12))) if T > 0 else 0
    step = T / n_steps if n_steps else dt
    times = [0.0]
    states = [u0]
    u = u0
    for n in range(n_steps):
        k1 = _rhs(u)
        k2 = _rhs(u + (step / 2) * k1)
        k3 = _rhs(u + (step / 2) * k2)
        k4 = _rhs(u + step * k3)
        u = u + (step / 6) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        if u.values.size and np.abs(u.values).max() > blowup_limit:
            raise BlowUpError(
                f"coefficient magnitude exceeded {blowup_limit:g} at t = {(n + 1) * step:.6g} "
                f"(step {n + 1}); the data is outside the stable regime"
            )
        if (n + 1) % store_every == 0 or n == n_steps - 1:
            times.append((n + 1) * step)
            states.append(u)
    return Trajectory(np.array(times), states, step)


def energy(f: SpectralFunction) -> float:
    """The conserved quadratic functional sum (1+xi^2)|c|^2 h."""
    xi = f.frequencies
    return float(((1.0 + xi**2) * np.abs(f.values) ** 2).sum() * f.grid.measure_weight)


# -- fixed point of the solution map -----------------------------------


_FIXED_POINT_GRID_LIMIT = 8192


def _interp_rows(mesh_t: np.ndarray, rows: np.ndarray, tau: float) -> np.ndarray:
    """Piecewise-cubic (4-point Lagrange) interpolation of dense states in time."""
    n = mesh_t.size
    if n < 4:
        raise ValueError("mesh too coarse for cubic interpolation")
    dt = mesh_t[1] - mesh_t[0]
    j = int(np.clip(np.floor(tau / dt), 0, n - 2))
    i0 = int(np.clip(j - 1, 0, n - 4))
    ts = mesh_t[i0 : i0 + 4]
    w = np.ones(4)
    for a in range(4):
        for b in range(4):
            if a != b:
                w[a] *= (tau - ts[b]) / (ts[a] - ts[b])
    return w @ rows[i0 : i0 + 4]


def fixed_point_solve(
    u0: SpectralFunction,
    T: float,
    n_iter: int = 16,
    *,
    quad: QuadratureSpec = DEFAULT_QUAD,
    n_mesh: int = 64,
    tol: float = 1e-12,
    c: float = constants.C_PICARD,
) -> FixedPointResult:
    """Contraction iteration u <- U(t)u0 - (i/2) N(u,u)(t) on a uniform time mesh.

    States are kept dense on the grid (intended for desk-scale grids;
    refuses beyond _FIXED_POINT_GRID_LIMIT points).  Iterates from the
    free solution until the sup-in-time l1 change drops below ``tol``;
    reports the measured contraction ratios.
    """
    if c * T * u0.l1() >= 1.0:
        raise ConvergenceRegimeError(
            f"c*T*|u0|_l1 = {c * T * u0.l1():.3g} >= 1: contraction not guaranteed"
        )
    grid = u0.grid
    if len(grid) > _FIXED_POINT_GRID_LIMIT:
        raise ValueError(
            f"fixed_point_solve is desk-scale only (grid has {len(grid)} points, "
            f"limit {_FIXED_POINT_GRID_LIMIT})"
        )
    if T == 0.0:
        return FixedPointResult(u0, 0.0, (), 0)
    m = grid.halfwidth
    mesh_t = np.linspace(0.0, T, n_mesh + 1)
    dense0 = u0.to_dense()
    freqs = grid.frequencies(np.arange(-m, m + 1))
    free = np.exp(-1j * np.outer(mesh_t, phi(freqs))) * dense0[None, :]

    def sf(row):
        return SpectralFunction(grid, np.arange(-m, m + 1, dtype=np.int64), row)

    def apply_map(rows):
        out = np.empty_like(rows)
        out[0] = dense0
        for i, t in enumerate(mesh_t[1:], start=1):

            def conv_at(tau):
                row = _interp_rows(mesh_t, rows, tau)
                return convolve(sf(row), sf(row), truncate=True)

            nonlin, _ = _duhamel_quad(grid, _listwise_integrand(conv_at, grid), float(t), quad)
            out[i] = free[i] + (-0.5j) * nonlin.to_dense()
        return out

    rows = free.copy()
    dists: list[float] = []
    ratios: list[float] = []
    w = grid.measure_weight
    for it in range(1, n_iter + 1):
        new = apply_map(rows)
        d = float(np.abs(new - rows).sum(axis=1).max() * w)
        dists.append(d)
        if len(dists) >= 2 and dists[-2] > 0:
            r = dists[-1] / dists[-2]
            ratios.append(r)
            if r >= 1.0 and dists[-1] > tol:
                raise NonContractionError(
                    f"solution-map iteration expanded: ratio {r:.3g} at sweep {it}"
                )
        rows = new
        if d < tol:
            break
    return FixedPointResult(sf(rows[-1]), dists[-1], tuple(ratios), len(dists))
