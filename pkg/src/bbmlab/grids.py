"""Discrete frequency grids and sparse spectral functions.

A field is represented by its Fourier coefficients on a symmetric grid:
the integers |xi| <= cutoff for the torus, or the lattice h*Z truncated
to [-cutoff, cutoff] for the line.  Coefficients are stored sparsely
(sorted integer grid indices plus complex values) and every operation
tracks supports exactly, so band-limited data stays cheap no matter how
large the cutoff is.  Line-kind sums carry the Riemann weight h so that
norms and convolutions quantify their continuum counterparts.

No 2*pi factors are used anywhere: norms are defined directly on
coefficients, and physical-space sampling is normalised so that the
discrete Plancherel identity is exact.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Iterable

import numpy as np

__all__ = [
    "FrequencyGrid",
    "SpectralFunction",
    "GridMismatchError",
    "SupportOverflowError",
    "UndersampledError",
    "convolve",
    "apply_multiplier",
    "support_measure",
    "to_physical",
    "physical_points",
    "read_spectrum",
    "write_spectrum",
]


class GridMismatchError(ValueError):
    """Two operands live on different grids."""


class SupportOverflowError(ValueError):
    """A support sumset does not fit inside the grid cutoff."""


class UndersampledError(ValueError):
    """Too few physical sample points for alias-free synthesis."""


@dataclass(frozen=True)
class FrequencyGrid:
    """Symmetric frequency grid: Z on the torus, h*Z on the line.

    Attributes:
        kind: "torus" (integer frequencies, spacing forced to 1) or
            "line" (frequencies are integer multiples of ``spacing``).
        cutoff: positive integer; the grid holds |xi| <= cutoff.
        spacing: lattice step h, 0 < h <= 1.
    """

    kind: str
    cutoff: int
    spacing: float = 1.0

    def __post_init__(self):
        if self.kind not in ("torus", "line"):
            raise ValueError(f"unknown grid kind {self.kind!r}")
        if not (isinstance(self.cutoff, (int, np.integer)) and self.cutoff >= 1):
            raise ValueError(f"cutoff must be a positive integer, got {self.cutoff!r}")
        object.__setattr__(self, "cutoff", int(self.cutoff))
        if self.kind == "torus":
            if self.spacing != 1.0:
                raise ValueError("torus grids have unit spacing")
        else:
            if not (0.0 < self.spacing <= 1.0):
                raise ValueError(f"line spacing must lie in (0, 1], got {self.spacing}")
        object.__setattr__(self, "spacing", float(self.spacing))

    @property
    def halfwidth(self) -> int:
        """Largest index M; indices run over -M..M with frequency idx*spacing."""
        return int(np.floor(self.cutoff / self.spacing + 1e-12))

    def __len__(self) -> int:
        return 2 * self.halfwidth + 1

    @property
    def measure_weight(self) -> float:
        """Weight of one grid point: counting measure (1) on the torus, h on the line."""
        return self.spacing

    @property
    def period(self) -> float:
        """Period of the dual physical domain, 2*pi/h."""
        return 2.0 * np.pi / self.spacing

    def frequencies(self, indices: np.ndarray) -> np.ndarray:
        return np.asarray(indices, dtype=np.int64) * self.spacing

    def index_of(self, xi: float) -> int:
        """Grid index of a frequency; raises if xi is not on the lattice."""
        m = xi / self.spacing
        k = int(np.rint(m))
        if abs(m - k) > 1e-9:
            raise ValueError(f"frequency {xi} is not a multiple of spacing {self.spacing}")
        if abs(k) > self.halfwidth:
            raise ValueError(f"frequency {xi} exceeds cutoff {self.cutoff}")
        return k

    def all_indices(self) -> np.ndarray:
        m = self.halfwidth
        return np.arange(-m, m + 1, dtype=np.int64)


def _as_sorted_unique(indices, values):
    idx = np.asarray(indices, dtype=np.int64)
    val = np.asarray(values, dtype=np.complex128)
    if idx.shape != val.shape or idx.ndim != 1:
        raise ValueError("indices and values must be 1-d arrays of equal length")
    uniq, inv = np.unique(idx, return_inverse=True)
    if uniq.size == idx.size:
        order = np.argsort(idx, kind="stable")
        return idx[order], val[order]
    merged = np.zeros(uniq.size, dtype=np.complex128)
    np.add.at(merged, inv, val)
    return uniq, merged


@dataclass(frozen=True)
class SpectralFunction:
    """Complex Fourier coefficients on a grid, stored sparsely.

    ``indices`` is sorted and unique; every grid point not listed carries
    an exactly-zero coefficient, which is the support-soundness
    invariant.  Instances are immutable and safe to share across threads.
    """

    grid: FrequencyGrid
    indices: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        idx, val = _as_sorted_unique(self.indices, self.values)
        if idx.size and (idx[0] < -self.grid.halfwidth or idx[-1] > self.grid.halfwidth):
            raise ValueError("coefficient index outside the grid")
        if not np.all(np.isfinite(val.view(np.float64))):
            raise ValueError("coefficients must be finite")
        idx.setflags(write=False)
        val.setflags(write=False)
        object.__setattr__(self, "indices", idx)
        object.__setattr__(self, "values", val)

    # -- constructors -------------------------------------------------

    @classmethod
    def zero(cls, grid: FrequencyGrid) -> "SpectralFunction":
        return cls(grid, np.empty(0, dtype=np.int64), np.empty(0, dtype=np.complex128))

    @classmethod
    def delta(cls, grid: FrequencyGrid, xi: float, amplitude: complex = 1.0) -> "SpectralFunction":
        return cls(grid, np.array([grid.index_of(xi)]), np.array([amplitude], dtype=np.complex128))

    @classmethod
    def from_coefficients(cls, grid, frequencies, values) -> "SpectralFunction":
        idx = np.array([grid.index_of(x) for x in np.atleast_1d(frequencies)], dtype=np.int64)
        return cls(grid, idx, np.atleast_1d(values))

    @classmethod
    def indicator(cls, grid, lo: float, hi: float, amplitude: complex = 1.0) -> "SpectralFunction":
        """Coefficients ``amplitude`` on all grid frequencies in [lo, hi]."""
        m = grid.halfwidth
        ilo = int(np.ceil(lo / grid.spacing - 1e-12))
        ihi = int(np.floor(hi / grid.spacing + 1e-12))
        ilo, ihi = max(ilo, -m), min(ihi, m)
        if ilo > ihi:
            return cls.zero(grid)
        idx = np.arange(ilo, ihi + 1, dtype=np.int64)
        return cls(grid, idx, np.full(idx.size, amplitude, dtype=np.complex128))

    # -- views --------------------------------------------------------

    @property
    def frequencies(self) -> np.ndarray:
        return self.grid.frequencies(self.indices)

    @property
    def support(self) -> tuple[int, int] | None:
        """Index range (lo, hi) outside which coefficients are exactly zero."""
        if self.indices.size == 0:
            return None
        return int(self.indices[0]), int(self.indices[-1])

    @property
    def nnz(self) -> int:
        return int(np.count_nonzero(self.values))

    def active(self) -> tuple[np.ndarray, np.ndarray]:
        """Indices and values of the exactly-nonzero coefficients."""
        mask = self.values != 0
        return self.indices[mask], self.values[mask]

    def coeff(self, xi: float) -> complex:
        k = self.grid.index_of(xi)
        pos = np.searchsorted(self.indices, k)
        if pos < self.indices.size and self.indices[pos] == k:
            return complex(self.values[pos])
        return 0.0 + 0.0j

    def to_dense(self) -> np.ndarray:
        out = np.zeros(len(self.grid), dtype=np.complex128)
        out[self.indices + self.grid.halfwidth] = self.values
        return out

    def l1(self) -> float:
        """h-weighted absolute coefficient sum (the Wiener-algebra norm)."""
        return float(np.abs(self.values).sum() * self.grid.measure_weight)

    def l2(self) -> float:
        return float(np.sqrt((np.abs(self.values) ** 2).sum() * self.grid.measure_weight))

    def is_hermitian(self, tol: float = 1e-12) -> bool:
        """coeff(-xi) == conj(coeff(xi)) up to tol, the real-field symmetry."""
        rev = SpectralFunction(self.grid, -self.indices, np.conj(self.values))
        return distance(self, rev) <= tol * max(1.0, self.l1())

    # -- arithmetic ---------------------------------------------------

    def __add__(self, other: "SpectralFunction") -> "SpectralFunction":
        _require_same_grid(self, other)
        idx = np.concatenate([self.indices, other.indices])
        val = np.concatenate([self.values, other.values])
        return SpectralFunction(self.grid, idx, val)

    def __sub__(self, other: "SpectralFunction") -> "SpectralFunction":
        return self + (-1.0) * other

    def __mul__(self, scalar: complex) -> "SpectralFunction":
        return SpectralFunction(self.grid, self.indices, self.values * scalar)

    __rmul__ = __mul__


def _require_same_grid(f: SpectralFunction, g: SpectralFunction):
    if f.grid != g.grid:
        raise GridMismatchError(f"operands on different grids: {f.grid} vs {g.grid}")


def distance(f: SpectralFunction, g: SpectralFunction) -> float:
    """h-weighted l1 distance between coefficient arrays."""
    return (f - g).l1()


# -- operations -------------------------------------------------------

_DIRECT_LIMIT = 4_000_000  # outer-product entries before switching to windowed convolve


def convolve(
    f: SpectralFunction,
    g: SpectralFunction,
    *,
    truncate: bool = False,
    method: str = "auto",
) -> SpectralFunction:
    """Linear convolution of coefficient arrays on a shared grid.

    (f*g)(xi) = sum_eta f(eta) g(xi - eta) * h, with h = 1 on the torus.
    The support of the result is exactly the sumset of the operand
    supports; if that sumset pokes past the cutoff a SupportOverflowError
    is raised unless ``truncate=True``, in which case out-of-grid terms
    are dropped (spectral truncation).

    ``method``: "auto" picks a sparse outer-product accumulation for
    small supports and a windowed dense convolve otherwise; "fft" forces
    an FFT-padded product over the support window.
    """
    _require_same_grid(f, g)
    grid = f.grid
    fi, fv = f.active()
    gi, gv = g.active()
    if fi.size == 0 or gi.size == 0:
        return SpectralFunction.zero(grid)

    lo, hi = int(fi[0] + gi[0]), int(fi[-1] + gi[-1])
    m = grid.halfwidth
    if (lo < -m or hi > m) and not truncate:
        raise SupportOverflowError(
            f"convolution support [{lo}, {hi}] exceeds grid range [-{m}, {m}]; "
            "pass truncate=True to project back onto the grid"
        )

    if method == "auto":
        method = "direct" if fi.size * gi.size <= _DIRECT_LIMIT else "window"

    if method == "direct":
        sums = (fi[:, None] + gi[None, :]).ravel()
        prods = (fv[:, None] * gv[None, :]).ravel()
        out_idx, inv = np.unique(sums, return_inverse=True)
        out = np.bincount(inv, weights=prods.real, minlength=out_idx.size).astype(np.complex128)
        out += 1j * np.bincount(inv, weights=prods.imag, minlength=out_idx.size)
    else:
        fd = np.zeros(int(fi[-1] - fi[0]) + 1, dtype=np.complex128)
        gd = np.zeros(int(gi[-1] - gi[0]) + 1, dtype=np.complex128)
        fd[fi - fi[0]] = fv
        gd[gi - gi[0]] = gv
        if method == "window":
            dense = np.convolve(fd, gd)
        elif method == "fft":
            n = 1 << int(np.ceil(np.log2(fd.size + gd.size - 1)))
            dense = np.fft.ifft(np.fft.fft(fd, n) * np.fft.fft(gd, n))[: fd.size + gd.size - 1]
        else:
            raise ValueError(f"unknown convolution method {method!r}")
        out_idx = np.arange(lo, hi + 1, dtype=np.int64)
        out = dense

    keep = (out_idx >= -m) & (out_idx <= m)
    return SpectralFunction(grid, out_idx[keep], out[keep] * grid.measure_weight)


def apply_multiplier(f: SpectralFunction, m: Callable[[np.ndarray], np.ndarray]) -> SpectralFunction:
    """Pointwise Fourier multiplier; support can only shrink."""
    freqs = f.frequencies
    try:
        mv = np.asarray(m(freqs), dtype=np.complex128)
        if mv.shape != freqs.shape:
            raise TypeError
    except TypeError:
        mv = np.array([m(x) for x in freqs], dtype=np.complex128)
    return SpectralFunction(f.grid, f.indices, f.values * mv)


def support_measure(f: SpectralFunction, threshold: float = 0.0) -> float:
    """Measure (count, times h on the line) of frequencies with |coeff| > threshold."""
    if threshold < 0:
        raise ValueError("threshold must be nonnegative")
    return float(np.count_nonzero(np.abs(f.values) > threshold) * f.grid.measure_weight)


def physical_points(grid: FrequencyGrid, n_samples: int) -> np.ndarray:
    """Equispaced sample points covering one period of the dual domain."""
    return np.arange(n_samples) * (grid.period / n_samples)


def to_physical(f: SpectralFunction, n_samples: int) -> np.ndarray:
    """Inverse synthesis f(x_j) = sum_k c_k exp(i x_j xi_k) at equispaced x_j.

    Requires n_samples >= 2 * len(grid) so that all grid exponentials stay
    orthogonal under the sample measure; then the discrete Plancherel
    identity (with point weight h/n_samples) is exact.
    """
    if n_samples < 2 * len(f.grid):
        raise UndersampledError(
            f"n_samples={n_samples} < 2*{len(f.grid)} grid points; increase sampling"
        )
    x = physical_points(f.grid, n_samples)
    if f.indices.size == 0:
        return np.zeros(n_samples, dtype=np.complex128)
    return np.exp(1j * np.outer(x, f.frequencies)) @ f.values


def physical_l2(samples: np.ndarray, grid: FrequencyGrid) -> float:
    """L2 norm of a physical sample array under the h/n normalisation."""
    w = grid.measure_weight / samples.shape[-1]
    return float(np.sqrt((np.abs(samples) ** 2).sum(axis=-1) * w))


# -- spectrum files ---------------------------------------------------
#
# CSV format: header "xi,re,im", one row per stored frequency, xi strictly
# increasing.  Frequencies absent from the file are zero.


def write_spectrum(f: SpectralFunction, path) -> None:
    idx, val = f.active()
    freqs = f.grid.frequencies(idx)
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("xi,re,im\n")
        for x, v in zip(freqs, val):
            fh.write(f"{x:.17g},{v.real:.17g},{v.imag:.17g}\n")


def _infer_spacing(freqs: np.ndarray) -> float:
    nz = np.abs(freqs[freqs != 0])
    if nz.size == 0:
        return 1.0
    if np.allclose(freqs, np.rint(freqs), atol=1e-9):
        return 1.0
    # float gcd over the magnitudes, tolerance 1e-9
    h = float(nz[0])
    for x in nz[1:]:
        a, b = max(h, float(x)), min(h, float(x))
        while b > 1e-9:
            a, b = b, a % b
        h = a
    return h


def read_spectrum(
    path,
    *,
    kind: str | None = None,
    cutoff: int | None = None,
    spacing: float | None = None,
) -> SpectralFunction:
    """Parse a spectrum CSV; grid parameters are inferred unless given."""
    freqs, values = [], []
    with open(path, "r", encoding="utf-8") as fh:
        header = fh.readline().strip()
        if header.replace(" ", "") != "xi,re,im":
            raise ValueError(f"{path}:1: expected header 'xi,re,im', got {header!r}")
        for lineno, line in enumerate(fh, start=2):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            parts = line.split(",")
            if len(parts) != 3:
                raise ValueError(f"{path}:{lineno}: expected 3 fields, got {len(parts)}")
            try:
                x, re, im = (float(p) for p in parts)
            except ValueError as exc:
                raise ValueError(f"{path}:{lineno}: {exc}") from None
            if freqs and x <= freqs[-1]:
                raise ValueError(f"{path}:{lineno}: frequencies must be strictly increasing")
            freqs.append(x)
            values.append(complex(re, im))
    farr = np.array(freqs) if freqs else np.zeros(0)
    h = spacing if spacing is not None else _infer_spacing(farr)
    if kind is None:
        kind = "torus" if h == 1.0 else "line"
    if cutoff is None:
        cutoff = max(1, int(np.ceil(np.abs(farr).max()))) if farr.size else 1
    grid = FrequencyGrid(kind, cutoff, h if kind == "line" else 1.0)
    return SpectralFunction.from_coefficients(grid, farr, np.array(values, dtype=np.complex128))
