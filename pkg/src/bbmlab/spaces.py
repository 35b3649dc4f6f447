"""Norms of the four time-frequency families on spectral functions.

Families (all on the Fourier side, h-weighted on line grids):

* Fourier-Lebesgue  "fl":  || <xi>^s F f ||_{L^q}
* Fourier amalgam   "fa":  || ||F f||_{L^p(n+Q1)} <n>^s ||_{l^q_n},  Q1 = (-1/2, 1/2]
* modulation        "mod": || ||band_n f||_{L^2_x} <n>^s ||_{l^q_n}   (p = 2, via Plancherel)
* Wiener amalgam    "wa":  || || band_n f(x) <n>^s ||_{l^q_n} ||_{L^2_x}  (p = 2, sampled)

Band pieces come from a frequency-uniform partition of unity (sharp
blocks or triangular hats).  The homogeneous variants replace <n>^s by
|n|^s and drop the n = 0 band entirely (|0|^s is singular for s < 0);
for "fl" the whole frequency block (-1/2, 1/2] is dropped.

On integer (torus) grids every block holds exactly one frequency, so
fl^q_s coincides with fa^{q,q}_s and both p=2 families collapse to the
weighted l2 Sobolev norm when q = 2.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from math import inf, isinf

import numpy as np

from .constants import WIENER_OVERSAMPLE
from .grids import (
    FrequencyGrid,
    SpectralFunction,
    physical_l2,
    to_physical,
)

__all__ = [
    "SpaceSpec",
    "PartitionOfUnity",
    "build_partition",
    "block_index",
    "fourier_lebesgue_norm",
    "fourier_amalgam_norm",
    "modulation_norm",
    "wiener_amalgam_norm",
    "space_norm",
    "band_restricted_norm",
    "parse_space_spec",
]

FAMILIES = ("fl", "fa", "mod", "wa")


@dataclass(frozen=True)
class SpaceSpec:
    """(family, p, q, s, homogeneous) selecting one norm.

    p and q live in [1, inf]; "mod" and "wa" require p = 2 and "fl"
    requires p = q (its p plays no role).
    """

    family: str
    p: float
    q: float
    s: float
    homogeneous: bool = False

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ValueError(f"unknown space family {self.family!r}")
        for name, e in (("p", self.p), ("q", self.q)):
            if not (e >= 1.0):
                raise ValueError(f"exponent {name} must lie in [1, inf], got {e}")
        if self.family in ("mod", "wa") and self.p != 2:
            raise ValueError(f"{self.family} norms are implemented for p = 2 only")
        if self.family == "fl" and self.p != self.q:
            raise ValueError("fl norms use a single exponent; set p = q")

    def text(self) -> str:
        def fmt(e):
            return "inf" if isinf(e) else f"{e:g}"

        base = f"{self.family}:{fmt(self.p)}:{fmt(self.q)}:{self.s:g}"
        return base + (":hom" if self.homogeneous else "")


def parse_space_spec(text: str) -> SpaceSpec:
    """Parse 'family:p:q:s[:hom]', e.g. 'fa:2:1:-0.5' or 'wa:2:4:-1:hom'."""
    parts = text.strip().split(":")
    if len(parts) not in (4, 5):
        raise ValueError(f"bad space spec {text!r}; expected family:p:q:s[:hom]")
    fam = parts[0].lower()
    hom = False
    if len(parts) == 5:
        if parts[4].lower() != "hom":
            raise ValueError(f"bad trailing token {parts[4]!r}; only ':hom' is allowed")
        hom = True
    try:
        p = inf if parts[1].lower() == "inf" else float(parts[1])
        q = inf if parts[2].lower() == "inf" else float(parts[2])
        s = float(parts[3])
    except ValueError as exc:
        raise ValueError(f"bad space spec {text!r}: {exc}") from None
    return SpaceSpec(fam, p, q, s, hom)


def block_index(xi) -> np.ndarray:
    """Index n of the block n + Q1 = (n-1/2, n+1/2] containing xi."""
    return np.ceil(np.asarray(xi, dtype=float) - 0.5).astype(np.int64)


@dataclass(frozen=True)
class PartitionOfUnity:
    """Translates sigma_n(xi) = sigma_0(xi - n) of a unit bump, sum_n sigma_n = 1.

    kind "sharp" uses indicator blocks n + Q1; "triangle" uses hats of
    width 2 with sigma_n(n) = 1.  Both make the partition identity exact
    on any grid.
    """

    kind: str
    bandwidth: float = 2.0

    def __post_init__(self):
        if self.kind not in ("sharp", "triangle"):
            raise ValueError(f"unknown partition kind {self.kind!r}")

    def weight(self, n: int, xi) -> np.ndarray:
        x = np.asarray(xi, dtype=float) - n
        if self.kind == "sharp":
            return ((x > -0.5) & (x <= 0.5)).astype(float)
        return np.clip(1.0 - np.abs(x), 0.0, 1.0)

    def bands_touching(self, xi: np.ndarray) -> np.ndarray:
        """All band indices whose weight is nonzero on some xi."""
        if xi.size == 0:
            return np.zeros(0, dtype=np.int64)
        if self.kind == "sharp":
            return np.unique(block_index(xi))
        lo = int(np.ceil(xi.min() - 1.0))
        hi = int(np.floor(xi.max() + 1.0))
        n = np.arange(lo, hi + 1, dtype=np.int64)
        keep = [k for k in n if np.any(self.weight(int(k), xi) > 0)]
        return np.asarray(keep, dtype=np.int64)


def build_partition(kind: str) -> PartitionOfUnity:
    return PartitionOfUnity(kind)


_DEFAULT_PARTITION = PartitionOfUnity("triangle")


# -- weight and exponent helpers ---------------------------------------


def _band_weights(n: np.ndarray, spec: SpaceSpec) -> np.ndarray:
    n = np.asarray(n, dtype=float)
    if spec.homogeneous:
        w = np.zeros_like(n)
        nz = n != 0
        w[nz] = np.abs(n[nz]) ** spec.s
        return w
    return (1.0 + n**2) ** (spec.s / 2.0)


def _lp(values: np.ndarray, p: float, weight: float = 1.0) -> float:
    """(sum |v|^p * weight)^(1/p), maxima for p = inf (no weight)."""
    a = np.abs(values)
    if a.size == 0:
        return 0.0
    if isinf(p):
        return float(a.max())
    return float((np.sum(a**p) * weight) ** (1.0 / p))


def _weighted_lq(amounts: np.ndarray, weights: np.ndarray, q: float) -> float:
    prod = amounts * weights
    if prod.size == 0:
        return 0.0
    if isinf(q):
        return float(prod.max(initial=0.0))
    return float(np.sum(prod**q) ** (1.0 / q))


# -- the four evaluators ------------------------------------------------


def fourier_lebesgue_norm(f: SpectralFunction, spec: SpaceSpec) -> float:
    """Weighted L^q of the coefficients, weight <xi>^s at the frequency itself."""
    if spec.family != "fl":
        raise ValueError("spec.family must be 'fl'")
    xi = f.frequencies
    vals = np.abs(f.values)
    if spec.homogeneous:
        keep = block_index(xi) != 0
        xi, vals = xi[keep], vals[keep]
        w = np.abs(xi) ** spec.s
    else:
        w = (1.0 + xi**2) ** (spec.s / 2.0)
    if isinf(spec.q):
        return float((vals * w).max(initial=0.0))
    return float(((vals * w) ** spec.q).sum() ** (1.0 / spec.q) * f.grid.measure_weight ** (1.0 / spec.q))


def _block_amounts(f: SpectralFunction, p: float) -> tuple[np.ndarray, np.ndarray]:
    """Sharp-block L^p masses: returns (block indices, amounts)."""
    xi = f.frequencies
    blocks = block_index(xi)
    uniq, inv = np.unique(blocks, return_inverse=True)
    amounts = np.empty(uniq.size)
    a = np.abs(f.values)
    if isinf(p):
        amounts.fill(0.0)
        np.maximum.at(amounts, inv, a)
    else:
        acc = np.bincount(inv, weights=a**p, minlength=uniq.size)
        amounts = (acc * f.grid.measure_weight) ** (1.0 / p)
    return uniq, amounts


def fourier_amalgam_norm(f: SpectralFunction, spec: SpaceSpec) -> float:
    """Inner L^p over sharp unit blocks, outer weighted l^q over block indices."""
    if spec.family != "fa":
        raise ValueError("spec.family must be 'fa'")
    blocks, amounts = _block_amounts(f, spec.p)
    if spec.homogeneous:
        keep = blocks != 0
        blocks, amounts = blocks[keep], amounts[keep]
    return _weighted_lq(amounts, _band_weights(blocks, spec), spec.q)


def _band_l2_amounts(f: SpectralFunction, partition: PartitionOfUnity):
    """Per-band Plancherel masses ||sigma_n . Ff||_{l2,h}; returns (bands, amounts)."""
    xi = f.frequencies
    bands = partition.bands_touching(xi)
    a2 = np.abs(f.values) ** 2
    out = np.empty(bands.size)
    for i, n in enumerate(bands):
        w = partition.weight(int(n), xi)
        out[i] = np.sqrt((w**2 * a2).sum() * f.grid.measure_weight)
    return bands, out


def modulation_norm(
    f: SpectralFunction,
    spec: SpaceSpec,
    partition: PartitionOfUnity = _DEFAULT_PARTITION,
) -> float:
    """Band decomposition, L^2_x per band via Plancherel, weighted l^q over bands."""
    if spec.family != "mod":
        raise ValueError("spec.family must be 'mod'")
    bands, amounts = _band_l2_amounts(f, partition)
    if spec.homogeneous:
        keep = bands != 0
        bands, amounts = bands[keep], amounts[keep]
    return _weighted_lq(amounts, _band_weights(bands, spec), spec.q)


def wiener_amalgam_norm(
    f: SpectralFunction,
    spec: SpaceSpec,
    partition: PartitionOfUnity = _DEFAULT_PARTITION,
    n_samples: int | None = None,
) -> float:
    """Pointwise weighted l^q over band pieces in physical space, then L^2_x.

    Band pieces are synthesised at shared sample points; the sample count
    defaults to WIENER_OVERSAMPLE * len(grid), comfortably alias-free.
    """
    if spec.family != "wa":
        raise ValueError("spec.family must be 'wa'")
    if n_samples is None:
        n_samples = WIENER_OVERSAMPLE * len(f.grid)
    xi = f.frequencies
    bands = partition.bands_touching(xi)
    if spec.homogeneous:
        bands = bands[bands != 0]
    if bands.size == 0 or f.indices.size == 0:
        return 0.0
    weights = _band_weights(bands, spec)
    pieces = np.stack(
        [
            to_physical(
                SpectralFunction(f.grid, f.indices, f.values * partition.weight(int(n), xi)),
                n_samples,
            )
            for n in bands
        ]
    )  # (n_bands, n_samples)
    a = np.abs(pieces) * weights[:, None]
    if isinf(spec.q):
        profile = a.max(axis=0)
    else:
        profile = (a**spec.q).sum(axis=0) ** (1.0 / spec.q)
    return physical_l2(profile, f.grid)


def space_norm(
    f: SpectralFunction,
    spec: SpaceSpec,
    *,
    partition: PartitionOfUnity = _DEFAULT_PARTITION,
    n_samples: int | None = None,
) -> float:
    """Dispatch to the family evaluator selected by ``spec``."""
    if spec.family == "fl":
        return fourier_lebesgue_norm(f, spec)
    if spec.family == "fa":
        return fourier_amalgam_norm(f, spec)
    if spec.family == "mod":
        return modulation_norm(f, spec, partition)
    return wiener_amalgam_norm(f, spec, partition, n_samples)


def band_restricted_norm(
    f: SpectralFunction,
    spec: SpaceSpec,
    n0: int,
    *,
    partition: PartitionOfUnity = _DEFAULT_PARTITION,
) -> float:
    """The outer l^q sum restricted to the single band n0.

    This is the one-band witness used by the inflation experiments; by
    construction it satisfies the exact weight-exchange identity
    value(s = theta) = <n0>^(theta-s) * value(s).  For "wa" the single
    band's L^2_x is evaluated by Plancherel, no sampling needed.
    """
    m = f.grid.halfwidth * f.grid.spacing
    if not (-m - 0.5 <= n0 <= m + 0.5):
        raise ValueError(f"band {n0} lies outside the grid range [-{m}, {m}]")
    w = float(_band_weights(np.array([n0]), spec)[0])
    if spec.family in ("fl", "fa"):
        p = spec.q if spec.family == "fl" else spec.p
        xi = f.frequencies
        inside = block_index(xi) == n0
        return w * _lp(f.values[inside], p, f.grid.measure_weight)
    sig = partition.weight(n0, f.frequencies)
    mass = float(np.sqrt((sig**2 * np.abs(f.values) ** 2).sum() * f.grid.measure_weight))
    return w * mass


def sobolev_norm(f: SpectralFunction, s: float) -> float:
    """Weighted-l2 norm (sum <xi>^{2s} |c|^2 h)^(1/2), the p = q = 2 collapse."""
    xi = f.frequencies
    w = (1.0 + xi**2) ** s
    return float(np.sqrt((w * np.abs(f.values) ** 2).sum() * f.grid.measure_weight))


def with_regularity(spec: SpaceSpec, s: float) -> SpaceSpec:
    return replace(spec, s=s)
