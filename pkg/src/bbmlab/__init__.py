"""bbmlab: numerical laboratory for BBM mild solutions and norm inflation.

Represents fields by sparse Fourier data on truncated frequency grids,
evaluates Fourier-Lebesgue / Fourier-amalgam / modulation / Wiener-amalgam
norms, solves the BBM evolution by three independent routes (Duhamel
series, time stepping, contraction iteration), verifies the quantitative
lemmas of the mild-solution theory as executable oracles, and runs the
norm-inflation parameter sweeps.
"""

from .grids import (
    FrequencyGrid,
    SpectralFunction,
    GridMismatchError,
    SupportOverflowError,
    UndersampledError,
    apply_multiplier,
    convolve,
    physical_points,
    read_spectrum,
    support_measure,
    to_physical,
    write_spectrum,
)
from .spaces import (
    PartitionOfUnity,
    SpaceSpec,
    band_restricted_norm,
    build_partition,
    fourier_amalgam_norm,
    fourier_lebesgue_norm,
    modulation_norm,
    parse_space_spec,
    sobolev_norm,
    space_norm,
    wiener_amalgam_norm,
)
from .dynamics import (
    BlowUpError,
    ConvergenceRegimeError,
    FixedPointResult,
    NonContractionError,
    PicardEngine,
    PicardResult,
    QuadratureError,
    QuadratureSpec,
    Trajectory,
    duhamel,
    energy,
    fixed_point_solve,
    integrate_rk4,
    linear_propagate,
    phi,
    picard_iterate,
    picard_series,
)

__version__ = "0.1.0"
