"""Frozen calibration constants and default tolerances.

The two growth constants below were calibrated once on a training set
(two-band perturbation data over N in {16, ..., 1024}, perturbed smooth
profiles, and random band-limited data, k up to 5) and then frozen;
`bbmlab verify` re-measures them.  The measured maximum for the Picard
constant was 0.1667 (attained by the band-pair family, uniformly in N);
it is frozen with ~20% headroom.  An a-priori ceiling is 1/4: the
dispersion multiplier is bounded by 1/2 and the bilinear term carries a
prefactor 1/2.
"""

# Picard growth constant: |U_k(t)|_l1 <= (C_PICARD*t)^(k-1) * M^(k-1) * M.
C_PICARD = 0.2

# Base for the support-measure growth bound: measure(supp U_k) <= C_SUPPORT^k.
C_SUPPORT = 6.0

# Operational surrogates for the asymptotic regime ("large N", "small T").
N_MIN = 16
R_MIN = 8.0
T_MAX = 0.1

# Factor eta operationalising "much greater/less than" in condition checks.
CONDITION_MARGIN = 2.0

# Default spacing for truncated-line grids; resolves unit-width bands well.
DEFAULT_LINE_SPACING = 0.125

# Oversampling factor for Wiener-amalgam physical-space quadrature.
WIENER_OVERSAMPLE = 8

# Tolerances for identity-type and inequality-type checks.
TOL_IDENTITY = 1e-12
TOL_INEQUALITY = 1e-8

# Quadrature defaults (see dynamics.QuadratureSpec).
QUAD_BASE_NODES = 8
QUAD_TOL = 1e-10
QUAD_MAX_LEVELS = 8

# Time stepping defaults.
RK4_DT = 1e-3
RK4_DT_MAX = 0.1
