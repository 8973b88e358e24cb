# Defaults - global numeric defaults shared by the library and the command line
# Used by: p1/intersection.py, p1/decomposition.py, sections/*, commands/handlers.py

# Absolute quadrature / comparison tolerance
DEFAULT_TOL = 1e-10

# Largest candidate box hhat0_exact will enumerate
ENUMERATION_CAP = 10**7

# Canonical values at z = 0 / z = ∞ are read off at these log radii, then extrapolated
CANONICAL_LOG_RADII = (40.0, 44.0)

# Rational points (m:n) with |m|, n ≤ this height are sampled by the nef cross-check
NEF_SAMPLE_HEIGHT = 20

# Radial grid used by sup-norm searches and distortion tables
RADIAL_GRID_SIZE = 400
DISTORTION_WINDOW = (-12.0, 12.0)
DISTORTION_GRID_SIZE = 241

# Largest level accepted by dist_growth_probe
PROBE_MAX_LEVEL = 32

# Worker threads for section enumeration
DEFAULT_JOBS = 1
