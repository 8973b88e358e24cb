"""
Zariski Core Package

Exact-rational solver and certifier for Zariski decompositions in finite-dimensional
vector spaces carrying a system of functionals with non-negative off-diagonal values.

- system: ZariskiSystem / BasisVector values, validation, nef test, coordinate max
- simplex: exact two-phase simplex (Bland's rule)
- solver: decompositions, negative-part certificates, independence checks
"""

from src.zariski_core.system import (
    BasisVector,
    ZariskiSystem,
    coordinate_max,
    format_fraction,
    is_nef,
    to_fraction,
    validate_system,
)
from src.zariski_core.solver import (
    Decomposition,
    NegativityCertificate,
    certify_negative_part,
    independence_check,
    monotone_clipping,
    solve_decomposition,
)

__version__ = "1.0.0"
