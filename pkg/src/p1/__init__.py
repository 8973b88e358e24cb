"""
P1 Package

Arithmetic ℝ-divisors on P¹_ℤ with rotation-invariant Green functions.

- profiles: radial profile algebra shared by all families
- divisors: model divisor families, horizontal curves, Green values and degrees
- intersection: pairing, toric volume, Hodge index check
- decomposition: positivity predicates, closed-form Zariski decompositions, volumes
"""

from src.p1.divisors import (
    C0,
    Admissible,
    CInf,
    Combination,
    HorizontalCurve,
    KinkSum,
    ModelDivisor,
    OneKink,
    PrincipalShift,
    Scaled,
    TwoKink,
    degree_on_curve,
    degree_sweep,
    difference,
    green_value,
    rational_point,
    zero_divisor,
)
from src.p1.intersection import hodge_index_check, pairing, toric_volume
from src.p1.decomposition import (
    DecompositionP1,
    is_adequate_sufficient,
    is_big,
    is_effective,
    is_nef_p1,
    is_psh,
    negative_part_certificate,
    negative_part_matrix,
    volume_p1,
    zariski_decompose_p1,
)

__version__ = "1.0.0"
