# Sigma - σ-decomposition nD = n·M_n + n·F_n from small sections, asymptotic multiplicities,
#         asymptotic orthogonality of the σ-decomposition
# Main functions: sigma_decomposition(), asymptotic_multiplicity(), orthogonality_probe()
# Used by: commands/handlers.py (sections-sigma, probe-orth), scripts/verify_acceptance.py, tests

import logging
import math
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from src.defaults import CANONICAL_LOG_RADII, DEFAULT_TOL
from src.errors import EmptySections, InputError
from src.p1.divisors import HorizontalCurve, ModelDivisor
from src.sections.distortion import default_grid, log_distortion, log_inner_products
from src.sections.space import SectionSpace, section_space

logger = logging.getLogger(__name__)

LIMIT_TOLERANCE = 0.05
ANALYTIC_AGREEMENT = 1e-8


@dataclass(frozen=True)
class FixedPart:
    """Minimal C₀ / C∞ multiplicities of (z^{−i}) + nD over the small monomials"""

    n: int
    small_exponents: Tuple[int, ...]
    nu_c0: float
    nu_cinf: float


def fixed_part(space: SectionSpace) -> FixedPart:
    """
    Multiplicities at C₀ and C∞ of the fixed part of |nD̄|

    (z^{−i}) + nD = (n·c₀ − i)·C₀ + (i + n·c∞)·C∞. A small section with c_i ≠ 0 has
    |c_i|·‖z^{−i}‖ ≤ ‖s‖ ≤ 1 by circle averaging, so z^{−i} is small too and the minimum over
    Ĥ⁰ is the minimum over small monomials.

    Raises:
        EmptySections: Ĥ⁰(nD̄) = {0}
    """
    small = space.small_exponents()
    if not small:
        raise EmptySections(space.n)
    profile = space.profile
    nu_c0 = max(0.0, space.n * profile.c0 - max(small))
    nu_cinf = max(0.0, space.n * profile.cinf + min(small))
    return FixedPart(n=space.n, small_exponents=tuple(small), nu_c0=nu_c0, nu_cinf=nu_cinf)


# ---- σ-decomposition --------------------------------------------------------

@dataclass(frozen=True)
class SigmaResult:
    n: int
    small_exponents: Tuple[int, ...]
    f_c0: float
    f_cinf: float
    m_c0: float
    m_cinf: float
    log_r: Tuple[float, ...]
    green_movable: Tuple[float, ...]
    exact: bool = True

    def rows(self) -> List[Dict]:
        return [{"log_r": t, "g_M": g} for t, g in zip(self.log_r, self.green_movable)]


def sigma_decomposition(divisor: ModelDivisor, n: int, grid: Optional[Sequence[float]] = None,
                        tol: float = DEFAULT_TOL) -> SigmaResult:
    """
    F_n = (1/n)·Σ_C min mult_C and M_n = D − F_n with g_{M_n} = g + (1/n)·log dist(V(nD̄); ng)

    Args:
        divisor: model divisor
        n: level, n ≥ 1
        grid: log|z| values for the Green table
        tol: quadrature tolerance

    Raises:
        EmptySections: Ĥ⁰(nD̄) = {0}
    """
    if n < 1:
        raise InputError(f"Level n must be positive, got {n}", n=n)
    space = section_space(divisor, n)
    fixed = fixed_part(space)
    grid = default_grid(space) if grid is None else list(grid)

    log_inner = log_inner_products(space, fixed.small_exponents, tol)
    log_dist = log_distortion(space, log_inner, grid)
    green = np.asarray(space.profile.green(np.asarray(grid)), dtype=float) + log_dist / n

    f_c0 = fixed.nu_c0 / n
    f_cinf = fixed.nu_cinf / n
    logger.info(f"✓ σ-decomposition n={n}: F_n = {f_c0:.6g}·C0 + {f_cinf:.6g}·CInf")
    return SigmaResult(
        n=n,
        small_exponents=fixed.small_exponents,
        f_c0=f_c0,
        f_cinf=f_cinf,
        m_c0=space.profile.c0 - f_c0,
        m_cinf=space.profile.cinf - f_cinf,
        log_r=tuple(float(t) for t in grid),
        green_movable=tuple(float(g) for g in green),
    )


# ---- asymptotic multiplicity ------------------------------------------------

@dataclass(frozen=True)
class MultiplicityResult:
    curve: str
    value: float
    sequence: Tuple[Tuple[int, float], ...]
    exact: bool = True


def asymptotic_multiplicity(divisor: ModelDivisor, curve: HorizontalCurve, n_max: int) -> MultiplicityResult:
    """
    μ_C(D̄) ≈ inf_{n ≤ n_max} ν_C(nD̄)/n

    Rational points other than C₀ / C∞ never meet the monomial divisors, so their value is 0.

    Raises:
        EmptySections: no level n ≤ n_max has small sections
    """
    sequence = []
    for n in range(1, n_max + 1):
        space = section_space(divisor, n)
        try:
            fixed = fixed_part(space)
        except EmptySections:
            continue
        if curve.kind == "C0":
            nu = fixed.nu_c0
        elif curve.kind == "CInf":
            nu = fixed.nu_cinf
        else:
            nu = 0.0
        sequence.append((n, nu / n))
    if not sequence:
        raise EmptySections(n_max)
    value = min(v for _, v in sequence)
    logger.info(f"✓ μ_{curve.label()} ≈ {value:.6g} over {len(sequence)} level(s)")
    return MultiplicityResult(curve=curve.label(), value=value, sequence=tuple(sequence))


# ---- asymptotic orthogonality -----------------------------------------------

@dataclass(frozen=True)
class CanonicalValue:
    value: float
    samples: Tuple[float, ...]
    analytic: float
    converged: bool
    agrees: bool


def _canonical_degree(space: SectionSpace, log_inner: Dict[int, float], exponent: int, sign: float,
                      radii: Sequence[float], tol: float) -> CanonicalValue:
    """
    deg(M̄_n | C₀) (sign −1) or deg(M̄_n | C∞) (sign +1)

    n·M_n shifted by z^{±exponent} has no pole at the curve; its canonical value is the limit of
    ½·[n·g + log dist + 2·exponent·t]/n, read at the two radii and extrapolated. The analytic
    limit −L_exponent/(2n) is reported alongside.
    """
    n = space.n
    ts = np.array([sign * r for r in radii], dtype=float)
    log_d = log_distortion(space, log_inner, ts)
    g = np.asarray(space.profile.green(ts), dtype=float)
    samples = 0.5 * (n * g + log_d + 2.0 * exponent * ts) / n

    # residual decays at least like exp(−2|t|)
    q = math.exp(-2.0 * abs(ts[-1] - ts[0]))
    value = float(samples[-1] + (samples[-1] - samples[0]) * q / (1.0 - q))
    analytic = -log_inner[exponent] / (2.0 * n)
    converged = abs(samples[-1] - samples[0]) <= max(tol, 1e-12) * (1.0 + abs(value))
    agrees = abs(value - analytic) <= ANALYTIC_AGREEMENT * (1.0 + abs(analytic))
    if not converged:
        logger.warning(f"canonical value at n={n} not converged: {samples.tolist()}")
    if not agrees:
        logger.warning(f"canonical value at n={n} disagrees with analytic limit: {value} vs {analytic}")
    return CanonicalValue(value=value, samples=tuple(samples.tolist()), analytic=analytic,
                          converged=converged, agrees=agrees)


@dataclass(frozen=True)
class OrthogonalityRow:
    n: int
    f_c0: float
    f_cinf: float
    degree_c0: float
    degree_cinf: float
    value: float
    converged: bool
    agrees: bool


@dataclass(frozen=True)
class OrthogonalityReport:
    rows: Tuple[OrthogonalityRow, ...]
    non_negative: bool
    decreasing: bool
    limit: float
    limit_ok: bool

    @property
    def verdict(self) -> bool:
        return self.non_negative and self.decreasing and self.limit_ok

    def table(self) -> List[Dict]:
        return [{"n": r.n, "value": r.value, "f_c0": r.f_c0, "deg_c0": r.degree_c0,
                 "f_cinf": r.f_cinf, "deg_cinf": r.degree_cinf} for r in self.rows]


def _extrapolate_limit(levels: Sequence[int], values: Sequence[float]) -> float:
    """Least squares on {1, log n/n, 1/n}; the constant term estimates the limit"""
    if len(levels) < 3:
        return float(values[-1])
    ns = np.asarray(levels, dtype=float)
    design = np.column_stack([np.ones_like(ns), np.log(ns) / ns, 1.0 / ns])
    coef, *_ = np.linalg.lstsq(design, np.asarray(values, dtype=float), rcond=None)
    return float(coef[0])


def orthogonality_probe(divisor: ModelDivisor, n_list: Sequence[int], tol: float = DEFAULT_TOL,
                        radii: Sequence[float] = CANONICAL_LOG_RADII) -> OrthogonalityReport:
    """
    deg(M̄_n | F_n) = f₀·deg(M̄_n|C₀) + f∞·deg(M̄_n|C∞) for each n, with a decay verdict

    The verdict asks for non-negative values, a last value below the first, and an
    extrapolated limit within 0.05 of 0.
    """
    if not n_list:
        raise InputError("orthogonality_probe needs at least one level")
    logger.info(f"=== ASYMPTOTIC ORTHOGONALITY PROBE (n in {list(n_list)}) ===")
    rows = []
    for n in sorted(set(n_list)):
        if n < 1:
            raise InputError(f"Level n must be positive, got {n}", n=n)
        space = section_space(divisor, n)
        fixed = fixed_part(space)
        log_inner = log_inner_products(space, fixed.small_exponents, tol)
        k, j = max(fixed.small_exponents), min(fixed.small_exponents)
        deg0 = _canonical_degree(space, log_inner, k, -1.0, radii, tol)
        deginf = _canonical_degree(space, log_inner, j, 1.0, radii, tol)
        f0, finf = fixed.nu_c0 / n, fixed.nu_cinf / n
        value = f0 * deg0.value + finf * deginf.value
        rows.append(OrthogonalityRow(
            n=n, f_c0=f0, f_cinf=finf, degree_c0=deg0.value, degree_cinf=deginf.value, value=value,
            converged=deg0.converged and deginf.converged, agrees=deg0.agrees and deginf.agrees,
        ))
        logger.debug(f"n={n}: deg(M_n|F_n) = {value:.6g}")

    values = [r.value for r in rows]
    non_negative = all(v >= -max(tol, 1e-12) for v in values)
    decreasing = len(values) < 2 or values[-1] < values[0] or max(abs(v) for v in values) <= tol
    limit = _extrapolate_limit([r.n for r in rows], values)
    limit_ok = abs(limit) <= LIMIT_TOLERANCE
    mark = "✓" if non_negative and decreasing and limit_ok else "✗"
    logger.info(f"{mark} deg(M_n|F_n): {[round(v, 6) for v in values]}, limit ≈ {limit:.4g}")
    return OrthogonalityReport(rows=tuple(rows), non_negative=non_negative, decreasing=decreasing,
                               limit=limit, limit_ok=limit_ok)
