"""
Distortion functions and the L²-versus-sup experiments

Volume form: Φ = the curvature measure of (C₀, −log|z|² + log(|z|² + 1)), rotation- and
conjugation-invariant with total mass 1. In t = log|z| it is 2e^{2t}/(1 + e^{2t})² dt
times the uniform angle measure.

Monomials are orthogonal for rotation-invariant metrics, so an orthonormal basis of a
monomial subspace V is {z^{−i}/√⟨z^{−i}, z^{−i}⟩} and

    dist(V; ng)(t) = Σ_{i∈V} exp(2ℓ_i(t) − L_i),   L_i = log ⟨z^{−i}, z^{−i}⟩_{ng}
"""

import logging
import math
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np
from scipy import integrate
from scipy.special import logsumexp

from src.defaults import (
    DEFAULT_TOL,
    DISTORTION_GRID_SIZE,
    DISTORTION_WINDOW,
    PROBE_MAX_LEVEL,
    RADIAL_GRID_SIZE,
)
from src.errors import InputError, QuadratureDivergence, ZeroSection
from src.p1.divisors import Combination, ModelDivisor
from src.sections.space import IntegerSection, SectionSpace, log_sup_norm, random_section, section_space

logger = logging.getLogger(__name__)

GROWTH_EXPONENT_LIMIT = 3.25
STABILITY_RATIO = 0.10


def log_volume_density(t):
    """log of 2e^{2t}/(1 + e^{2t})²"""
    t = np.asarray(t, dtype=float)
    return math.log(2.0) + 2.0 * t - 2.0 * np.logaddexp(0.0, 2.0 * t)


# ---- inner products ---------------------------------------------------------

def _log_inner(space: SectionSpace, i: int, tol: float) -> float:
    m = space.log_norm(i)

    def f(t):
        return math.exp(2.0 * (space.profile.monomial_log(i, space.n, t) - m) + float(log_volume_density(t)))

    lo, hi = space.radial_window()
    points = set(space.profile.breakpoints()) | {0.0}
    argmax = space.profile.monomial_argmax(i, space.n)
    if argmax is not None and math.isfinite(argmax):
        points.add(argmax)
    points = sorted(p for p in points if lo < p < hi)

    total, err = integrate.quad(f, lo, hi, points=points or None, limit=400, epsabs=0.0, epsrel=1e-11)
    tail_abs = 1e-3 * max(tol, 1e-9) * total
    for a, b in ((-np.inf, lo), (hi, np.inf)):
        value, tail_err = integrate.quad(f, a, b, limit=200, epsabs=tail_abs, epsrel=1e-11)
        total += value
        err += tail_err
    if not total > 0.0 or err > max(tol, 1e-9) * total:
        raise QuadratureDivergence(f"inner product of z^-{i} at n={space.n}", err, max(tol, 1e-9) * total)
    return 2.0 * m + math.log(total)


def log_inner_products(space: SectionSpace, exponents: Optional[Iterable[int]] = None,
                       tol: float = DEFAULT_TOL) -> Dict[int, float]:
    """L_i = log ⟨z^{−i}, z^{−i}⟩_{ng} = log ∫ exp(2ℓ_i)·Φ for each exponent"""
    exponents = space.exponents if exponents is None else exponents
    return {i: _log_inner(space, i, tol) for i in exponents}


def section_inner_product(s: IntegerSection, log_inner: Dict[int, float]) -> float:
    """⟨s, s⟩ = Σ c_i²·⟨z^{−i}, z^{−i}⟩ by orthogonality of monomials"""
    return float(sum(c * c * math.exp(log_inner[i]) for i, c in s.coeffs))


def section_log_pointwise(s: IntegerSection, space: SectionSpace, t: float, theta: float) -> float:
    """log |s|_{ng} at z = e^{t + iθ}"""
    if s.is_zero():
        raise ZeroSection()
    logs = space.monomial_logs(t)[0]
    value = sum(c * math.exp(logs[space.position(i)]) * complex(math.cos(i * theta), -math.sin(i * theta))
                for i, c in s.coeffs)
    return math.log(abs(value)) if abs(value) > 0 else -math.inf


# ---- distortion -------------------------------------------------------------

@dataclass(frozen=True)
class DistortionTable:
    n: int
    exponents: Tuple[int, ...]
    log_r: Tuple[float, ...]
    log_dist: Tuple[float, ...]

    @property
    def values(self) -> Tuple[float, ...]:
        return tuple(math.exp(v) for v in self.log_dist)

    def rows(self) -> List[Dict]:
        return [{"log_r": t, "dist": math.exp(v)} for t, v in zip(self.log_r, self.log_dist)]


def log_distortion(space: SectionSpace, log_inner: Dict[int, float], grid: Sequence[float]) -> np.ndarray:
    """log dist(V; ng) on a log-radius grid, V spanned by the keys of `log_inner`"""
    grid = np.asarray(grid, dtype=float)
    if not log_inner:
        return np.full(len(grid), -np.inf)
    columns = [space.position(i) for i in log_inner]
    logs = space.monomial_logs(grid)[:, columns]
    offsets = np.array([log_inner[i] for i in log_inner])
    return logsumexp(2.0 * logs - offsets[None, :], axis=1)


def default_grid(space: SectionSpace, size: int = DISTORTION_GRID_SIZE) -> List[float]:
    lo, hi = DISTORTION_WINDOW
    points = [p for p in space.profile.breakpoints() if lo < p < hi]
    return sorted(set(np.linspace(lo, hi, size).tolist()) | set(points))


def distortion(space: SectionSpace, sub_basis: Optional[Iterable[int]] = None,
               grid: Optional[Sequence[float]] = None, tol: float = DEFAULT_TOL) -> DistortionTable:
    """
    Radial table of dist(V; ng) for V spanned by the monomials in `sub_basis`

    Args:
        space: section space of nD
        sub_basis: exponents spanning V (default: all of H⁰(nD))
        grid: log|z| values (default: the distortion window)
        tol: quadrature tolerance for the inner products

    Raises:
        QuadratureDivergence: an inner product missed its tolerance
    """
    exponents = tuple(space.exponents if sub_basis is None else sorted(set(sub_basis)))
    for i in exponents:
        space.position(i)
    grid = default_grid(space) if grid is None else list(grid)
    log_inner = log_inner_products(space, exponents, tol)
    values = log_distortion(space, log_inner, grid)
    return DistortionTable(n=space.n, exponents=exponents, log_r=tuple(grid), log_dist=tuple(values.tolist()))


# ---- growth probe -----------------------------------------------------------

@dataclass(frozen=True)
class GrowthReport:
    levels: Tuple[int, ...]
    sup_dist: Tuple[float, ...]
    constant: float
    growth_constant: float
    chain_constant: float
    chain_holds: bool
    growth_exponent: Optional[float]
    exponent_ok: bool
    worst_chain_gap: float = 0.0

    def rows(self) -> List[Dict]:
        return [{"n": n, "sup_dist": d, "bound": self.constant * (n + 1) ** 3}
                for n, d in zip(self.levels, self.sup_dist)]


def dist_growth_probe(divisor: ModelDivisor, n_max: int, tol: float = DEFAULT_TOL,
                      grid: Optional[Sequence[float]] = None) -> GrowthReport:
    """
    Fit dist(V(nD̄); ng) ≤ C(n + 1)³ for n ≤ n_max and test the chain inequality

    V(nD̄) is spanned by the small monomials, which is exact for rotation-invariant g. With
    C₁ = max sup dist_n/(n + 1)³ and C₂ = max dist_n·dist_m/((m + 1)³·dist_{n+m}) over n ≥ m,
    C = max(C₁, 8·C₂) satisfies both properties; the chain inequality is then checked
    pointwise on the grid for every n + m ≤ n_max.
    """
    if n_max > PROBE_MAX_LEVEL or n_max < 1:
        raise InputError(f"n_max must lie in 1..{PROBE_MAX_LEVEL}, got {n_max}", n_max=n_max)
    logger.info(f"=== DISTORTION GROWTH PROBE (n ≤ {n_max}) ===")
    base = section_space(divisor, 0)
    grid = default_grid(base) if grid is None else list(grid)

    # log dist per level on the grid; level 0 is the constants with dist ≡ 1
    log_d = {0: np.zeros(len(grid))}
    for n in range(1, n_max + 1):
        space = section_space(divisor, n)
        small = space.small_exponents()
        log_d[n] = log_distortion(space, log_inner_products(space, small, tol), grid)
        logger.debug(f"n={n}: dim V = {len(small)}")

    levels = tuple(range(0, n_max + 1))
    sup = [float(np.max(log_d[n])) for n in levels]
    log_c1 = max(s - 3.0 * math.log(n + 1) for n, s in zip(levels, sup) if math.isfinite(s))

    log_c2 = -math.inf
    pairs = [(n, m) for n in levels for m in levels if m <= n and n + m <= n_max]
    for n, m in pairs:
        both = np.isfinite(log_d[n]) & np.isfinite(log_d[m])
        if not np.any(both):
            continue
        gap = log_d[n][both] + log_d[m][both] - log_d[n + m][both] - 3.0 * math.log(m + 1)
        log_c2 = max(log_c2, float(np.max(gap)))
    log_c = max(log_c1, math.log(8.0) + log_c2)

    worst = -math.inf
    for n, m in pairs:
        both = np.isfinite(log_d[n]) & np.isfinite(log_d[m])
        if not np.any(both):
            continue
        lhs = log_d[n][both] + log_d[m][both] - 2.0 * log_c - 3.0 * math.log((n + 1) * (m + 1))
        rhs = log_d[n + m][both] - log_c - 3.0 * math.log(n + m + 1)
        worst = max(worst, float(np.max(lhs - rhs)))
    chain_holds = worst <= 1e-9

    finite = [(n, s) for n, s in zip(levels, sup) if n >= 1 and math.isfinite(s)]
    exponent = None
    if len(finite) >= 3:
        xs = np.log([n + 1 for n, _ in finite])
        ys = np.array([s for _, s in finite])
        exponent = float(np.polyfit(xs, ys, 1)[0])
    exponent_ok = exponent is None or exponent <= GROWTH_EXPONENT_LIMIT

    mark = "✓" if chain_holds and exponent_ok else "✗"
    logger.info(f"{mark} C = {math.exp(log_c):.6g}, chain gap {worst:.3g}, growth exponent {exponent}")
    return GrowthReport(
        levels=levels,
        sup_dist=tuple(math.exp(s) if math.isfinite(s) else 0.0 for s in sup),
        constant=math.exp(log_c),
        growth_constant=math.exp(log_c1),
        chain_constant=math.exp(log_c2) if math.isfinite(log_c2) else 0.0,
        chain_holds=chain_holds,
        growth_exponent=exponent,
        exponent_ok=exponent_ok,
        worst_chain_gap=worst,
    )


# ---- Gromov probe -----------------------------------------------------------

@dataclass(frozen=True)
class GromovReport:
    constant: float
    doubled_constant: float
    stable: bool
    samples: int
    evaluated: int
    worst_coefficients: Tuple[float, ...] = field(default_factory=tuple)


def _gromov_pass(divisors: Sequence[ModelDivisor], samples: int, tol: float, rng: np.random.Generator,
                 a_max: float, sections_per_draw: int, grid_size: int) -> Tuple[float, int, Tuple[float, ...]]:
    best, evaluated, worst = 0.0, 0, ()
    draws = [np.zeros(len(divisors))]
    draws += [rng.uniform(-a_max, a_max, size=len(divisors)) for _ in range(samples - 1)]
    for a in draws:
        combined = Combination(tuple((float(c), d) for c, d in zip(a, divisors)))
        space = section_space(combined, 1)
        if space.dimension == 0:
            continue
        log_inner = log_inner_products(space, tol=tol)
        scale = (1.0 + float(np.sum(np.abs(a)))) ** 2
        candidates = [IntegerSection(((i, 1),)) for i in space.exponents]
        candidates += [random_section(space, rng) for _ in range(sections_per_draw)]
        for s in candidates:
            sup_sq = math.exp(2.0 * log_sup_norm(s, space, tol, grid_size))
            ratio = sup_sq / (scale * section_inner_product(s, log_inner))
            evaluated += 1
            if ratio > best:
                best, worst = ratio, tuple(float(x) for x in a)
    return best, evaluated, worst


def gromov_probe(divisors: Sequence[ModelDivisor], samples: int, tol: float = DEFAULT_TOL,
                 seed: int = 0, a_max: float = 2.0, sections_per_draw: int = 4,
                 grid_size: int = RADIAL_GRID_SIZE // 2) -> GromovReport:
    """
    Estimate sup ‖φ‖² / ((1 + Σ|a_i|)²·⟨φ, φ⟩) over φ ∈ H⁰(Σ a_i D_i) and a_i ∈ [−a_max, a_max]

    The first draw is a = 0; draws whose H⁰ is empty are skipped. The estimate is repeated
    with twice the samples from an independent stream; `stable` means the two agree within 10%.
    """
    if not divisors:
        raise InputError("gromov_probe needs at least one divisor")
    if samples < 1:
        raise InputError(f"samples must be positive, got {samples}", samples=samples)
    logger.info(f"=== GROMOV PROBE ({len(divisors)} divisor(s), {samples} samples) ===")
    first, evaluated, worst = _gromov_pass(divisors, samples, tol, np.random.default_rng(seed),
                                           a_max, sections_per_draw, grid_size)
    second, evaluated2, _ = _gromov_pass(divisors, 2 * samples, tol, np.random.default_rng(seed + 1),
                                         a_max, sections_per_draw, grid_size)
    stable = abs(second - first) <= STABILITY_RATIO * max(first, second)
    mark = "✓" if stable else "✗"
    logger.info(f"{mark} Gromov constant ≈ {first:.6g} (doubled samples: {second:.6g})")
    return GromovReport(constant=first, doubled_constant=second, stable=stable, samples=samples,
                        evaluated=evaluated + evaluated2, worst_coefficients=worst)
