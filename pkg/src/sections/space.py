"""
Section spaces of nD̄ and their sup norms

H⁰(P¹, nD) has the monomial basis z^{−i}, −n·c∞ ≤ i ≤ n·c₀. For a rotation-invariant
Green function the pointwise norm of z^{−i} on |z| = e^t is exp ℓ_i(t) with
ℓ_i(t) = (n·c₀ − i)·t − n·G(t)/2, so a section Σ c_i z^{−i} has

    |s|_{ng}(e^{t+iθ}) = |Σ c_i·exp ℓ_i(t)·e^{−iθ·i}|

The sup over θ is a trigonometric polynomial maximization (FFT sampling, then a local
refinement); the sup over t is a grid search refined around the best grid points.
"""

import logging
import math
from dataclasses import dataclass
from functools import cached_property
from typing import Dict, List, Sequence, Tuple

import numpy as np
from scipy import optimize
from scipy.special import logsumexp

from src.defaults import DEFAULT_TOL, RADIAL_GRID_SIZE
from src.errors import MalformedJob, ZeroSection
from src.p1.divisors import ModelDivisor
from src.p1.profiles import RadialProfile

logger = logging.getLogger(__name__)

SMALL_NORM_SLACK = 1e-12
REFINE_TOP = 3


@dataclass(frozen=True)
class SectionSpace:
    divisor: ModelDivisor
    n: int
    exponents: Tuple[int, ...]
    log_norms: Tuple[float, ...]

    @property
    def profile(self) -> RadialProfile:
        return self.divisor.profile

    @property
    def dimension(self) -> int:
        return len(self.exponents)

    def position(self, i: int) -> int:
        lo = self.exponents[0] if self.exponents else 0
        k = i - lo
        if not 0 <= k < len(self.exponents):
            raise MalformedJob(f"Exponent {i} outside H⁰ for n = {self.n}: {self.exponent_bounds()}")
        return k

    def exponent_bounds(self) -> Tuple[int, int]:
        if not self.exponents:
            return 0, -1
        return self.exponents[0], self.exponents[-1]

    def log_norm(self, i: int) -> float:
        return self.log_norms[self.position(i)]

    def monomial_logs(self, t) -> np.ndarray:
        """Matrix of ℓ_i(t): rows follow t, columns follow the exponents"""
        t = np.atleast_1d(np.asarray(t, dtype=float))
        exps = np.asarray(self.exponents, dtype=float)
        G = np.asarray(self.profile.G(t), dtype=float).reshape(-1, 1)
        return (self.n * self.profile.c0 - exps)[None, :] * t[:, None] - 0.5 * self.n * G

    def small_exponents(self) -> List[int]:
        """Exponents whose monomial has sup norm ≤ 1"""
        return [i for i, m in zip(self.exponents, self.log_norms) if m <= SMALL_NORM_SLACK]

    def radial_window(self) -> Tuple[float, float]:
        lo, hi = self.profile.search_window(margin=12.0)
        return lo, hi

    @cached_property
    def critical_points(self) -> Tuple[float, ...]:
        """Breakpoints of G and the maximizers of each monomial"""
        points = set(self.profile.breakpoints())
        if not self.profile.is_piecewise_linear():
            for i in self.exponents:
                t = self.profile.monomial_argmax(i, self.n)
                if t is not None and math.isfinite(t):
                    points.add(t)
        return tuple(sorted(points))


@dataclass(frozen=True)
class IntegerSection:
    """Σ c_i z^{−i}; `coeffs` holds (exponent, coefficient) pairs with coefficient ≠ 0"""

    coeffs: Tuple[Tuple[int, int], ...]

    @classmethod
    def from_mapping(cls, space: SectionSpace, values: Dict) -> "IntegerSection":
        pairs = []
        for key, value in sorted(((int(k), v) for k, v in values.items())):
            if isinstance(value, bool) or int(value) != value:
                raise MalformedJob(f"Section coefficient for z^-{key} must be an integer, got {value!r}")
            space.position(key)
            if value != 0:
                pairs.append((key, int(value)))
        return cls(tuple(pairs))

    @classmethod
    def from_vector(cls, space: SectionSpace, vector: Sequence[int]) -> "IntegerSection":
        return cls(tuple((i, int(c)) for i, c in zip(space.exponents, vector) if c != 0))

    def is_zero(self) -> bool:
        return not self.coeffs

    def dense(self, space: SectionSpace) -> np.ndarray:
        vector = np.zeros(space.dimension)
        for i, c in self.coeffs:
            vector[space.position(i)] = c
        return vector

    def to_payload(self) -> Dict[str, int]:
        return {str(i): c for i, c in self.coeffs}


def section_space(divisor: ModelDivisor, n: int) -> SectionSpace:
    """
    H⁰(P¹, nD) with its closed-form monomial log sup norms

    Args:
        divisor: model divisor
        n: tensor power, n ≥ 0
    """
    if n < 0:
        raise MalformedJob(f"Level n must be non-negative, got {n}")
    lo, hi = divisor.profile.exponent_range(n)
    exponents = tuple(range(lo, hi + 1))
    log_norms = tuple(float(divisor.monomial_log_norm(i, n)) for i in exponents)
    logger.debug(f"section space n={n}: exponents {lo}..{hi}")
    return SectionSpace(divisor=divisor, n=n, exponents=exponents, log_norms=log_norms)


def random_section(space: SectionSpace, rng: np.random.Generator, bound: int = 3) -> IntegerSection:
    """Uniform integer coefficients in [−bound, bound], redrawn until non-zero"""
    if space.dimension == 0:
        raise ZeroSection()
    while True:
        vector = rng.integers(-bound, bound + 1, size=space.dimension)
        if np.any(vector):
            return IntegerSection.from_vector(space, vector)


# ---- sup norm ---------------------------------------------------------------

def _angle_max(weights: np.ndarray, fft_size: int) -> float:
    """max_θ |Σ_k w_k e^{−ikθ}| for real weights w (a common factor e^{−i·lo·θ} drops out)"""
    if np.all(weights >= 0) or np.all(weights <= 0):
        return float(abs(weights.sum()))
    samples = np.abs(np.fft.fft(weights, n=fft_size))
    j = int(np.argmax(samples))
    step = 2.0 * math.pi / fft_size
    ks = np.arange(len(weights), dtype=float)

    def value(theta):
        return abs(np.sum(weights * np.exp(-1j * ks * theta)))

    res = optimize.minimize_scalar(lambda th: -value(th), bounds=(step * (j - 1), step * (j + 1)),
                                   method="bounded", options={"xatol": 1e-13})
    return max(float(samples[j]), -float(res.fun))


def _log_angle_sup(space: SectionSpace, vector: np.ndarray, t: float, fft_size: int) -> float:
    """log max_θ |s|_{ng}(e^{t+iθ})"""
    logs = space.monomial_logs(t)[0]
    active = vector != 0
    top = float(np.max(logs[active]))
    weights = np.where(active, vector * np.exp(np.where(active, logs - top, 0.0)), 0.0)
    amplitude = _angle_max(weights, fft_size)
    if amplitude <= 0:
        return -math.inf
    return top + math.log(amplitude)


def _end_limits(space: SectionSpace, vector: np.ndarray) -> List[float]:
    """Limits of log|s| at |z| → 0 and |z| → ∞ where a monomial with zero end slope survives"""
    limits = []
    profile = space.profile
    for i, c in zip(space.exponents, vector):
        if c == 0:
            continue
        left, right = profile.monomial_limits(i, space.n)
        for value in (left, right):
            if value is not None:
                limits.append(math.log(abs(c)) + value)
    return limits


def log_sup_norm(s: IntegerSection, space: SectionSpace, tol: float = DEFAULT_TOL,
                 grid_size: int = RADIAL_GRID_SIZE) -> float:
    """
    log ‖s‖_{ng}, the log of the sup over ℂ of |s(z)|·exp(−n·g(z)/2)

    Raises:
        ZeroSection: s = 0
    """
    if s.is_zero():
        raise ZeroSection()
    vector = s.dense(space)
    fft_size = max(64, 8 * space.dimension)

    lo, hi = space.radial_window()
    grid = np.concatenate([np.linspace(lo, hi, grid_size), list(space.critical_points)])
    grid = np.unique(grid)
    values = np.array([_log_angle_sup(space, vector, t, fft_size) for t in grid])

    candidates = list(values) + _end_limits(space, vector)
    order = np.argsort(values)[::-1][:REFINE_TOP]
    xatol = max(min(tol, 1e-6), 1e-13)
    for k in order:
        a = grid[max(k - 1, 0)]
        b = grid[min(k + 1, len(grid) - 1)]
        if b <= a:
            continue
        res = optimize.minimize_scalar(lambda t: -_log_angle_sup(space, vector, t, fft_size),
                                       bounds=(a, b), method="bounded", options={"xatol": xatol})
        candidates.append(-float(res.fun))
    return max(candidates)


def sup_norm(s: IntegerSection, space: SectionSpace, tol: float = DEFAULT_TOL) -> float:
    """‖s‖_{ng}; see log_sup_norm"""
    return math.exp(log_sup_norm(s, space, tol))


def l2_circle_lower_bound(s: IntegerSection, space: SectionSpace, t: float) -> float:
    """log sqrt(Σ c_i²·exp 2ℓ_i(t)), the circle mean of |s|², a lower bound for log ‖s‖"""
    if s.is_zero():
        raise ZeroSection()
    vector = s.dense(space)
    logs = space.monomial_logs(t)[0]
    active = vector != 0
    return 0.5 * float(logsumexp(2.0 * logs[active] + 2.0 * np.log(np.abs(vector[active]))))
