# Counting - small-section counts ĥ⁰(nD̄): exact enumeration, log-domain bounds, S_n sub-box
# Main functions: hhat0_exact(), hhat0_bounds(), sn_box()
# Used by: commands/handlers.py (sections-count), scripts/verify_acceptance.py, tests

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import List, Optional, Tuple

import numpy as np

from src.defaults import DEFAULT_JOBS, DEFAULT_TOL, ENUMERATION_CAP, RADIAL_GRID_SIZE
from src.errors import AmbiguousBoundary, BoxTooLarge, UnsupportedConfiguration, UnsupportedFamily
from src.p1.divisors import OneKink
from src.sections.space import IntegerSection, SectionSpace, log_sup_norm

logger = logging.getLogger(__name__)

CHUNK_SIZE = 2048
EXACT_SLACK = 1e-12
LOWER_BOUND_ANGLES = 16
LOWER_BOUND_GRID = 32
FLOOR_SLACK = 1e-9
LOG_EXACT_LIMIT = 36.0


@dataclass(frozen=True)
class CountResult:
    n: int
    count: int
    log_count: float
    box_size: int
    full_searches: int = 0
    retested: int = 0


@dataclass(frozen=True)
class CountBounds:
    n: int
    lower: float
    upper: float
    lower_width: int = 0


@dataclass(frozen=True)
class SubBox:
    exponents: Tuple[int, ...]
    bounds: Tuple[int, ...]
    log_size: float
    certified: bool


def coefficient_bound(log_norm: float) -> int:
    """⌊exp(−m)⌋: the largest |c| with |c|·‖z^{−i}‖ ≤ 1"""
    return int(math.floor(math.exp(min(-log_norm, 700.0)) + FLOOR_SLACK))


def _log_box_side(x: float) -> float:
    """log(2⌊e^x⌋ + 1), staying in the log domain for large x"""
    if x > LOG_EXACT_LIMIT:
        return math.log(2.0) + x + math.log1p(math.exp(-x) / 2.0)
    return math.log(2 * math.floor(math.exp(x) + FLOOR_SLACK) + 1)


# ---- bounds -----------------------------------------------------------------

def hhat0_bounds(space: SectionSpace) -> CountBounds:
    """
    Log-domain bounds on ĥ⁰ without enumeration

    Upper: every small section has |c_i| ≤ exp(−m_i), so the box Π(2⌊exp(−m_i)⌋ + 1) contains
    Ĥ⁰. Lower: for K exponents with the smallest norms, |c_i| ≤ exp(−m_i)/K keeps
    Σ|c_i|·exp(m_i) ≤ 1, so that sub-box lies inside Ĥ⁰; the best K is taken.
    """
    xs = sorted((-m for m in space.log_norms), reverse=True)
    upper = sum(_log_box_side(x) for x in xs)

    lower, best_k = 0.0, 0
    for k in range(1, len(xs) + 1):
        shift = math.log(k)
        if xs[k - 1] - shift < 0:
            break
        value = sum(_log_box_side(x - shift) for x in xs[:k])
        if value > lower:
            lower, best_k = value, k
    logger.debug(f"ĥ⁰ bounds at n={space.n}: [{lower:.6g}, {upper:.6g}] (K={best_k})")
    return CountBounds(n=space.n, lower=lower, upper=upper, lower_width=best_k)


def sn_box(space: SectionSpace) -> SubBox:
    """
    The sub-box S_n for a one-kink divisor with α > 1 > β

    Exponents i ≤ N·θ/3 (N = n·λ) with |a_i| ≤ β^{−i/(1−θ)}. Membership in Ĥ⁰ holds for
    n ≫ 1; `certified` records whether the triangle inequality already proves it at this n.
    """
    d = space.divisor
    if not isinstance(d, OneKink):
        raise UnsupportedFamily(d.family, "the S_n sub-box is defined for one-kink divisors")
    la, lb = d.log_alpha, d.log_beta
    if not (la > 0 > lb):
        raise UnsupportedConfiguration("the S_n sub-box needs α > 1 > β", log_alpha=la, log_beta=lb)
    theta = la / (la - lb)
    top = math.floor(space.n * d.lam * theta / 3.0 + FLOOR_SLACK)
    exponents = tuple(i for i in range(0, top + 1) if i in space.exponents)
    bounds = tuple(int(math.floor(math.exp(-i * lb / (1.0 - theta)) + FLOOR_SLACK)) for i in exponents)
    log_size = sum(math.log(2 * b + 1) for b in bounds)
    # Σ b_i·‖z^{−i}‖ ≤ 1
    terms = [math.log(b) + space.log_norm(i) for i, b in zip(exponents, bounds) if b > 0]
    certified = not terms or float(np.logaddexp.reduce(terms)) <= EXACT_SLACK
    return SubBox(exponents=exponents, bounds=bounds, log_size=log_size, certified=certified)


# ---- exact enumeration ------------------------------------------------------

class _Classifier:
    """Vectorized accept/reject tests for chunks of candidate coefficient vectors"""

    def __init__(self, space: SectionSpace, active: List[int], tol: float, grid_size: int):
        self.space = space
        self.active = active
        self.tol = tol
        self.grid_size = grid_size
        profile = space.profile
        exps = [space.exponents[k] for k in active]
        self.norms = np.exp(np.array([space.log_norms[k] for k in active]))

        # exact sup of Σ|c_i|·exp ℓ_i(t) for piecewise-linear G: breakpoints and end limits
        self.upper_rows = None
        if profile.is_piecewise_linear():
            rows = [np.exp(space.monomial_logs(t)[0][active]) for t in profile.breakpoints()]
            for side in (0, 1):
                row = np.zeros(len(active))
                for col, i in enumerate(exps):
                    limit = profile.monomial_limits(i, space.n)[side]
                    if limit is not None:
                        row[col] = math.exp(limit)
                rows.append(row)
            self.upper_rows = np.array(rows)

        lo, hi = space.radial_window()
        ts = np.unique(np.concatenate([np.linspace(lo, hi, LOWER_BOUND_GRID), list(space.critical_points)]))
        logs = space.monomial_logs(ts)[:, active]
        angles = np.linspace(0.0, 2.0 * math.pi, LOWER_BOUND_ANGLES, endpoint=False)
        phases = np.exp(-1j * np.outer(angles, np.array(exps, dtype=float)))
        # (points × angles) × active exponents
        self.lower_rows = (np.exp(logs)[:, None, :] * phases[None, :, :]).reshape(-1, len(active))
        self.l2_rows = np.exp(2.0 * logs)

    def classify(self, coeffs: np.ndarray) -> Tuple[int, int, int, List[IntegerSection]]:
        """Returns (accepted, full searches, retested, ambiguous sections) for a chunk"""
        absolute = np.abs(coeffs)
        nonzero = np.count_nonzero(coeffs, axis=1)
        accepted = np.zeros(len(coeffs), dtype=bool)
        decided = np.zeros(len(coeffs), dtype=bool)

        single = nonzero == 1
        mono_value = (absolute * self.norms).sum(axis=1)
        accepted |= single & (mono_value <= 1.0 + EXACT_SLACK)
        decided |= single

        triangle = mono_value <= 1.0 + EXACT_SLACK
        accepted |= ~decided & triangle
        decided |= triangle

        if self.upper_rows is not None:
            exact_upper = (absolute @ self.upper_rows.T).max(axis=1)
            ok = ~decided & (exact_upper <= 1.0 + EXACT_SLACK)
            accepted |= ok
            decided |= ok

        undecided = np.flatnonzero(~decided)
        if len(undecided):
            sub = coeffs[undecided].astype(float)
            lower = np.abs(sub @ self.lower_rows.T).max(axis=1)
            l2 = np.sqrt((sub * sub) @ self.l2_rows.T).max(axis=1)
            too_big = np.maximum(lower, l2) > 1.0 + self.tol
            decided[undecided[too_big]] = True

        full = 0
        retested = 0
        ambiguous = []
        for row in np.flatnonzero(~decided):
            full += 1
            vector = np.zeros(self.space.dimension, dtype=int)
            vector[self.active] = coeffs[row]
            section = IntegerSection.from_vector(self.space, vector)
            verdict = self._sup_verdict(section, self.tol, self.grid_size)
            if verdict is None:
                retested += 1
                verdict = self._sup_verdict(section, self.tol / 10.0, 4 * self.grid_size)
            if verdict is None:
                ambiguous.append(section)
            elif verdict:
                accepted[row] = True
        return int(accepted.sum()), full, retested, ambiguous

    def _sup_verdict(self, section: IntegerSection, tol: float, grid_size: int) -> Optional[bool]:
        norm = math.exp(log_sup_norm(section, self.space, tol, grid_size))
        if norm <= 1.0 - tol:
            return True
        if norm > 1.0 + tol:
            return False
        return None


def _decode(indices: np.ndarray, radices: List[int], bounds: List[int]) -> np.ndarray:
    """Mixed-radix decode, first coordinate most significant; digit d ↦ coefficient d − M"""
    out = np.empty((len(indices), len(radices)), dtype=np.int64)
    rest = indices.copy()
    for col in range(len(radices) - 1, -1, -1):
        rest, digit = np.divmod(rest, radices[col])
        out[:, col] = digit - bounds[col]
    return out


def hhat0_exact(space: SectionSpace, tol: float = DEFAULT_TOL, jobs: int = DEFAULT_JOBS,
                cap: int = ENUMERATION_CAP, grid_size: int = RADIAL_GRID_SIZE) -> CountResult:
    """
    Exact ĥ⁰(nD̄) = log #{s ∈ H⁰(nD) : ‖s‖_{ng} ≤ 1} by box enumeration

    Candidates lie in the box |c_i| ≤ exp(−m_i). s and −s have the same norm, so only the half
    box whose first non-zero coordinate is positive is tested and the count is 1 + 2·accepted.
    Chunks run on `jobs` threads and are reduced in order.

    Raises:
        BoxTooLarge: the candidate box exceeds `cap`
        AmbiguousBoundary: some norms stay within tol/10 of 1
    """
    logger.info(f"=== COUNTING SMALL SECTIONS (n={space.n}) ===")
    log_cap = math.log(cap)
    log_box = 0.0
    for m in space.log_norms:
        log_box += _log_box_side(-m)
        if log_box > log_cap + 1e-12:
            size = int(min(math.exp(min(log_box, 700.0)), 10.0**300))
            raise BoxTooLarge(size, cap)

    bounds_all = [coefficient_bound(m) for m in space.log_norms]
    active = [k for k, b in enumerate(bounds_all) if b > 0]
    bounds = [bounds_all[k] for k in active]
    radices = [2 * b + 1 for b in bounds]
    box_size = math.prod(radices)
    if box_size > cap:
        raise BoxTooLarge(box_size, cap)
    if not active:
        logger.info("✓ Box is {0}: ĥ⁰ = 0")
        return CountResult(n=space.n, count=1, log_count=0.0, box_size=1)

    classifier = _Classifier(space, active, tol, grid_size)
    center = (box_size - 1) // 2
    starts = list(range(center + 1, box_size, CHUNK_SIZE))

    def work(start):
        stop = min(start + CHUNK_SIZE, box_size)
        return classifier.classify(_decode(np.arange(start, stop, dtype=np.int64), radices, bounds))

    with ThreadPoolExecutor(max_workers=max(1, jobs)) as pool:
        results = list(pool.map(work, starts))

    accepted = sum(r[0] for r in results)
    full = sum(r[1] for r in results)
    retested = sum(r[2] for r in results)
    ambiguous = [s for r in results for s in r[3]]
    count = 1 + 2 * accepted
    if ambiguous:
        logger.warning(f"✗ {len(ambiguous)} boundary section(s) unresolved at tol/10")
        raise AmbiguousBoundary(len(ambiguous), partial={
            "n": space.n,
            "count_without_ambiguous": count,
            "sections": [s.to_payload() for s in ambiguous[:10]],
        })

    logger.info(f"✓ n={space.n}: {count} small sections out of {box_size} "
                f"({full} full searches, {retested} retested)")
    return CountResult(n=space.n, count=count, log_count=math.log(count), box_size=box_size,
                       full_searches=full, retested=retested)
