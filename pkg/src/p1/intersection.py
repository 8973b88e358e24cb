# Intersection - arithmetic intersection pairing, volumes from section asymptotics, Hodge index check
# Main functions: pairing(), toric_volume(), hodge_index_check()
# Used by: p1/decomposition.py (volumes), commands/handlers.py (p1-pair, p1-vol), tests

import logging
import math
from dataclasses import dataclass

from scipy import integrate

from src.defaults import DEFAULT_TOL
from src.errors import QuadratureDivergence
from src.p1.divisors import ModelDivisor
from src.p1.profiles import RadialProfile

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class HodgeIndexReport:
    vol_estimate: float
    self_pairing: float
    holds: bool


def _quad(func, a, b, tol, where, points=None):
    kwargs = {"limit": 400, "epsabs": tol / 8, "epsrel": 1e-13}
    if points:
        kwargs["points"] = points
    value, err = integrate.quad(func, a, b, **kwargs)
    if not math.isfinite(value) or err > tol:
        raise QuadratureDivergence(where, err, tol)
    return value, err


def integrate_against_smooth(profile: RadialProfile, lam: float, tol: float) -> float:
    """
    ∫ g dμ_λ for the admissible curvature measure μ_λ = λ/(s + λ)² ds, s = |z|²

    g = −c₀·log s + G(½ log s); the log part integrates to −c₀·log λ in closed form.
    In u = s/(s + λ) the measure is du on [0, 1], leaving only a log singularity at u = 1.
    """
    singular = -profile.c0 * math.log(lam)
    log_lam = math.log(lam)

    def f(u):
        if u <= 0.0 or u >= 1.0:
            return 0.0
        log_s = log_lam + math.log(u) - math.log1p(-u)
        return float(profile.G(0.5 * log_s))

    points = []
    for t in profile.breakpoints():
        # u* = s*/(s* + λ), s* = e^{2t}
        exponent = log_lam - 2.0 * t
        u_star = 1.0 / (1.0 + math.exp(exponent)) if exponent < 700 else 0.0
        if 0.0 < u_star < 1.0:
            points.append(u_star)
    regular, _ = _quad(f, 0.0, 1.0, tol, f"admissible measure λ={lam}", sorted(points) or None)
    return singular + regular


def integrate_green(profile_g: RadialProfile, profile_mu: RadialProfile, tol: float) -> float:
    """∫ g₁ dμ₂ for the curvature measure μ₂ of the second profile"""
    total = 0.0
    for t_star, mass in profile_mu.curvature_atoms():
        total += mass * float(profile_g.green(t_star))
    for lam, weight in profile_mu.smooth_weights():
        if weight != 0.0:
            total += weight * integrate_against_smooth(profile_g, lam, tol)
    return total


def pairing(d1: ModelDivisor, d2: ModelDivisor, tol: float = DEFAULT_TOL) -> float:
    """
    deg(D̄₁·D̄₂) = c₀(D₁)·deg(D̄₂|C₀) + c∞(D₁)·deg(D̄₂|C∞) + ½∫ g₁ dω₂

    Args:
        d1, d2: model divisors
        tol: absolute quadrature tolerance for smooth curvature measures

    Returns:
        the intersection number

    Raises:
        QuadratureDivergence: tolerance not reached
    """
    p1, p2 = d1.profile, d2.profile
    value = p1.c0 * p2.degree_c0() + p1.cinf * p2.degree_cinf() + 0.5 * integrate_green(p1, p2, tol)
    logger.debug(f"pairing({d1.family}, {d2.family}) = {value}")
    return value


def toric_volume(d: ModelDivisor, tol: float = DEFAULT_TOL) -> float:
    """Volume as the limit of log box counts of small sections over n²/2"""
    return d.profile.toric_volume(tol)


def hodge_index_check(d: ModelDivisor, tol: float = DEFAULT_TOL) -> HodgeIndexReport:
    """
    Instance check of vol(D̄) ≥ deg(D̄²)

    The volume estimate is independent of any decomposition: it integrates the
    asymptotic small-section count.
    """
    vol_estimate = toric_volume(d, tol)
    closed = d.self_pairing_closed_form()
    self_pairing = closed if closed is not None else pairing(d, d, tol)
    slack = max(tol, 1e-9) * (1.0 + abs(self_pairing))
    holds = vol_estimate >= self_pairing - slack
    mark = "✓" if holds else "✗"
    logger.info(f"{mark} Hodge index: vol ≈ {vol_estimate:.10g} vs deg(D²) = {self_pairing:.10g}")
    return HodgeIndexReport(vol_estimate=vol_estimate, self_pairing=self_pairing, holds=holds)
