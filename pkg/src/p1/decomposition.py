"""
Positivity predicates and closed-form Zariski decompositions on P¹_ℤ

Closed forms exist for the one-kink family (every case), the two-kink family on the
region α, α′ ≥ 1 with both degrees negative, and nef input of any family. Scaled and
PrincipalShift inputs are decomposed through their base. Anything else is reported as
NotComputed rather than guessed.
"""

import logging
import math
from dataclasses import dataclass, replace
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from src.defaults import DEFAULT_TOL, NEF_SAMPLE_HEIGHT
from src.errors import (
    CertificateFailure,
    NoDecomposition,
    NotComputed,
    QuadratureDivergence,
    UnsupportedConfiguration,
    UnsupportedFamily,
)
from src.p1.divisors import (
    C0,
    Admissible,
    CInf,
    KinkSum,
    ModelDivisor,
    OneKink,
    PrincipalShift,
    Scaled,
    TwoKink,
    degree_on_curve,
    degree_sweep,
    difference,
    zero_divisor,
)
from src.p1.intersection import pairing, toric_volume
from src.zariski_core import NegativityCertificate, certify_negative_part, validate_system

logger = logging.getLogger(__name__)

POSITIVITY_EPS = 1e-12
BIG_VOLUME_THRESHOLD = 1e-9
VOLUME_CROSS_CHECK = 1e-6
RATIONAL_MAX_DENOMINATOR = 100000


def _scale(d: ModelDivisor) -> float:
    return 1.0 + abs(d.c0) + abs(d.cinf)


# ---- predicates -------------------------------------------------------------

def is_psh(d: ModelDivisor) -> bool:
    return d.profile.is_psh()


def is_effective(d: ModelDivisor) -> bool:
    """Non-negative coefficients and g ≥ 0 everywhere"""
    eps = POSITIVITY_EPS * _scale(d)
    profile = d.profile
    return profile.c0 >= -eps and profile.cinf >= -eps and profile.inf_green() >= -eps


def is_nef_p1(d: ModelDivisor, sample_height: int = NEF_SAMPLE_HEIGHT) -> bool:
    """
    Nef test: g of PSH type and deg(D̄|C₀), deg(D̄|C∞) ≥ 0

    For rotation-invariant g these two degrees bound every other horizontal degree from
    below. The closed form is cross-checked on rational points of height ≤ sample_height.

    Raises:
        CertificateFailure: closed form says nef but a sampled degree is negative
    """
    profile = d.profile
    eps = POSITIVITY_EPS * _scale(d)
    nef = profile.is_psh() and profile.degree_c0() >= -eps and profile.degree_cinf() >= -eps

    if nef and sample_height > 0:
        label, worst = min(degree_sweep(d, sample_height), key=lambda row: row[1])
        if worst < -1e-9 * _scale(d):
            raise CertificateFailure(
                f"nef closed form contradicted by deg(D̄|{label}) = {worst}",
                curve=label, degree=worst,
            )
        logger.debug(f"nef sampling ok: min degree {worst:.6g} at {label}")
    return nef


def is_big(d: ModelDivisor, tol: float = DEFAULT_TOL) -> bool:
    return toric_volume(d, tol) > BIG_VOLUME_THRESHOLD


def is_adequate_sufficient(d: ModelDivisor) -> bool:
    """a² > 2^λ and b² > 2^λ, the sufficient adequacy condition for one-kink divisors"""
    if not isinstance(d, OneKink):
        raise UnsupportedFamily(d.family, "the adequacy criterion is stated for one-kink divisors")
    bound = d.lam * math.log(2.0)
    return 2.0 * d.log_a > bound and 2.0 * d.log_b > bound


# ---- decomposition ----------------------------------------------------------

@dataclass(frozen=True)
class DecompositionP1:
    divisor: ModelDivisor
    positive: ModelDivisor
    negative_c0: float
    negative_cinf: float
    theta: Optional[float] = None
    theta_prime: Optional[float] = None
    case: str = "nef"

    @property
    def negative(self) -> ModelDivisor:
        """N̄ = D̄ − P̄"""
        return difference(self.divisor, self.positive)

    def to_payload(self) -> Dict:
        return {
            "case": self.case,
            "theta": self.theta,
            "theta_prime": self.theta_prime,
            "positive": self.positive.to_payload(),
            "negative_c0": self.negative_c0,
            "negative_cinf": self.negative_cinf,
        }


def scaling_family(d: OneKink, log_t: float) -> OneKink:
    """D̄_t: both kink constants multiplied by t^λ"""
    return OneKink(d.lam, d.log_a + d.lam * log_t, d.log_b + d.lam * log_t)


def combine_scaling(a: float, log_t1: float, b: float, log_t2: float) -> Tuple[float, float]:
    """a·D̄_{t₁} + b·D̄_{t₂} = (a + b)·D̄_t; returns (a + b, log t)"""
    if a <= 0 or b <= 0:
        raise UnsupportedConfiguration(f"scaling combination needs positive weights, got {a}, {b}")
    return a + b, (a * log_t1 + b * log_t2) / (a + b)


def non_existence_witness(d: OneKink) -> Dict:
    """
    Parameters of the scaling-family contradiction for α, β < 1

    D̄_{t₀} is adequate, and ε·D̄_{t₀} + D̄ = (1 + ε)·D̄_{t_mid} with D̄_{t_mid} still below
    both thresholds, so it has no small sections and volume 0. A positive part P̄ would make
    P̄ + ε·D̄_{t₀} adequate below (1 + ε)·D̄_{t_mid}, forcing positive volume there.
    """
    unit = OneKink(1.0, d.log_alpha, d.log_beta)
    log_t0 = 0.5 * math.log(2.0) - min(unit.log_a, unit.log_b) + 1.0
    gap = -max(unit.log_a, unit.log_b)
    ratio = min(gap / (2.0 * log_t0), 0.5)
    epsilon = ratio / (1.0 - ratio)
    total, log_t_mid = combine_scaling(epsilon, log_t0, 1.0, 0.0)
    mid = scaling_family(unit, log_t_mid)
    witness = {
        "log_alpha": unit.log_a,
        "log_beta": unit.log_b,
        "log_t0": log_t0,
        "epsilon": epsilon,
        "log_t_mid": log_t_mid,
        "combined_weight": total,
        "t0_adequate": is_adequate_sufficient(scaling_family(unit, log_t0)),
        "mid_sections_trivial": max(mid.log_a, mid.log_b) < 0,
        "mid_volume": toric_volume(mid),
    }
    logger.info(f"✗ No decomposition: witness log t0 = {log_t0:.6g}, ε = {epsilon:.6g}")
    return witness


def _nef_decomposition(d: ModelDivisor) -> DecompositionP1:
    return DecompositionP1(divisor=d, positive=d, negative_c0=0.0, negative_cinf=0.0, case="nef")


def _decompose_one_kink(d: OneKink) -> DecompositionP1:
    la, lb = d.log_alpha, d.log_beta
    lam = d.lam

    if la >= 0 > lb:
        theta = la / (la - lb)
        positive = OneKink(lam * theta, d.log_a, 0.0) if theta > 0 else zero_divisor()
        logger.info(f"✓ One-kink case α ≥ 1 > β: θ = {theta}")
        return DecompositionP1(divisor=d, positive=positive, negative_c0=lam * (1.0 - theta),
                               negative_cinf=0.0, theta=theta, case="alpha>=1>beta")

    if lb >= 0 > la:
        theta_p = lb / (lb - la)
        base = OneKink(lam * theta_p, 0.0, d.log_b) if theta_p > 0 else zero_divisor()
        shift = lam * (1.0 - theta_p)
        logger.info(f"✓ One-kink case β ≥ 1 > α: θ′ = {theta_p}")
        return DecompositionP1(divisor=d, positive=PrincipalShift(base, shift), negative_c0=0.0,
                               negative_cinf=shift, theta_prime=theta_p, case="beta>=1>alpha")

    raise NoDecomposition(non_existence_witness(d))


def _decompose_two_kink(d: TwoKink) -> DecompositionP1:
    la, lap, lb, lbp = d.log_alpha, d.log_alpha_p, d.log_beta, d.log_beta_p
    if la >= 0 and lap >= 0 and lap + lb < 0 and la + lbp < 0:
        s = la + lap
        vt = s / (la - lb)
        vtp = s / (lap - lbp)
        if s == 0:
            positive = zero_divisor()
        else:
            positive = KinkSum(vt, vtp, ((la, vt, -lap, 0.0), (lap, 0.0, -la, vtp)))
        logger.info(f"✓ Two-kink decomposition: ϑ = {vt}, ϑ′ = {vtp}")
        return DecompositionP1(divisor=d, positive=positive, negative_c0=1.0 - vt,
                               negative_cinf=1.0 - vtp, theta=vt, theta_prime=vtp, case="two-kink")
    raise NotComputed("two-kink parameters outside α, α′ ≥ 1 with deg C₀, deg C∞ < 0",
                      **d.to_payload())


def zariski_decompose_p1(d: ModelDivisor) -> DecompositionP1:
    """
    Zariski decomposition D̄ = P̄ + N̄ in closed form

    Args:
        d: model divisor

    Returns:
        DecompositionP1 with P̄ nef and N̄ = D̄ − P̄ effective

    Raises:
        NoDecomposition: one-kink with α, β < 1 (witness attached)
        NotComputed: no closed-form positive part for this input
    """
    if isinstance(d, Scaled):
        if d.t == 0:
            return _nef_decomposition(d)
        inner = zariski_decompose_p1(d.base)
        return replace(
            inner,
            divisor=d,
            positive=Scaled(inner.positive, d.t),
            negative_c0=d.t * inner.negative_c0,
            negative_cinf=d.t * inner.negative_cinf,
        )
    if isinstance(d, PrincipalShift):
        inner = zariski_decompose_p1(d.base)
        return replace(inner, divisor=d, positive=PrincipalShift(inner.positive, d.k))

    if is_nef_p1(d):
        logger.info(f"✓ {d.family} divisor is nef: positive part equals input")
        return _nef_decomposition(d)
    if isinstance(d, OneKink):
        return _decompose_one_kink(d)
    if isinstance(d, TwoKink):
        return _decompose_two_kink(d)
    if isinstance(d, Admissible):
        raise NotComputed("positive part of an admissible divisor with λ < 1 has no known closed form",
                          lam=d.lam)
    raise NotComputed(f"no closed-form positive part for non-nef {d.family} divisors", family=d.family)


def volume_p1(d: ModelDivisor, tol: float = DEFAULT_TOL) -> float:
    """
    vol(D̄) = deg(P̄²), cross-checked against the toric volume of D̄

    Raises:
        NoDecomposition, NotComputed: from zariski_decompose_p1
        QuadratureDivergence: the two volumes disagree
    """
    decomposition = zariski_decompose_p1(d)
    positive = decomposition.positive
    closed = positive.self_pairing_closed_form()
    value = closed if closed is not None else pairing(positive, positive, tol)

    estimate = toric_volume(d, tol)
    gap = abs(estimate - value)
    limit = max(VOLUME_CROSS_CHECK, 100 * tol) * (1.0 + abs(value))
    if gap > limit:
        logger.error(f"✗ Volume cross-check failed: deg(P̄²) = {value}, toric volume = {estimate}")
        raise QuadratureDivergence("volume cross-check", gap, limit)
    logger.info(f"✓ vol(D̄) = {value:.12g} (toric volume {estimate:.12g})")
    return value


# ---- negative part on C₀ + C∞ -----------------------------------------------

@dataclass(frozen=True)
class NegativePartMatrix:
    pieces: Tuple[ModelDivisor, ...]
    matrix: Tuple[Tuple[float, ...], ...]
    labels: Tuple[str, ...] = ("C0", "CInf")

    def determinant(self) -> float:
        (a, b), (c, e) = self.matrix
        return a * e - b * c

    def determinant_sign_ok(self) -> bool:
        """(−1)^{#support}·det > 0"""
        return ((-1) ** len(self.pieces)) * self.determinant() > 0


def negative_part_matrix(d: ModelDivisor) -> NegativePartMatrix:
    """
    Split N̄ = (C₀, h₁) + (C∞, h₂) for α = α′ = 1 and return Q[i][j] = deg(piece_j | C_i)

    h₁ = −log|z|² + log max{|z|², β²},  h₂ = log max{1, β′²|z|²}

    Raises:
        UnsupportedFamily: not a two-kink divisor
        UnsupportedConfiguration: the negative part is not supported on both C₀ and C∞
    """
    if not isinstance(d, TwoKink):
        raise UnsupportedFamily(d.family, "negative-part matrices are built for two-kink divisors")
    if abs(d.log_alpha) > POSITIVITY_EPS or abs(d.log_alpha_p) > POSITIVITY_EPS \
            or d.log_beta >= 0 or d.log_beta_p >= 0:
        raise UnsupportedConfiguration(
            "negative part on C₀ + C∞ needs α = α′ = 1 and β, β′ < 1", **d.to_payload()
        )
    pieces = (
        OneKink(1.0, 0.0, d.log_beta),
        KinkSum(0.0, 1.0, ((0.0, 0.0, d.log_beta_p, 1.0),)),
    )
    curves = (C0, CInf)
    matrix = tuple(tuple(degree_on_curve(piece, curve) for piece in pieces) for curve in curves)
    logger.debug(f"negative-part degree matrix {matrix}")
    return NegativePartMatrix(pieces=pieces, matrix=matrix)


def rationalize(matrix: Sequence[Sequence[float]],
                max_denominator: int = RATIONAL_MAX_DENOMINATOR) -> List[List[Fraction]]:
    return [[Fraction(x).limit_denominator(max_denominator) for x in row] for row in matrix]


def negative_part_certificate(d: ModelDivisor,
                              max_denominator: int = RATIONAL_MAX_DENOMINATOR) -> NegativityCertificate:
    """Rationalize the negative-part matrix and certify it with the exact solver"""
    npm = negative_part_matrix(d)
    system = validate_system(rationalize(npm.matrix, max_denominator), labels=npm.labels)
    return certify_negative_part(system, npm.labels)
