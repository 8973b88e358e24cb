"""
Arithmetic ℝ-divisors on P¹_ℤ

The model families are rotation-invariant, so each one reduces to a RadialProfile
(see profiles.py). Parameters are stored in log form: log a, log b, log α, ... .

Families:
    OneKink{λ, log a, log b}     (λC₀, −λ log|z|² + log max{a²|z|^{2λ}, b²})
    TwoKink{log α, log α′, log β, log β′}
                                 (C₀ + C∞, −log|z|² + log max{α²|z|², β²} + log max{α′², β′²|z|²})
    Admissible{λ}                (C₀, −log|z|² + log(|z|² + λ))
    KinkSum{c₀, c∞, kinks}       general piecewise-linear rotation-invariant divisor
    PrincipalShift{base, k}      base + k·(̂z),  (̂z) = (C₀ − C∞, −log|z|²)
    Scaled{base, t}              t·base, t ≥ 0
    Combination{terms}           Σ aᵢ·Dᵢ, any real aᵢ
"""

import logging
import math
from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from functools import cached_property
from typing import Dict, List, Tuple

from src.errors import MalformedJob, UnsupportedFamily
from src.p1.profiles import Kink, RadialProfile, SmoothTerm, combine

logger = logging.getLogger(__name__)


def _finite(family: str, **params):
    for name, value in params.items():
        if not math.isfinite(value):
            raise UnsupportedFamily(family, f"parameter {name} = {value} is not finite")


class ModelDivisor(ABC):
    """Base class for the divisor families"""

    family = "divisor"

    @abstractmethod
    def _build_profile(self) -> RadialProfile:
        pass

    @abstractmethod
    def to_payload(self) -> Dict:
        """JSON form accepted back by the command line"""
        pass

    @cached_property
    def profile(self) -> RadialProfile:
        profile = self._build_profile()
        profile.validate(self.family)
        return profile

    @property
    def c0(self) -> float:
        return self.profile.c0

    @property
    def cinf(self) -> float:
        return self.profile.cinf

    def monomial_log_norm(self, i: int, n: int) -> float:
        return self.profile.monomial_log_norm(i, n)

    def self_pairing_closed_form(self):
        """deg(D̄²) when a closed form is known, else None"""
        return None


@dataclass(frozen=True, eq=True)
class OneKink(ModelDivisor):
    lam: float
    log_a: float
    log_b: float
    family = "one-kink"

    def __post_init__(self):
        _finite(self.family, lam=self.lam, log_a=self.log_a, log_b=self.log_b)
        if self.lam <= 0:
            raise UnsupportedFamily(self.family, f"lambda must be positive, got {self.lam}")

    def _build_profile(self) -> RadialProfile:
        return RadialProfile(c0=self.lam, cinf=0.0, kinks=(Kink(self.log_a, self.lam, self.log_b, 0.0),))

    def monomial_log_norm(self, i: int, n: int) -> float:
        """−[(nλ − i)·log a + i·log b]/λ for 0 ≤ i ≤ nλ"""
        if i < 0 or i > n * self.lam + 1e-9:
            return math.inf
        return -((n * self.lam - i) * self.log_a + i * self.log_b) / self.lam

    def self_pairing_closed_form(self):
        return self.lam * (self.log_a + self.log_b)

    @property
    def log_alpha(self) -> float:
        """log α for the normalization D̄ = λ·OneKink{1, log α, log β}"""
        return self.log_a / self.lam

    @property
    def log_beta(self) -> float:
        return self.log_b / self.lam

    def to_payload(self) -> Dict:
        return {"family": self.family, "lambda": self.lam, "log_a": self.log_a, "log_b": self.log_b}


@dataclass(frozen=True, eq=True)
class TwoKink(ModelDivisor):
    log_alpha: float
    log_alpha_p: float
    log_beta: float
    log_beta_p: float
    family = "two-kink"

    def __post_init__(self):
        _finite(self.family, log_alpha=self.log_alpha, log_alpha_p=self.log_alpha_p,
                log_beta=self.log_beta, log_beta_p=self.log_beta_p)
        # kinks at β/α ≤ α′/β′
        if self.log_beta - self.log_alpha > self.log_alpha_p - self.log_beta_p:
            raise UnsupportedFamily(self.family, "kink order β/α ≤ α′/β′ violated")

    def _build_profile(self) -> RadialProfile:
        return RadialProfile(
            c0=1.0,
            cinf=1.0,
            kinks=(
                Kink(self.log_alpha, 1.0, self.log_beta, 0.0),
                Kink(self.log_alpha_p, 0.0, self.log_beta_p, 1.0),
            ),
        )

    def to_payload(self) -> Dict:
        return {
            "family": self.family,
            "log_alpha": self.log_alpha,
            "log_alpha_p": self.log_alpha_p,
            "log_beta": self.log_beta,
            "log_beta_p": self.log_beta_p,
        }


@dataclass(frozen=True, eq=True)
class Admissible(ModelDivisor):
    lam: float
    family = "admissible"

    def __post_init__(self):
        _finite(self.family, lam=self.lam)
        if self.lam <= 0:
            raise UnsupportedFamily(self.family, f"lambda must be positive, got {self.lam}")

    def _build_profile(self) -> RadialProfile:
        return RadialProfile(c0=1.0, cinf=0.0, smooth=(SmoothTerm(self.lam),))

    def self_pairing_closed_form(self):
        return 0.5 * (math.log(self.lam) + 1.0)

    def to_payload(self) -> Dict:
        return {"family": self.family, "lambda": self.lam}


@dataclass(frozen=True, eq=True)
class KinkSum(ModelDivisor):
    c0_coef: float
    cinf_coef: float
    kinks: Tuple[Tuple[float, float, float, float], ...]
    family = "kink-sum"

    def __post_init__(self):
        _finite(self.family, c0=self.c0_coef, cinf=self.cinf_coef)
        for kink in self.kinks:
            if len(kink) != 4:
                raise MalformedJob(f"kink-sum entries are (u, p, v, q), got {kink}")
            _finite(self.family, **{f"k{j}": float(x) for j, x in enumerate(kink)})

    def _build_profile(self) -> RadialProfile:
        return RadialProfile(
            c0=self.c0_coef,
            cinf=self.cinf_coef,
            kinks=tuple(Kink(*map(float, k)) for k in self.kinks),
        )

    def to_payload(self) -> Dict:
        return {"family": self.family, "c0": self.c0_coef, "cinf": self.cinf_coef,
                "kinks": [list(k) for k in self.kinks]}


@dataclass(frozen=True, eq=True)
class PrincipalShift(ModelDivisor):
    base: ModelDivisor
    k: float
    family = "principal-shift"

    def __post_init__(self):
        _finite(self.family, k=self.k)

    def _build_profile(self) -> RadialProfile:
        return self.base.profile.shifted(self.k)

    def self_pairing_closed_form(self):
        return self.base.self_pairing_closed_form()

    def to_payload(self) -> Dict:
        return {"family": self.family, "base": self.base.to_payload(), "k": self.k}


@dataclass(frozen=True, eq=True)
class Scaled(ModelDivisor):
    base: ModelDivisor
    t: float
    family = "scaled"

    def __post_init__(self):
        _finite(self.family, t=self.t)
        if self.t < 0:
            raise UnsupportedFamily(self.family, f"scale must be non-negative, got {self.t}")

    def _build_profile(self) -> RadialProfile:
        return self.base.profile.scaled(self.t)

    def self_pairing_closed_form(self):
        if self.t == 0:
            return 0.0
        base = self.base.self_pairing_closed_form()
        return None if base is None else self.t * self.t * base

    def to_payload(self) -> Dict:
        return {"family": self.family, "base": self.base.to_payload(), "t": self.t}


@dataclass(frozen=True, eq=True)
class Combination(ModelDivisor):
    terms: Tuple[Tuple[float, ModelDivisor], ...] = field(default_factory=tuple)
    family = "combination"

    def __post_init__(self):
        for coef, _ in self.terms:
            _finite(self.family, coef=coef)

    def _build_profile(self) -> RadialProfile:
        return combine([(coef, d.profile) for coef, d in self.terms])

    def to_payload(self) -> Dict:
        return {"family": self.family,
                "terms": [{"coef": coef, "divisor": d.to_payload()} for coef, d in self.terms]}


def zero_divisor() -> ModelDivisor:
    """(0, 0) as Scaled{OneKink{1, 0, 0}, 0}"""
    return Scaled(OneKink(1.0, 0.0, 0.0), 0.0)


def difference(d1: ModelDivisor, d2: ModelDivisor) -> ModelDivisor:
    return Combination(((1.0, d1), (-1.0, d2)))


# ---- horizontal curves ----------------------------------------------------

@dataclass(frozen=True)
class HorizontalCurve:
    kind: str
    m: int = 0
    n: int = 1

    def __post_init__(self):
        if self.kind not in ("C0", "CInf", "point"):
            raise MalformedJob(f"Unknown curve kind '{self.kind}'")
        if self.kind == "point":
            if self.n <= 0:
                raise MalformedJob(f"Rational point (m:n) needs n > 0, got ({self.m}:{self.n})")
            if math.gcd(self.m, self.n) != 1:
                raise MalformedJob(f"Rational point ({self.m}:{self.n}) is not in lowest terms")

    def label(self) -> str:
        if self.kind == "point":
            return f"({self.m}:{self.n})"
        return self.kind


C0 = HorizontalCurve("C0")
CInf = HorizontalCurve("CInf")


def rational_point(m: int, n: int) -> HorizontalCurve:
    """Closure of (m:n); (0:1) is C₀"""
    if m == 0 and n == 1:
        return C0
    return HorizontalCurve("point", m, n)


def green_value(d: ModelDivisor, log_r: float) -> float:
    """g at |z| = exp(log_r), evaluated in log form"""
    return float(d.profile.green(log_r))


def degree_on_curve(d: ModelDivisor, c: HorizontalCurve) -> float:
    """
    Arithmetic degree deg(D̄|C)

    Curves in the support of D are handled by shifting with (̂z)^{±k}, which reduces to
    half the limit of G at the corresponding end. For (m:n) with m ≠ 0 the support is
    disjoint and deg = (c₀ + c∞)·log n + ½·G(log|m| − log n).
    """
    profile = d.profile
    if c.kind == "C0":
        return profile.degree_c0()
    if c.kind == "CInf":
        return profile.degree_cinf()
    if c.m == 0:
        return profile.degree_c0()
    return profile.degree_point(c.m, c.n)


def rational_points(height: int):
    """C₀, C∞ and every (m:n) with 1 ≤ n ≤ height, 0 < |m| ≤ height, gcd = 1"""
    yield C0
    yield CInf
    for n in range(1, height + 1):
        for m in range(-height, height + 1):
            if m != 0 and math.gcd(m, n) == 1:
                yield HorizontalCurve("point", m, n)


def degree_sweep(d: ModelDivisor, height: int) -> List[Tuple[str, float]]:
    """(curve label, degree) rows over rational_points(height)"""
    return [(c.label(), degree_on_curve(d, c)) for c in rational_points(height)]
