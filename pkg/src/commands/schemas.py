# Schemas - pydantic models for job files and per-command payloads
# Main classes: JobSpec, DivisorSpec, CurveSpec and one payload model per command
# Used by: commands/base_command.py, commands/handlers.py, commands/cli.py

from typing import Any, Dict, List, Literal, Optional, Tuple, Union

from pydantic import BaseModel, ConfigDict, Field, field_validator

from src.defaults import DEFAULT_TOL, PROBE_MAX_LEVEL
from src.errors import MalformedJob
from src.p1.divisors import (
    Admissible,
    Combination,
    HorizontalCurve,
    KinkSum,
    ModelDivisor,
    OneKink,
    PrincipalShift,
    Scaled,
    TwoKink,
    rational_point,
)

COMMANDS = (
    "solve",
    "certify",
    "p1-decompose",
    "p1-degree",
    "p1-pair",
    "p1-vol",
    "sections-count",
    "sections-sigma",
    "probe-dist",
    "probe-gromov",
    "probe-orth",
)

Command = Literal[
    "solve", "certify", "p1-decompose", "p1-degree", "p1-pair", "p1-vol",
    "sections-count", "sections-sigma", "probe-dist", "probe-gromov", "probe-orth",
]
OutputFormat = Literal["table", "json", "csv"]
Family = Literal["one-kink", "two-kink", "admissible", "kink-sum", "principal-shift", "scaled", "combination"]


class JobSpec(BaseModel):
    model_config = ConfigDict(extra="forbid")

    command: Command
    payload: Dict[str, Any] = Field(default_factory=dict)
    tol: float = Field(DEFAULT_TOL, gt=0)
    output: Optional[OutputFormat] = None


# ---- divisors ---------------------------------------------------------------

class TermSpec(BaseModel):
    model_config = ConfigDict(extra="forbid")

    coef: float
    divisor: "DivisorSpec"


class DivisorSpec(BaseModel):
    """
    One model divisor, parameters in log form

    `log_alpha` / `log_beta` are the normalized one-kink parameters (log a = λ·log α);
    `scale` and `shift` wrap the built divisor in Scaled / PrincipalShift.
    """

    model_config = ConfigDict(extra="forbid", populate_by_name=True)

    family: Family
    lam: float = Field(1.0, alias="lambda")
    log_a: Optional[float] = None
    log_b: Optional[float] = None
    log_alpha: Optional[float] = None
    log_beta: Optional[float] = None
    log_alpha_p: Optional[float] = None
    log_beta_p: Optional[float] = None
    c0: Optional[float] = None
    cinf: Optional[float] = None
    kinks: Optional[List[Tuple[float, float, float, float]]] = None
    base: Optional["DivisorSpec"] = None
    k: Optional[float] = None
    t: Optional[float] = None
    terms: Optional[List[TermSpec]] = None
    scale: Optional[float] = None
    shift: Optional[float] = None

    def _require(self, *names: str):
        missing = [name for name in names if getattr(self, name) is None]
        if missing:
            raise MalformedJob(f"Family '{self.family}' needs {missing}", family=self.family, missing=missing)

    def _one_kink_param(self, raw: str, normalized: str) -> float:
        if getattr(self, raw) is not None:
            return getattr(self, raw)
        if getattr(self, normalized) is not None:
            return self.lam * getattr(self, normalized)
        raise MalformedJob(f"Family 'one-kink' needs {raw} or {normalized}", family=self.family)

    def _build_family(self) -> ModelDivisor:
        if self.family == "one-kink":
            return OneKink(self.lam, self._one_kink_param("log_a", "log_alpha"),
                           self._one_kink_param("log_b", "log_beta"))
        if self.family == "two-kink":
            self._require("log_alpha", "log_alpha_p", "log_beta", "log_beta_p")
            return TwoKink(self.log_alpha, self.log_alpha_p, self.log_beta, self.log_beta_p)
        if self.family == "admissible":
            return Admissible(self.lam)
        if self.family == "kink-sum":
            self._require("c0", "cinf", "kinks")
            return KinkSum(self.c0, self.cinf, tuple(tuple(k) for k in self.kinks))
        if self.family == "principal-shift":
            self._require("base", "k")
            return PrincipalShift(self.base.build(), self.k)
        if self.family == "scaled":
            self._require("base", "t")
            return Scaled(self.base.build(), self.t)
        self._require("terms")
        return Combination(tuple((term.coef, term.divisor.build()) for term in self.terms))

    def build(self) -> ModelDivisor:
        divisor = self._build_family()
        if self.scale is not None:
            divisor = Scaled(divisor, self.scale)
        if self.shift is not None:
            divisor = PrincipalShift(divisor, self.shift)
        return divisor


TermSpec.model_rebuild()
DivisorSpec.model_rebuild()


class CurveSpec(BaseModel):
    model_config = ConfigDict(extra="forbid")

    kind: Literal["C0", "CInf", "point"]
    m: int = 0
    n: int = 1

    def build(self) -> HorizontalCurve:
        if self.kind == "point":
            return rational_point(self.m, self.n)
        return HorizontalCurve(self.kind)


# ---- tier 1 payloads --------------------------------------------------------

class SolvePayload(BaseModel):
    model_config = ConfigDict(extra="forbid")

    q: List[List[Any]]
    x: Union[List[Any], Dict[str, Any]]
    labels: Optional[List[Union[int, str]]] = None
    certificate: bool
    cross_check: bool


class CertifyPayload(BaseModel):
    """Either an explicit matrix `q` with `support`, or a two-kink `divisor` whose negative part is certified"""

    model_config = ConfigDict(extra="forbid")

    q: Optional[List[List[Any]]] = None
    support: Optional[List[Union[int, str]]] = None
    labels: Optional[List[Union[int, str]]] = None
    divisor: Optional[DivisorSpec] = None
    max_denominator: int = Field(..., ge=1)


# ---- tier 2 payloads --------------------------------------------------------

class DecomposePayload(DivisorSpec):
    pass


class DegreePayload(DivisorSpec):
    curve: Optional[CurveSpec] = None
    height: int = Field(..., ge=0)


class PairPayload(BaseModel):
    model_config = ConfigDict(extra="forbid")

    first: DivisorSpec
    second: Optional[DivisorSpec] = None
    hodge: bool = False


class VolumePayload(DivisorSpec):
    pass


class CountPayload(DivisorSpec):
    n: Union[int, List[int]]
    mode: Literal["exact", "bounds", "both"]
    cap: int = Field(..., ge=1)
    sub_box: bool = False

    @field_validator("n")
    @classmethod
    def _levels(cls, value):
        levels = [value] if isinstance(value, int) else list(value)
        if not levels or any(n < 0 for n in levels):
            raise ValueError("levels must be a non-empty list of non-negative integers")
        return levels


class SigmaPayload(DivisorSpec):
    n: int = Field(..., ge=1)
    grid: Optional[List[float]] = None
    n_max: Optional[int] = Field(None, ge=1)


class DistortionPayload(DivisorSpec):
    n_max: int = Field(..., ge=1, le=PROBE_MAX_LEVEL)
    table_n: Optional[int] = Field(None, ge=0)
    sub_basis: Optional[List[int]] = None
    grid: Optional[List[float]] = None


class GromovPayload(BaseModel):
    model_config = ConfigDict(extra="forbid")

    divisors: List[DivisorSpec] = Field(..., min_length=1)
    samples: int = Field(..., ge=1)
    seed: int
    a_max: float = Field(..., gt=0)


class OrthogonalityPayload(DivisorSpec):
    n_list: List[int] = Field(..., min_length=1)

