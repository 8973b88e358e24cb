"""
Zariski systems

A system is a finite family of basis vectors e_λ together with linear functionals φ_λ,
stored as the exact-rational matrix Q with Q[λ][μ] = φ_λ(e_μ). Off-diagonal entries must
be non-negative. Vectors are coordinate maps over the system labels.
"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational
from typing import Dict, Hashable, List, Optional, Sequence, Tuple

from src.errors import EmptyList, InexactInput, LabelMismatch, MalformedJob, OffDiagonalNegative

logger = logging.getLogger(__name__)


def to_fraction(value) -> Fraction:
    """
    Convert an exact scalar to Fraction

    Accepts Fraction, int and "p/q" / decimal strings. Floats are refused.

    Raises:
        InexactInput: value is a float (or bool)
        MalformedJob: unparsable string
    """
    if isinstance(value, bool):
        raise InexactInput(value)
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, Rational):
        return Fraction(value.numerator, value.denominator)
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError) as e:
            raise MalformedJob(f"Cannot parse rational '{value}': {e}", value=value)
    raise InexactInput(value)


def format_fraction(value: Fraction) -> str:
    """Serialize as "p/q" (or "p" for integers)"""
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


@dataclass(frozen=True)
class ZariskiSystem:
    labels: Tuple[Hashable, ...]
    q_matrix: Tuple[Tuple[Fraction, ...], ...]

    @property
    def size(self) -> int:
        return len(self.labels)

    def index_of(self, label) -> int:
        try:
            return self.labels.index(label)
        except ValueError:
            raise MalformedJob(f"Unknown label {label!r}; labels are {list(self.labels)}", label=str(label))

    def entry(self, row_label, col_label) -> Fraction:
        return self.q_matrix[self.index_of(row_label)][self.index_of(col_label)]

    def apply(self, v: "BasisVector") -> Dict[Hashable, Fraction]:
        """(Q·v)[λ] = Σ_μ φ_λ(e_μ) v_μ"""
        coords = [v.get(label) for label in self.labels]
        return {
            label: sum((q * c for q, c in zip(row, coords)), Fraction(0))
            for label, row in zip(self.labels, self.q_matrix)
        }

    def restrict(self, subset: Sequence[Hashable]) -> "ZariskiSystem":
        """Subsystem on `subset`, keeping the system's label order"""
        keep = [i for i, label in enumerate(self.labels) if label in set(subset)]
        return ZariskiSystem(
            labels=tuple(self.labels[i] for i in keep),
            q_matrix=tuple(tuple(self.q_matrix[i][j] for j in keep) for i in keep),
        )

    def is_symmetric(self) -> bool:
        n = self.size
        return all(self.q_matrix[i][j] == self.q_matrix[j][i] for i in range(n) for j in range(i + 1, n))


@dataclass(frozen=True)
class BasisVector:
    coords: Tuple[Tuple[Hashable, Fraction], ...]

    @classmethod
    def from_mapping(cls, labels: Sequence[Hashable], values: Dict) -> "BasisVector":
        unknown = [k for k in values if k not in set(labels)]
        if unknown:
            raise LabelMismatch(len(labels), len(labels) + len(unknown))
        return cls(tuple((label, to_fraction(values.get(label, 0))) for label in labels))

    @classmethod
    def from_list(cls, labels: Sequence[Hashable], values: Sequence) -> "BasisVector":
        if len(values) != len(labels):
            raise LabelMismatch(len(labels), len(values))
        return cls(tuple((label, to_fraction(v)) for label, v in zip(labels, values)))

    @property
    def labels(self) -> Tuple[Hashable, ...]:
        return tuple(label for label, _ in self.coords)

    def get(self, label) -> Fraction:
        for key, value in self.coords:
            if key == label:
                return value
        return Fraction(0)

    def values(self) -> List[Fraction]:
        return [value for _, value in self.coords]

    def __add__(self, other: "BasisVector") -> "BasisVector":
        return BasisVector(tuple((label, value + other.get(label)) for label, value in self.coords))

    def __sub__(self, other: "BasisVector") -> "BasisVector":
        return BasisVector(tuple((label, value - other.get(label)) for label, value in self.coords))

    def scale(self, a) -> "BasisVector":
        a = to_fraction(a)
        return BasisVector(tuple((label, a * value) for label, value in self.coords))

    def dominates(self, other: "BasisVector") -> bool:
        """self ≥_e other"""
        return all(value >= other.get(label) for label, value in self.coords)

    def support(self) -> Tuple[Hashable, ...]:
        return tuple(label for label, value in self.coords if value != 0)

    def is_zero(self) -> bool:
        return all(value == 0 for _, value in self.coords)

    def reorder(self, labels: Sequence[Hashable]) -> "BasisVector":
        return BasisVector(tuple((label, self.get(label)) for label in labels))


def validate_system(q_matrix: Sequence[Sequence], labels: Optional[Sequence[Hashable]] = None) -> ZariskiSystem:
    """
    Build a ZariskiSystem from a square matrix of exact scalars

    Args:
        q_matrix: rows of Q, entry [λ][μ] = φ_λ(e_μ)
        labels: optional labels, default 0..n-1

    Returns:
        Validated ZariskiSystem

    Raises:
        EmptyList: empty matrix
        LabelMismatch: non-square matrix or wrong label count
        OffDiagonalNegative: some φ_λ(e_μ) < 0 with λ ≠ μ
    """
    n = len(q_matrix)
    if n == 0:
        raise EmptyList("matrix")
    labels = tuple(range(n)) if labels is None else tuple(labels)
    if len(labels) != n:
        raise LabelMismatch(n, len(labels))
    if len(set(labels)) != n:
        raise MalformedJob(f"Labels must be distinct: {list(labels)}")

    rows = []
    for i, row in enumerate(q_matrix):
        if len(row) != n:
            raise LabelMismatch(n, len(row))
        rows.append(tuple(to_fraction(v) for v in row))

    for i in range(n):
        for j in range(n):
            if i != j and rows[i][j] < 0:
                raise OffDiagonalNegative(labels[i], labels[j], format_fraction(rows[i][j]))

    logger.debug(f"Validated {n}x{n} Zariski system with labels {list(labels)}")
    return ZariskiSystem(labels=labels, q_matrix=tuple(rows))


def check_labels(system: ZariskiSystem, v: BasisVector):
    if v.labels != system.labels:
        if set(v.labels) != set(system.labels):
            raise LabelMismatch(system.size, len(v.labels))


def is_nef(system: ZariskiSystem, v: BasisVector) -> bool:
    """True iff φ_λ(v) ≥ 0 for every λ, evaluated exactly"""
    check_labels(system, v)
    return all(value >= 0 for value in system.apply(v).values())


def coordinate_max(system: ZariskiSystem, vs: Sequence[BasisVector]) -> BasisVector:
    """
    Coordinate-wise maximum of a non-empty list of vectors

    If every input is nef the output is nef as well.

    Raises:
        EmptyList: no vectors given
    """
    if not vs:
        raise EmptyList("vector list")
    for v in vs:
        check_labels(system, v)
    return BasisVector(tuple(
        (label, max(v.get(label) for v in vs)) for label in system.labels
    ))
