# Exact Linear Algebra - bridge between Fraction-valued rows and sympy rational matrices
# Main functions: as_matrix(), as_rows(), determinant(), leading_minors(), rank(), block_diag_one()
# Used by: zariski_core/solver.py (certificates, independence checks) and tests

from fractions import Fraction
from typing import List, Sequence, Tuple

import sympy as sp

Rows = Tuple[Tuple[Fraction, ...], ...]


def to_rational(value) -> sp.Rational:
    f = Fraction(value)
    return sp.Rational(f.numerator, f.denominator)


def from_rational(value) -> Fraction:
    r = sp.Rational(value)
    return Fraction(int(r.p), int(r.q))


def as_matrix(rows: Sequence[Sequence]) -> sp.Matrix:
    """Exact sympy matrix from Fraction / int / "p/q" rows"""
    rows = [list(row) for row in rows]
    if not rows:
        return sp.zeros(0, 0)
    return sp.Matrix([[to_rational(v) for v in row] for row in rows])


def as_rows(m: sp.Matrix) -> Rows:
    return tuple(tuple(from_rational(m[i, j]) for j in range(m.cols)) for i in range(m.rows))


def block_diag_one(scale, inner: sp.Matrix) -> sp.Matrix:
    """diag(scale, inner)"""
    if inner.rows == 0:
        return sp.Matrix([[scale]])
    return sp.diag(scale, inner)


def determinant(rows) -> Fraction:
    m = rows if isinstance(rows, sp.MatrixBase) else as_matrix(rows)
    if m.rows == 0:
        return Fraction(1)
    return from_rational(m.det(method="bareiss"))


def leading_minors(rows) -> List[Fraction]:
    m = rows if isinstance(rows, sp.MatrixBase) else as_matrix(rows)
    return [determinant(m[:k, :k]) for k in range(1, m.rows + 1)]


def rank(rows) -> int:
    m = rows if isinstance(rows, sp.MatrixBase) else as_matrix(rows)
    return 0 if m.rows == 0 else int(m.rank())
