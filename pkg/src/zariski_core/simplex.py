# Exact Simplex - two-phase tableau simplex over Fractions with Bland's anti-cycling rule
# Main functions: minimize()
# Used by: zariski_core/solver.py to compute greatest nef elements

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Sequence

logger = logging.getLogger(__name__)

OPTIMAL = "optimal"
INFEASIBLE = "infeasible"
UNBOUNDED = "unbounded"


@dataclass(frozen=True)
class LPResult:
    status: str
    x: Optional[List[Fraction]] = None
    value: Optional[Fraction] = None
    pivots: int = 0


class _Tableau:
    """
    Dense tableau for min c·x subject to rows of A x = b (b ≥ 0), x ≥ 0

    The last row holds reduced costs, the last column the right-hand side.
    """

    def __init__(self, rows: List[List[Fraction]], basis: List[int]):
        self.rows = rows
        self.basis = basis
        self.pivots = 0

    @property
    def m(self) -> int:
        return len(self.rows) - 1

    def set_objective(self, costs: Sequence[Fraction]):
        width = len(self.rows[0])
        obj = [Fraction(0)] * width
        for j, c in enumerate(costs):
            obj[j] = Fraction(c)
        # price out basic columns
        for i, col in enumerate(self.basis):
            if obj[col] != 0:
                factor = obj[col]
                obj = [o - factor * r for o, r in zip(obj, self.rows[i])]
        self.rows[-1] = obj

    def pivot(self, row: int, col: int):
        pivot_row = self.rows[row]
        p = pivot_row[col]
        pivot_row = [v / p for v in pivot_row]
        self.rows[row] = pivot_row
        for i, r in enumerate(self.rows):
            if i != row and r[col] != 0:
                factor = r[col]
                self.rows[i] = [a - factor * b for a, b in zip(r, pivot_row)]
        self.basis[row] = col
        self.pivots += 1

    def run(self, allowed: Sequence[int]) -> str:
        """Pivot until optimal; Bland's rule picks lowest-index entering and leaving variables"""
        allowed = sorted(allowed)
        while True:
            obj = self.rows[-1]
            entering = next((j for j in allowed if obj[j] < 0), None)
            if entering is None:
                return OPTIMAL

            best_ratio = None
            leaving = None
            for i in range(self.m):
                a = self.rows[i][entering]
                if a > 0:
                    ratio = self.rows[i][-1] / a
                    if (
                        best_ratio is None
                        or ratio < best_ratio
                        or (ratio == best_ratio and self.basis[i] < self.basis[leaving])
                    ):
                        best_ratio = ratio
                        leaving = i
            if leaving is None:
                return UNBOUNDED
            logger.debug(f"pivot: enter x{entering}, leave x{self.basis[leaving]} (ratio {best_ratio})")
            self.pivot(leaving, entering)


def minimize(costs: Sequence, a_ub: Sequence[Sequence], b_ub: Sequence) -> LPResult:
    """
    Minimize costs·x subject to a_ub·x ≤ b_ub and x ≥ 0, exactly

    Args:
        costs: objective coefficients (length n)
        a_ub: m×n constraint matrix
        b_ub: right-hand side (length m), any signs

    Returns:
        LPResult with status optimal / infeasible / unbounded
    """
    costs = [Fraction(c) for c in costs]
    n = len(costs)
    m = len(b_ub)

    # columns: x (n), slacks (m), artificials (one per row with negative rhs)
    negative_rows = [i for i in range(m) if Fraction(b_ub[i]) < 0]
    n_art = len(negative_rows)
    width = n + m + n_art + 1
    rows: List[List[Fraction]] = []
    basis: List[int] = []
    art_index = {}
    for k, i in enumerate(negative_rows):
        art_index[i] = n + m + k

    for i in range(m):
        row = [Fraction(0)] * width
        sign = -1 if i in art_index else 1
        for j in range(n):
            row[j] = sign * Fraction(a_ub[i][j])
        row[n + i] = Fraction(sign)
        row[-1] = sign * Fraction(b_ub[i])
        if i in art_index:
            row[art_index[i]] = Fraction(1)
            basis.append(art_index[i])
        else:
            basis.append(n + i)
        rows.append(row)
    rows.append([Fraction(0)] * width)

    tableau = _Tableau(rows, basis)

    if n_art:
        phase1_costs = [Fraction(0)] * (width - 1)
        for col in art_index.values():
            phase1_costs[col] = Fraction(1)
        tableau.set_objective(phase1_costs)
        tableau.run(range(width - 1))
        if -tableau.rows[-1][-1] != 0:
            logger.debug(f"phase 1 optimum {-tableau.rows[-1][-1]} > 0: infeasible")
            return LPResult(status=INFEASIBLE, pivots=tableau.pivots)

        # drive remaining artificials out of the basis
        artificial_cols = set(art_index.values())
        for i in range(tableau.m):
            if tableau.basis[i] in artificial_cols:
                col = next((j for j in range(n + m) if tableau.rows[i][j] != 0), None)
                if col is not None:
                    tableau.pivot(i, col)

    tableau.set_objective(costs + [Fraction(0)] * (width - 1 - n))
    status = tableau.run(range(n + m))
    if status == UNBOUNDED:
        return LPResult(status=UNBOUNDED, pivots=tableau.pivots)

    x = [Fraction(0)] * n
    for i, col in enumerate(tableau.basis):
        if col < n:
            x[col] = tableau.rows[i][-1]
    value = sum((c * v for c, v in zip(costs, x)), Fraction(0))
    return LPResult(status=OPTIMAL, x=x, value=value, pivots=tableau.pivots)
