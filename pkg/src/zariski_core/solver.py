# Zariski Solver - greatest nef element below x, negative-part certificates, independence checks
# Main functions: solve_decomposition(), certify_negative_part(), independence_check(), monotone_clipping()
# Used by: commands/handlers.py (solve, certify), p1 negative-part cross checks, tests

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Hashable, Optional, Sequence, Tuple

import sympy as sp

from src.errors import (
    CertificateFailure,
    EmptyList,
    NoNefBelow,
    NonNegativeDiagonal,
    SingularReduction,
)
from src.zariski_core import simplex
from src.zariski_core.linalg import (
    as_matrix,
    as_rows,
    block_diag_one,
    determinant,
    from_rational,
    leading_minors,
    rank,
)
from src.zariski_core.system import BasisVector, ZariskiSystem, check_labels, is_nef

logger = logging.getLogger(__name__)

CLIPPING_MAX_SWEEPS = 50


@dataclass(frozen=True)
class NegativityCertificate:
    """
    A·Q′·B = −I for Q′ the system restricted to `labels`.

    A carries all scaling so both factors stay rational. For symmetric Q′ the unscaled
    congruence `congruence` (L) and `congruence_diagonal` (D) satisfy L·Q′·Lᵀ = diag(D) with
    D < 0. Then A = diag(√−D)⁻¹·L has A·Q′·Aᵀ = −I, the B = Aᵀ form of the same statement;
    L and D stay unscaled because √−D is irrational in general.
    """

    labels: Tuple[Hashable, ...]
    lower: Tuple[Tuple[Fraction, ...], ...]
    upper: Tuple[Tuple[Fraction, ...], ...]
    det_sign_ok: bool
    symmetric_negdef: Optional[bool] = None
    congruence: Optional[Tuple[Tuple[Fraction, ...], ...]] = None
    congruence_diagonal: Optional[Tuple[Fraction, ...]] = None


@dataclass(frozen=True)
class Decomposition:
    positive: BasisVector
    negative: BasisVector
    support: Tuple[Hashable, ...]
    certificate: Optional[NegativityCertificate] = None


def _pivot_reduce(q: sp.Matrix, step: int = 1) -> Tuple[sp.Matrix, sp.Matrix, sp.Matrix, list]:
    """
    Recursive pivot reduction on the first coordinate

    Returns (A, B, L, D) with A·q·B = −I. L is the unscaled product of the row factors;
    for symmetric q, L·q·Lᵀ = diag(D).
    """
    n = q.rows
    if n == 0:
        return sp.zeros(0, 0), sp.zeros(0, 0), sp.zeros(0, 0), []
    p = q[0, 0]
    if p >= 0:
        raise SingularReduction(step, from_rational(p))

    a1 = sp.diag(1, *([-p] * (n - 1)))
    b1 = sp.diag(1, *([-p] * (n - 1)))
    for i in range(1, n):
        a1[i, 0] = q[i, 0]
        b1[0, i] = q[0, i]

    if n == 1:
        reduced = sp.zeros(0, 0)
    else:
        reduced = p * p * q[1:, 1:] - p * q[1:, 0] * q[0, 1:]
    logger.debug(f"reduction step {step}: pivot {p}, reduced size {n - 1}")

    a_inner, b_inner, l_inner, d_inner = _pivot_reduce(reduced, step + 1)
    a = block_diag_one(1 / (-p), a_inner) * a1
    b = b1 * block_diag_one(1, b_inner)
    l = block_diag_one(1, l_inner) * a1
    return a, b, l, [p] + d_inner


def certify_negative_part(system: ZariskiSystem, support: Sequence[Hashable]) -> NegativityCertificate:
    """
    Build the triangular certificate A·Q′·B = −I for the support of a negative part

    Args:
        system: validated Zariski system
        support: non-empty label subset

    Returns:
        NegativityCertificate, verified by exact multiplication

    Raises:
        EmptyList: empty support
        NonNegativeDiagonal: Q′ has a diagonal entry ≥ 0
        SingularReduction: a reduced pivot is not negative
        CertificateFailure: exact verification failed
    """
    if not support:
        raise EmptyList("support")
    sub = system.restrict(support)
    q = as_matrix(sub.q_matrix)
    k = sub.size

    for i, label in enumerate(sub.labels):
        if q[i, i] >= 0:
            raise NonNegativeDiagonal(label, from_rational(q[i, i]))

    a, b, l, d = _pivot_reduce(q)

    if a * q * b != -sp.eye(k):
        raise CertificateFailure("A·Q′·B ≠ −I", labels=[str(x) for x in sub.labels])
    if not (a.is_lower and b.is_upper):
        raise CertificateFailure("certificate factors are not triangular")
    if any(v < 0 for v in a) or any(v < 0 for v in b):
        raise CertificateFailure("certificate factors have negative entries")
    if not (all(a[i, i] > 0 for i in range(k)) and all(b[i, i] > 0 for i in range(k))):
        raise CertificateFailure("certificate factors have non-positive determinant")

    det_q = determinant(q)
    det_sign_ok = ((-1) ** k) * det_q > 0

    symmetric_negdef = None
    congruence = None
    congruence_diagonal = None
    if sub.is_symmetric():
        minors = leading_minors(q)
        symmetric_negdef = all(((-1) ** (j + 1)) * m > 0 for j, m in enumerate(minors))
        if l * q * l.T != sp.diag(*d):
            raise CertificateFailure("symmetric congruence L·Q′·Lᵀ is not diagonal")
        congruence = as_rows(l)
        congruence_diagonal = tuple(from_rational(v) for v in d)

    logger.info(f"✓ Certificate for support {list(sub.labels)}: det sign ok={det_sign_ok}, "
                f"negative definite={symmetric_negdef}")
    return NegativityCertificate(
        labels=sub.labels,
        lower=as_rows(a),
        upper=as_rows(b),
        det_sign_ok=det_sign_ok,
        symmetric_negdef=symmetric_negdef,
        congruence=congruence,
        congruence_diagonal=congruence_diagonal,
    )


def independence_check(system: ZariskiSystem, support: Sequence[Hashable]) -> bool:
    """True iff the columns of Q indexed by `support` are linearly independent"""
    cols = [system.index_of(label) for label in system.labels if label in set(support)]
    if not cols:
        return True
    return rank(as_matrix(system.q_matrix)[:, cols]) == len(cols)


def monotone_clipping(system: ZariskiSystem, x: BasisVector,
                      max_sweeps: int = CLIPPING_MAX_SWEEPS) -> Tuple[Optional[BasisVector], bool]:
    """
    Decreasing Gauss-Seidel clipping toward the greatest nef element below x

    Every iterate dominates the greatest element. Returns (iterate, converged), or
    (None, False) when a violated coordinate has a non-negative diagonal entry.
    """
    labels = system.labels
    y = {label: x.get(label) for label in labels}
    n = system.size
    for sweep in range(max_sweeps):
        changed = False
        for i in range(n):
            row = system.q_matrix[i]
            value = sum((row[j] * y[labels[j]] for j in range(n)), Fraction(0))
            if value < 0:
                if row[i] >= 0:
                    return None, False
                y[labels[i]] -= value / row[i]
                changed = True
        if not changed:
            return BasisVector(tuple((label, y[label]) for label in labels)), True
    return BasisVector(tuple((label, y[label]) for label in labels)), False


def _verify(system: ZariskiSystem, x: BasisVector, y: BasisVector, z: BasisVector):
    if y + z != x:
        raise CertificateFailure("positive + negative ≠ input")
    if any(v < 0 for v in z.values()):
        raise CertificateFailure("negative part has a negative coordinate")
    qy = system.apply(y)
    if any(v < 0 for v in qy.values()):
        raise CertificateFailure("positive part is not nef")
    if any(qy[label] != 0 for label in z.support()):
        raise CertificateFailure("φ_λ(y) ≠ 0 on the support of the negative part")


def solve_decomposition(system: ZariskiSystem, x: BasisVector, cross_check: bool = True,
                        with_certificate: bool = True) -> Decomposition:
    """
    Zariski decomposition of x: y is the greatest nef vector with y ≤ x, z = x − y

    The greatest element maximizes Σ y_λ over {y ≤ x, Q·y ≥ 0}; writing y = x − w with
    w ≥ 0 this is the LP  min Σ w  s.t.  Q·w ≤ Q·x.

    Args:
        system: validated system
        x: input vector
        cross_check: also run the monotone clipping iteration and compare
        with_certificate: attach the negative-part certificate when z ≠ 0

    Returns:
        Decomposition

    Raises:
        NoNefBelow: no nef vector lies below x
        CertificateFailure: the solved parts violate the decomposition conditions
    """
    check_labels(system, x)
    x = x.reorder(system.labels)
    logger.info(f"=== SOLVING {system.size}-DIMENSIONAL DECOMPOSITION ===")

    if is_nef(system, x):
        logger.info("✓ Input is nef: positive part equals input")
        zero = x.scale(0)
        return Decomposition(positive=x, negative=zero, support=())

    qx = system.apply(x)
    result = simplex.minimize(
        costs=[1] * system.size,
        a_ub=[list(row) for row in system.q_matrix],
        b_ub=[qx[label] for label in system.labels],
    )
    if result.status != simplex.OPTIMAL:
        logger.info(f"✗ LP status {result.status}: no nef vector below input")
        raise NoNefBelow()

    z = BasisVector(tuple(zip(system.labels, result.x)))
    y = x - z
    _verify(system, x, y, z)
    logger.debug(f"LP solved in {result.pivots} pivots, Σz = {result.value}")

    if cross_check:
        iterate, converged = monotone_clipping(system, x)
        if iterate is not None:
            if not iterate.dominates(y):
                raise CertificateFailure("clipping iterate fell below the LP solution")
            if converged and iterate != y:
                raise CertificateFailure("clipping converged to a different nef vector")
            logger.debug(f"clipping cross-check: converged={converged}")

    support = z.support()
    certificate = certify_negative_part(system, support) if (with_certificate and support) else None
    logger.info(f"✓ Decomposition found: support {list(support)}")
    return Decomposition(positive=y, negative=z, support=support, certificate=certificate)
