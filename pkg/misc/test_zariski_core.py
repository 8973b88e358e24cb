"""
Test script for the exact Zariski solver
Checks decompositions against a brute-force oracle, certificates, validation errors and label handling
"""

import itertools
import time
from fractions import Fraction

import numpy as np
import sympy as sp

from src.errors import (
    EmptyList,
    InexactInput,
    LabelMismatch,
    NoNefBelow,
    NonNegativeDiagonal,
    OffDiagonalNegative,
)
from src.zariski_core import (
    BasisVector,
    certify_negative_part,
    coordinate_max,
    independence_check,
    is_nef,
    monotone_clipping,
    solve_decomposition,
    validate_system,
)
from src.zariski_core.linalg import as_matrix, as_rows, determinant, from_rational, leading_minors, rank, to_rational


def print_test(test_name):
    """Print test name"""
    print(f"\n{'='*60}")
    print(f"TEST: {test_name}")
    print(f"{'='*60}")


def print_success(message):
    """Print success message"""
    print(f"✓ {message}")


# ---- helpers ----------------------------------------------------------------

def random_rational(rng, bound=8):
    return Fraction(int(rng.integers(-bound, bound + 1)), int(rng.integers(1, bound + 1)))


def random_system(rng, n):
    rows = []
    for i in range(n):
        row = []
        for j in range(n):
            value = random_rational(rng)
            row.append(value if i == j else abs(value))
        rows.append(row)
    return validate_system(rows)


def support_oracle(system, x):
    """
    Every nef y ≤ x with φ_λ(y) = 0 on the support of x − y, one candidate per support

    The greatest nef element below x has this form, so it is the candidate dominating all others.
    """
    labels = system.labels
    q = as_matrix(system.q_matrix)
    xs = as_matrix([[x.get(label)] for label in labels])
    candidates = []
    for size in range(0, len(labels) + 1):
        for subset in itertools.combinations(range(len(labels)), size):
            z = [Fraction(0)] * len(labels)
            if subset:
                rows = list(subset)
                block = q.extract(rows, rows)
                if block.det(method="bareiss") == 0:
                    continue
                rhs = q.extract(rows, list(range(q.cols))) * xs
                sol = [from_rational(v) for v in block.LUsolve(rhs)]
                if any(v < 0 for v in sol):
                    continue
                for k, i in enumerate(subset):
                    z[i] = sol[k]
            y = BasisVector(tuple((labels[i], x.get(labels[i]) - z[i]) for i in range(len(labels))))
            if is_nef(system, y):
                candidates.append(y)
    return candidates


def grid_below(system, x, steps=(0, Fraction(1, 2), 1, Fraction(3, 2), 2, 3, 4)):
    """Nef points of the grid x − steps^n"""
    labels = system.labels
    for offsets in itertools.product(steps, repeat=len(labels)):
        y = BasisVector(tuple((label, x.get(label) - Fraction(o)) for label, o in zip(labels, offsets)))
        if is_nef(system, y):
            yield y


# ---- tests ------------------------------------------------------------------

def test_single_negative_curve():
    system = validate_system([["-1"]])
    result = solve_decomposition(system, BasisVector.from_list(system.labels, ["1"]))
    assert result.positive.values() == [Fraction(0)]
    assert result.negative.values() == [Fraction(1)]
    assert result.support == (0,)


def test_nef_input_is_its_own_positive_part():
    system = validate_system([[-2, 1], [1, -2]])
    x = BasisVector.from_list(system.labels, [-1, -1])
    assert is_nef(system, x)
    result = solve_decomposition(system, x)
    assert result.positive == x
    assert result.negative.is_zero()
    assert result.certificate is None


def test_no_nef_below():
    system = validate_system([[1]])
    try:
        solve_decomposition(system, BasisVector.from_list(system.labels, [-1]))
    except NoNefBelow as e:
        assert e.exit_code == 3
    else:
        raise AssertionError("expected NoNefBelow")


def test_random_systems_match_oracle():
    rng = np.random.default_rng(20240601)
    start = time.time()
    checked = 0
    for _ in range(200):
        n = int(rng.integers(1, 4))
        system = random_system(rng, n)
        x = BasisVector.from_list(system.labels, [random_rational(rng) for _ in range(n)])
        candidates = support_oracle(system, x)
        try:
            result = solve_decomposition(system, x)
        except NoNefBelow:
            assert not candidates
            assert not list(grid_below(system, x))
            continue
        y = result.positive
        assert y in candidates
        assert all(y.dominates(c) for c in candidates)
        assert all(y.dominates(g) for g in grid_below(system, x))
        assert all(isinstance(v, Fraction) for v in y.values() + result.negative.values())
        checked += 1
    assert checked > 0
    assert time.time() - start < 10.0


def test_certificates_on_random_systems():
    rng = np.random.default_rng(7)
    seen = 0
    for _ in range(200):
        n = int(rng.integers(1, 4))
        system = random_system(rng, n)
        x = BasisVector.from_list(system.labels, [random_rational(rng) for _ in range(n)])
        try:
            result = solve_decomposition(system, x)
        except NoNefBelow:
            continue
        if not result.support:
            continue
        cert = result.certificate
        sub = system.restrict(result.support)
        q = as_matrix(sub.q_matrix)
        k = q.rows
        assert as_matrix(cert.lower) * q * as_matrix(cert.upper) == -sp.eye(k)
        assert ((-1) ** k) * q.det(method="bareiss") > 0
        assert cert.det_sign_ok
        if sub.is_symmetric():
            assert all(((-1) ** j) * q[:j, :j].det(method="bareiss") > 0 for j in range(1, k + 1))
            assert cert.symmetric_negdef
        seen += 1
    assert seen > 0


def test_symmetric_congruence():
    system = validate_system([[-2, 1, 0], [1, -2, 1], [0, 1, -2]])
    cert = certify_negative_part(system, system.labels)
    l = as_matrix(cert.congruence)
    q = as_matrix(system.q_matrix)
    diag = cert.congruence_diagonal
    assert all(d < 0 for d in diag)
    assert l * q * l.T == sp.diag(*[to_rational(d) for d in diag])
    assert diag == (Fraction(-2), Fraction(-6), Fraction(-192))


def test_non_negative_diagonal_rejected():
    system = validate_system([[0, 1], [1, -1]])
    try:
        certify_negative_part(system, [0])
    except NonNegativeDiagonal as e:
        assert e.exit_code == 1
    else:
        raise AssertionError("expected NonNegativeDiagonal")


def test_validation_errors():
    for bad, error in (([[-1, -1], [0, -1]], OffDiagonalNegative), ([], EmptyList),
                       ([[1, 0]], LabelMismatch), ([[0.5]], InexactInput)):
        try:
            validate_system(bad)
        except error as e:
            assert e.exit_code == 2
        else:
            raise AssertionError(f"expected {error.__name__} for {bad}")


def test_label_permutation_invariance():
    q = [["-3", "1", "2/3"], ["1", "-1", "0"], ["1/2", "0", "-2"]]
    labels = ["a", "b", "c"]
    x = {"a": "1", "b": "2", "c": "-1/2"}
    base = solve_decomposition(validate_system(q, labels), BasisVector.from_mapping(labels, x))

    perm = [2, 0, 1]
    q_perm = [[q[i][j] for j in perm] for i in perm]
    labels_perm = [labels[i] for i in perm]
    permuted = solve_decomposition(validate_system(q_perm, labels_perm),
                                   BasisVector.from_mapping(labels_perm, x))
    for label in labels:
        assert base.positive.get(label) == permuted.positive.get(label)
        assert base.negative.get(label) == permuted.negative.get(label)
    assert set(base.support) == set(permuted.support)


def test_idempotent_on_positive_part():
    system = validate_system([[-1, 1], [1, -3]])
    x = BasisVector.from_list(system.labels, [2, 1])
    first = solve_decomposition(system, x)
    second = solve_decomposition(system, first.positive)
    assert second.positive == first.positive
    assert second.negative.is_zero()


def test_clipping_dominates_solution():
    system = validate_system([[-2, 1], [1, -1]])
    x = BasisVector.from_list(system.labels, [3, 1])
    result = solve_decomposition(system, x, cross_check=False)
    iterate, _ = monotone_clipping(system, x)
    assert iterate.dominates(result.positive)


def test_coordinate_max_of_nef_is_nef():
    system = validate_system([[-1, 1], [1, -1]])
    u = BasisVector.from_list(system.labels, [1, 1])
    v = BasisVector.from_list(system.labels, [0, 0])
    m = coordinate_max(system, [u, v])
    assert is_nef(system, m)
    assert m.values() == [Fraction(1), Fraction(1)]


def test_independence_check():
    system = validate_system([[-1, 1], [1, -1]])
    assert independence_check(system, [0])
    assert not independence_check(system, [0, 1])


def test_exact_linear_algebra():
    rows = [[Fraction(-2), Fraction(1, 2)], [Fraction(1, 3), Fraction(-1)]]
    assert determinant(rows) == Fraction(11, 6)
    assert leading_minors(rows) == [Fraction(-2), Fraction(11, 6)]
    assert rank(rows) == 2
    assert rank([[1, 2], [2, 4]]) == 1
    assert determinant([]) == Fraction(1)
    assert as_rows(as_matrix(rows)) == tuple(tuple(row) for row in rows)


def test_positive_homogeneity():
    rng = np.random.default_rng(11)
    checked = 0
    for _ in range(60):
        n = int(rng.integers(1, 4))
        system = random_system(rng, n)
        x = BasisVector.from_list(system.labels, [random_rational(rng) for _ in range(n)])
        try:
            base = solve_decomposition(system, x, with_certificate=False)
        except NoNefBelow:
            continue
        for a in (Fraction(0), Fraction(1, 3), Fraction(2), Fraction(7, 2)):
            scaled = solve_decomposition(system, x.scale(a), with_certificate=False)
            assert scaled.positive == base.positive.scale(a)
            assert scaled.negative == base.negative.scale(a)
        checked += 1
    assert checked > 0


def test_lattice_monotonicity():
    rng = np.random.default_rng(23)
    checked = 0
    for _ in range(100):
        n = int(rng.integers(1, 4))
        system = random_system(rng, n)
        x1 = BasisVector.from_list(system.labels, [random_rational(rng) for _ in range(n)])
        x2 = BasisVector.from_list(system.labels, [random_rational(rng) for _ in range(n)])
        try:
            p1 = solve_decomposition(system, x1, with_certificate=False).positive
            p2 = solve_decomposition(system, x2, with_certificate=False).positive
        except NoNefBelow:
            continue
        top = solve_decomposition(system, coordinate_max(system, [x1, x2]), with_certificate=False)
        assert top.positive.dominates(coordinate_max(system, [p1, p2]))
        checked += 1
    assert checked > 0


def test_complementarity():
    rng = np.random.default_rng(31)
    checked = 0
    for _ in range(100):
        n = int(rng.integers(1, 4))
        system = random_system(rng, n)
        x = BasisVector.from_list(system.labels, [random_rational(rng) for _ in range(n)])
        try:
            result = solve_decomposition(system, x, with_certificate=False)
        except NoNefBelow:
            continue
        qy = system.apply(result.positive)
        assert all(qy[label] * result.negative.get(label) == 0 for label in system.labels)
        assert sum(qy[label] * result.negative.get(label) for label in system.labels) == 0
        checked += 1
    assert checked > 0


def main():
    print("\n" + "=" * 60)
    print("ZARISKI CORE TEST SUITE")
    print("=" * 60)
    tests = [
        ("1. Single negative curve", test_single_negative_curve),
        ("2. Nef input", test_nef_input_is_its_own_positive_part),
        ("3. No nef vector below", test_no_nef_below),
        ("4. Random systems vs brute force", test_random_systems_match_oracle),
        ("5. Certificates", test_certificates_on_random_systems),
        ("6. Symmetric congruence", test_symmetric_congruence),
        ("7. Non-negative diagonal", test_non_negative_diagonal_rejected),
        ("8. Validation errors", test_validation_errors),
        ("9. Label permutation", test_label_permutation_invariance),
        ("10. Idempotence", test_idempotent_on_positive_part),
        ("11. Clipping iterate", test_clipping_dominates_solution),
        ("12. Coordinate max", test_coordinate_max_of_nef_is_nef),
        ("13. Independence", test_independence_check),
        ("14. Exact linear algebra", test_exact_linear_algebra),
        ("15. Positive homogeneity", test_positive_homogeneity),
        ("16. Lattice monotonicity", test_lattice_monotonicity),
        ("17. Complementarity", test_complementarity),
    ]
    for name, test in tests:
        print_test(name)
        test()
        print_success("passed")
    print("\n" + "=" * 60)
    print("ALL TESTS PASSED")
    print("=" * 60)


if __name__ == "__main__":
    main()
