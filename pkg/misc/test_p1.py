"""
Test script for arithmetic divisors on P¹_ℤ
Covers closed-form decompositions, pairings, volumes, degrees and the negative-part bridge to the exact solver
"""

import math
import time
from fractions import Fraction

import sympy as sp

from src.errors import NoDecomposition, NotComputed, UnsupportedConfiguration
from src.p1 import (
    C0,
    Admissible,
    CInf,
    OneKink,
    PrincipalShift,
    Scaled,
    TwoKink,
    degree_on_curve,
    degree_sweep,
    green_value,
    hodge_index_check,
    is_big,
    is_effective,
    is_nef_p1,
    is_psh,
    negative_part_certificate,
    negative_part_matrix,
    pairing,
    rational_point,
    toric_volume,
    volume_p1,
    zariski_decompose_p1,
)
from src.p1.decomposition import combine_scaling, scaling_family
from src.zariski_core.linalg import as_matrix

LOG2 = math.log(2.0)


def print_test(test_name):
    """Print test name"""
    print(f"\n{'='*60}")
    print(f"TEST: {test_name}")
    print(f"{'='*60}")


def print_success(message):
    """Print success message"""
    print(f"✓ {message}")


def test_theta_formula():
    d = OneKink(1.0, 1.0, -1.0)
    decomposition = zariski_decompose_p1(d)
    assert decomposition.theta == 0.5
    assert decomposition.negative_c0 == 0.5
    assert decomposition.negative_cinf == 0.0
    assert degree_on_curve(decomposition.positive, C0) == 0.0
    assert is_nef_p1(decomposition.positive)


def test_mirror_case_uses_principal_shift():
    d = OneKink(1.0, -1.0, 1.0)
    decomposition = zariski_decompose_p1(d)
    assert decomposition.theta_prime == 0.5
    assert isinstance(decomposition.positive, PrincipalShift)
    assert decomposition.negative_cinf == 0.5
    assert abs(degree_on_curve(decomposition.positive, CInf)) < 1e-12
    assert abs(volume_p1(d) - 0.5) < 1e-12


def test_admissible_self_pairing():
    start = time.time()
    for lam in (0.25, 0.5, 1.0, 2.0):
        d = Admissible(lam)
        assert abs(pairing(d, d) - 0.5 * (math.log(lam) + 1.0)) < 1e-8
    assert time.time() - start < 5.0


def test_pairing_symmetry():
    divisors = [Admissible(0.5), Admissible(2.0), OneKink(1.0, 1.0, -1.0), OneKink(2.0, 0.3, 0.7),
                TwoKink(0.2, 0.1, -0.4, -0.3)]
    for a in divisors:
        for b in divisors:
            assert abs(pairing(a, b) - pairing(b, a)) < 2e-8


def test_one_kink_self_pairing_closed_form():
    d = OneKink(2.0, 0.3, 0.7)
    assert abs(pairing(d, d) - d.self_pairing_closed_form()) < 1e-10


def test_volume_identity():
    d = OneKink(1.0, 1.0, -1.0)
    assert volume_p1(d) == 0.5
    assert abs(toric_volume(d) - 0.5) < 1e-9


def test_scaled_admissible_volume():
    assert abs(volume_p1(Scaled(Admissible(1.0), 2.0)) - 2.0) < 1e-9


def test_volume_homogeneity_and_shift():
    d = OneKink(1.0, 1.0, -1.0)
    assert abs(volume_p1(Scaled(d, 2.0)) - 4.0 * volume_p1(d)) < 1e-9
    assert abs(volume_p1(PrincipalShift(d, 3.0)) - volume_p1(d)) < 1e-9


def test_theta_degenerates_to_zero_positive_part():
    grid = [-3.0, -1.0, 0.0, 0.5, 2.0]
    previous = math.inf
    for log_alpha in (0.1, 0.01, 0.001):
        decomposition = zariski_decompose_p1(OneKink(1.0, log_alpha, -1.0))
        assert 0.0 < decomposition.theta < previous
        previous = decomposition.theta
        positive = decomposition.positive
        assert abs(positive.c0 - decomposition.theta) < 1e-15
        assert max(abs(green_value(positive, t)) for t in grid) <= 10.0 * log_alpha
    for log_beta in (-1.0, -0.1, -0.01):
        decomposition = zariski_decompose_p1(OneKink(1.0, 0.0, log_beta))
        assert decomposition.theta == 0.0
        assert decomposition.negative_c0 == 1.0
        assert all(green_value(decomposition.positive, t) == 0.0 for t in grid)


def test_principal_shift_invariance():
    d = OneKink(1.0, 1.0, -1.0)
    other = Admissible(2.0)
    base_degrees = degree_sweep(d, 4)
    for k in (-1.5, 0.5, 3.0):
        shifted = PrincipalShift(d, k)
        for (label, value), (shifted_label, shifted_value) in zip(base_degrees, degree_sweep(shifted, 4)):
            assert label == shifted_label
            assert abs(value - shifted_value) < 1e-12
        assert abs(pairing(shifted, other) - pairing(d, other)) < 1e-8
        assert abs(pairing(shifted, shifted) - pairing(d, d)) < 1e-8
        decomposition = zariski_decompose_p1(shifted)
        assert decomposition.theta == 0.5
        assert decomposition.negative_c0 == 0.5
        assert isinstance(decomposition.positive, PrincipalShift) and decomposition.positive.k == k


def test_non_existence():
    d = OneKink(1.0, -LOG2, -LOG2)
    try:
        zariski_decompose_p1(d)
    except NoDecomposition as e:
        witness = e.witness
        assert e.exit_code == 3
        assert witness["t0_adequate"]
        assert witness["mid_sections_trivial"]
        assert witness["mid_volume"] == 0.0
        assert witness["epsilon"] > 0
    else:
        raise AssertionError("expected NoDecomposition")


def test_scaling_family_combination():
    d = OneKink(1.0, -0.5, -0.3)
    weight, log_t = combine_scaling(2.0, 1.0, 3.0, -1.0)
    assert weight == 5.0
    assert abs(log_t - (-0.2)) < 1e-15
    shifted = scaling_family(d, 1.0)
    assert abs(shifted.log_a - 0.5) < 1e-15 and abs(shifted.log_b - 0.7) < 1e-15


def test_admissible_below_one_not_computed():
    try:
        zariski_decompose_p1(Admissible(0.5))
    except NotComputed as e:
        assert e.exit_code == 3
    else:
        raise AssertionError("expected NotComputed")
    report = hodge_index_check(Admissible(0.5))
    assert report.holds
    assert report.vol_estimate > 0


def test_predicates():
    nef = OneKink(1.0, 1.0, 1.0)
    assert is_psh(nef) and is_nef_p1(nef) and is_big(nef) and is_effective(nef)
    not_nef = OneKink(1.0, 1.0, -1.0)
    assert is_psh(not_nef) and not is_nef_p1(not_nef)
    assert is_effective(not_nef)
    assert not is_big(OneKink(1.0, -0.1, -0.2))


def test_degrees_on_rational_points():
    d = OneKink(1.0, 0.0, 0.0)
    for m, n in ((1, 1), (2, 1), (-3, 2), (1, 5), (7, 3)):
        expected = math.log(max(abs(m), n))
        assert abs(degree_on_curve(d, rational_point(m, n)) - expected) < 1e-12
    rows = degree_sweep(OneKink(1.0, 1.0, 1.0), 5)
    assert rows[0][0] == "C0" and rows[1][0] == "CInf"
    assert min(value for _, value in rows) >= 0.0


def test_two_kink_positive_part():
    d = TwoKink(0.5, 0.3, -1.0, -1.2)
    decomposition = zariski_decompose_p1(d)
    s = 0.8
    assert abs(decomposition.theta - s / 1.5) < 1e-12
    assert abs(decomposition.theta_prime - s / 1.5) < 1e-12
    positive = decomposition.positive
    assert is_nef_p1(positive)
    assert abs(degree_on_curve(positive, C0)) < 1e-12
    assert abs(degree_on_curve(positive, CInf)) < 1e-12


def test_negative_part_matrix_and_certificate():
    d = TwoKink(0.0, 0.0, -LOG2, -LOG2)
    npm = negative_part_matrix(d)
    (a, b), (c, e) = npm.matrix
    assert abs(a + LOG2) < 1e-10 and abs(e + LOG2) < 1e-10
    assert abs(b) < 1e-10 and abs(c) < 1e-10
    assert npm.determinant_sign_ok()

    cert = negative_part_certificate(d)
    assert cert.det_sign_ok
    assert cert.symmetric_negdef
    diag = cert.congruence_diagonal
    assert all(isinstance(v, Fraction) and v < 0 for v in diag)
    assert abs(float(diag[0]) + LOG2) < 1e-8


def test_negative_part_matrix_configuration():
    try:
        negative_part_matrix(TwoKink(0.1, 0.0, -LOG2, -LOG2))
    except UnsupportedConfiguration as e:
        assert e.exit_code == 2
    else:
        raise AssertionError("expected UnsupportedConfiguration")


def test_certificate_factors_multiply_to_minus_identity():
    cert = negative_part_certificate(TwoKink(0.0, 0.0, -LOG2, -0.5))
    q = as_matrix([[Fraction(-LOG2).limit_denominator(100000), 0],
                   [0, Fraction(-0.5).limit_denominator(100000)]])
    assert as_matrix(cert.lower) * q * as_matrix(cert.upper) == -sp.eye(2)


def main():
    print("\n" + "=" * 60)
    print("P1 DIVISORS TEST SUITE")
    print("=" * 60)
    tests = [
        ("1. θ formula", test_theta_formula),
        ("2. Mirror case", test_mirror_case_uses_principal_shift),
        ("3. Admissible self-pairing", test_admissible_self_pairing),
        ("4. Pairing symmetry", test_pairing_symmetry),
        ("5. One-kink closed form", test_one_kink_self_pairing_closed_form),
        ("6. Volume identity", test_volume_identity),
        ("7. Scaled admissible volume", test_scaled_admissible_volume),
        ("8. Homogeneity and shift", test_volume_homogeneity_and_shift),
        ("9. θ degeneration", test_theta_degenerates_to_zero_positive_part),
        ("10. Principal-shift invariance", test_principal_shift_invariance),
        ("11. Non-existence", test_non_existence),
        ("12. Scaling family", test_scaling_family_combination),
        ("13. Admissible λ < 1", test_admissible_below_one_not_computed),
        ("14. Predicates", test_predicates),
        ("15. Degrees", test_degrees_on_rational_points),
        ("16. Two-kink positive part", test_two_kink_positive_part),
        ("17. Negative-part certificate", test_negative_part_matrix_and_certificate),
        ("18. Negative-part configuration", test_negative_part_matrix_configuration),
        ("19. Certificate product", test_certificate_factors_multiply_to_minus_identity),
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
