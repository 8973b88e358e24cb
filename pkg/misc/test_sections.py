"""
Test script for small sections on P¹_ℤ
Covers monomial norms, counting and its bounds, distortion laws, the σ-decomposition and the probes
"""

import math
import time

import numpy as np

from src.errors import EmptySections, UnsupportedConfiguration, ZeroSection
from src.p1 import C0, CInf, OneKink, Scaled
from src.p1.divisors import Admissible, Combination, green_value, zero_divisor
from src.sections.counting import hhat0_bounds, hhat0_exact, sn_box
from src.sections.distortion import (
    dist_growth_probe,
    distortion,
    gromov_probe,
    log_distortion,
    log_inner_products,
    section_inner_product,
    section_log_pointwise,
)
from src.sections.sigma import asymptotic_multiplicity, fixed_part, orthogonality_probe, sigma_decomposition
from src.sections.space import (
    IntegerSection,
    l2_circle_lower_bound,
    log_sup_norm,
    random_section,
    section_space,
    sup_norm,
)

BIG_NOT_NEF = OneKink(1.0, 1.0, -1.0)
NEF_AND_BIG = OneKink(1.0, 1.0, 1.0)


def print_test(test_name):
    """Print test name"""
    print(f"\n{'='*60}")
    print(f"TEST: {test_name}")
    print(f"{'='*60}")


def print_success(message):
    """Print success message"""
    print(f"✓ {message}")


# ---- norms ------------------------------------------------------------------

def test_closed_form_norms_match_search():
    for divisor, levels in ((BIG_NOT_NEF, range(1, 7)), (Admissible(2.0), range(1, 4))):
        for n in levels:
            space = section_space(divisor, n)
            for i in space.exponents:
                searched = log_sup_norm(IntegerSection(((i, 1),)), space)
                expected = space.log_norm(i)
                assert abs(searched - expected) <= 1e-9 * max(1.0, abs(expected)), (n, i, searched, expected)


def test_one_kink_norm_formula():
    space = section_space(BIG_NOT_NEF, 6)
    assert space.exponents == tuple(range(7))
    assert space.log_norms == tuple(float(2 * i - 6) for i in range(7))
    assert space.small_exponents() == [0, 1, 2, 3]


def test_sup_norm_above_circle_bound():
    space = section_space(OneKink(1.0, 1.0, 0.0), 1)
    s = IntegerSection(((0, 1), (1, 1)))
    sup = log_sup_norm(s, space)
    for t in (-3.0, -1.0, 0.0, 1.0):
        assert l2_circle_lower_bound(s, space, t) <= sup + 1e-12
    assert sup >= 0.5 * math.log(math.exp(-2.0) + 1.0)
    assert abs(sup_norm(s, space) - (1.0 + math.exp(-1.0))) < 1e-9


def test_zero_section_rejected():
    space = section_space(BIG_NOT_NEF, 2)
    try:
        log_sup_norm(IntegerSection(()), space)
    except ZeroSection as e:
        assert e.exit_code == 2
    else:
        raise AssertionError("expected ZeroSection")


# ---- counting ---------------------------------------------------------------

def test_count_level_one():
    result = hhat0_exact(section_space(BIG_NOT_NEF, 1))
    assert result.count == 5
    assert result.log_count == math.log(5)


def test_count_trivial_when_both_below_one():
    result = hhat0_exact(section_space(OneKink(1.0, -0.1, -0.2), 5))
    assert result.count == 1
    assert result.log_count == 0.0


def test_count_sandwich():
    for n in range(1, 5):
        space = section_space(BIG_NOT_NEF, n)
        exact = hhat0_exact(space)
        bounds = hhat0_bounds(space)
        assert bounds.lower <= exact.log_count + 1e-12 <= bounds.upper + 2e-12, (n, bounds, exact)


def test_count_independent_of_jobs():
    space = section_space(BIG_NOT_NEF, 3)
    assert hhat0_exact(space, jobs=1).count == hhat0_exact(space, jobs=4).count


def test_bounds_scale_with_volume():
    start = time.time()
    n = 200
    bounds = hhat0_bounds(section_space(BIG_NOT_NEF, n))
    assert time.time() - start < 1.0
    for value in (bounds.lower, bounds.upper):
        assert 0.45 <= value / (n * n / 2.0) <= 0.55


def test_bounds_monotone_in_parameters():
    smaller = hhat0_bounds(section_space(BIG_NOT_NEF, 10))
    larger = hhat0_bounds(section_space(OneKink(1.0, 1.5, -0.5), 10))
    assert larger.lower >= smaller.lower
    assert larger.upper >= smaller.upper


def test_sn_box_members_are_small():
    space = section_space(BIG_NOT_NEF, 30)
    box = sn_box(space)
    assert box.exponents == tuple(range(6))
    assert box.bounds[0] == 1
    assert box.certified
    corner = IntegerSection(tuple((i, b) for i, b in zip(box.exponents, box.bounds)))
    assert log_sup_norm(corner, space) <= 1e-12
    try:
        sn_box(section_space(NEF_AND_BIG, 4))
    except UnsupportedConfiguration as e:
        assert e.exit_code == 2
    else:
        raise AssertionError("expected UnsupportedConfiguration")


# ---- distortion -------------------------------------------------------------

def test_distortion_of_constants_is_one():
    table = distortion(section_space(zero_divisor(), 3))
    assert table.exponents == (0,)
    assert all(abs(v - 1.0) < 1e-9 for v in table.values)


def test_pointwise_bound():
    rng = np.random.default_rng(11)
    space = section_space(BIG_NOT_NEF, 3)
    log_inner = log_inner_products(space)
    grid = np.linspace(-6.0, 3.0, 19)
    log_dist = log_distortion(space, log_inner, grid)
    assert np.all(np.isfinite(log_dist))
    for _ in range(20):
        s = random_section(space, rng)
        log_mass = math.log(section_inner_product(s, log_inner))
        for t, d in zip(grid, log_dist):
            for theta in rng.uniform(0.0, 2.0 * math.pi, size=5):
                assert 2.0 * section_log_pointwise(s, space, t, theta) <= d + log_mass + 1e-9


def test_comparison_law():
    n = 2
    space = section_space(BIG_NOT_NEF, n)
    bigger = section_space(OneKink(1.0, 1.5, -1.0), n)
    grid = np.linspace(-8.0, 6.0, 57)
    u = n * (np.asarray(bigger.profile.green(grid)) - np.asarray(space.profile.green(grid)))
    assert np.all(u >= 0) and np.ptp(u) > 0
    log_d = log_distortion(space, log_inner_products(space), grid)
    log_d_bigger = log_distortion(bigger, log_inner_products(bigger), grid)
    assert np.all(log_d <= u + log_d_bigger + 1e-9)


def test_growth_probe_chain():
    report = dist_growth_probe(BIG_NOT_NEF, 8)
    assert report.chain_holds
    assert report.exponent_ok
    assert math.isfinite(report.constant) and report.constant > 0
    for n, d in zip(report.levels, report.sup_dist):
        assert d <= report.constant * (n + 1) ** 3 * (1 + 1e-12)


def test_gromov_constant_finite():
    report = gromov_probe([BIG_NOT_NEF], samples=3, seed=5)
    assert math.isfinite(report.constant)
    assert report.constant >= 1.0 - 1e-6
    assert report.doubled_constant >= 1.0 - 1e-6
    assert report.evaluated > 0


def test_gromov_constant_stable_for_admissible():
    # ratio is 1/(1 + a) on constants and at most 1 on H⁰ of a·Admissible{1}; negative a has no sections
    report = gromov_probe([Admissible(1.0)], samples=6, seed=3)
    assert report.stable
    assert abs(report.constant - 1.0) < 1e-6
    assert abs(report.doubled_constant - report.constant) <= 0.1 * max(report.constant, report.doubled_constant)
    assert report.worst_coefficients == (0.0,)


# ---- σ-decomposition --------------------------------------------------------

def test_fixed_part_coefficients():
    for n in range(1, 13):
        result = sigma_decomposition(BIG_NOT_NEF, n, grid=[-2.0, 0.0])
        assert result.f_c0 == (n - n // 2) / n
        assert result.f_cinf == 0.0
        assert result.m_c0 == 1.0 - result.f_c0
        assert all(math.isfinite(g) for g in result.green_movable)


def test_nef_fixed_part_vanishes():
    for n in (1, 4, 9):
        result = sigma_decomposition(NEF_AND_BIG, n, grid=[0.0])
        assert result.f_c0 == 0.0 and result.f_cinf == 0.0


def test_fixed_part_superadditive():
    nu = {n: fixed_part(section_space(BIG_NOT_NEF, n)).nu_c0 for n in range(1, 21)}
    for n in range(1, 11):
        for m in range(1, 11):
            assert nu[n + m] <= nu[n] + nu[m] + 1e-12


def test_asymptotic_multiplicity():
    assert asymptotic_multiplicity(BIG_NOT_NEF, C0, 16).value == 0.5
    assert asymptotic_multiplicity(BIG_NOT_NEF, CInf, 16).value == 0.0
    nef = asymptotic_multiplicity(NEF_AND_BIG, C0, 16)
    assert nef.value == 0.0 and all(v == 0.0 for _, v in nef.sequence)


def test_multiplicity_homogeneous():
    single = asymptotic_multiplicity(BIG_NOT_NEF, C0, 8).value
    doubled = asymptotic_multiplicity(Scaled(BIG_NOT_NEF, 2.0), C0, 8).value
    assert abs(doubled - 2.0 * single) < 1e-12


def test_multiplicity_subadditive():
    d = BIG_NOT_NEF
    e = OneKink(1.0, 0.5, -1.5)
    # both kinks break at log|z| = −2, so D̄ + Ē is again one-kink
    total = OneKink(2.0, 1.5, -2.5)
    combined = Combination(((1.0, d), (1.0, e)))
    for t in (-4.0, -2.0, -0.5, 1.0):
        assert abs(green_value(total, t) - green_value(combined, t)) < 1e-12
    for curve in (C0, CInf):
        nu_d = asymptotic_multiplicity(d, curve, 16).value
        nu_e = asymptotic_multiplicity(e, curve, 16).value
        nu_total = asymptotic_multiplicity(total, curve, 16).value
        assert nu_total <= nu_d + nu_e + 1e-12
    assert asymptotic_multiplicity(e, C0, 16).value == 0.75
    assert asymptotic_multiplicity(total, C0, 16).value == 1.25


def test_empty_sections():
    try:
        sigma_decomposition(OneKink(1.0, -0.1, -0.2), 3)
    except EmptySections as e:
        assert e.exit_code == 3
    else:
        raise AssertionError("expected EmptySections")


def test_orthogonality_decays():
    start = time.time()
    report = orthogonality_probe(BIG_NOT_NEF, [4, 8, 16, 32])
    assert report.non_negative
    assert report.rows[-1].value < report.rows[0].value
    assert abs(report.limit) <= 0.05
    assert report.verdict
    assert time.time() - start < 60.0


def test_orthogonality_nef_is_zero():
    report = orthogonality_probe(NEF_AND_BIG, [2, 4, 8])
    assert all(r.value == 0.0 for r in report.rows)
    assert report.verdict


def main():
    print("\n" + "=" * 60)
    print("SECTIONS TEST SUITE")
    print("=" * 60)
    tests = [
        ("1. Closed-form norms vs search", test_closed_form_norms_match_search),
        ("2. One-kink norm formula", test_one_kink_norm_formula),
        ("3. Circle lower bound", test_sup_norm_above_circle_bound),
        ("4. Zero section", test_zero_section_rejected),
        ("5. Count at n = 1", test_count_level_one),
        ("6. Trivial count", test_count_trivial_when_both_below_one),
        ("7. Count sandwich", test_count_sandwich),
        ("8. Count vs jobs", test_count_independent_of_jobs),
        ("9. Bounds at n = 200", test_bounds_scale_with_volume),
        ("10. Bounds monotone", test_bounds_monotone_in_parameters),
        ("11. S_n sub-box", test_sn_box_members_are_small),
        ("12. Distortion of constants", test_distortion_of_constants_is_one),
        ("13. Pointwise bound", test_pointwise_bound),
        ("14. Comparison law", test_comparison_law),
        ("15. Growth probe", test_growth_probe_chain),
        ("16. Gromov constant", test_gromov_constant_finite),
        ("17. Gromov stability", test_gromov_constant_stable_for_admissible),
        ("18. Fixed part", test_fixed_part_coefficients),
        ("19. Nef fixed part", test_nef_fixed_part_vanishes),
        ("20. Superadditivity", test_fixed_part_superadditive),
        ("21. Asymptotic multiplicity", test_asymptotic_multiplicity),
        ("22. Homogeneity", test_multiplicity_homogeneous),
        ("23. Subadditivity of ν", test_multiplicity_subadditive),
        ("24. Empty sections", test_empty_sections),
        ("25. Orthogonality decay", test_orthogonality_decays),
        ("26. Orthogonality, nef case", test_orthogonality_nef_is_zero),
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
