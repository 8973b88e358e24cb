"""
Acceptance Verification Script

Walks the acceptance criteria one by one:
1-3.  Exact solver: brute-force agreement, certificates, rationality and label permutation
4-6.  P¹ divisors: θ formula, self-intersections, volume identity and count sandwich
7-9.  σ-decomposition, asymptotic multiplicities, asymptotic orthogonality
10.   Distortion laws
11-12. Negative-part certification, non-existence
"""

import io
import json
import math
import os
import sys
import time
from contextlib import redirect_stdout
from fractions import Fraction

# Add project root to path
project_root = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))
sys.path.insert(0, project_root)

import numpy as np
import sympy as sp

LOG2 = math.log(2.0)


def print_success(message):
    print(f"[PASS] {message}")


def print_error(message):
    print(f"[FAIL] {message}")
    sys.exit(1)


def check(condition, message):
    if condition:
        print_success(message)
    else:
        print_error(message)


def _is_rational(text):
    try:
        Fraction(text)
    except (TypeError, ValueError):
        return False
    return isinstance(text, str)


def verify_oracle_and_certificates():
    """Criteria 1 and 2"""
    print("\n=== 1-2. Exact solver vs brute force, certificates ===")

    from misc.test_zariski_core import grid_below, random_rational, random_system, support_oracle
    from src.errors import NoNefBelow
    from src.zariski_core import BasisVector, solve_decomposition
    from src.zariski_core.linalg import as_matrix, determinant, leading_minors

    rng = np.random.default_rng(20240601)
    decompositions = []
    start = time.time()
    for _ in range(200):
        n = int(rng.integers(1, 4))
        system = random_system(rng, n)
        x = BasisVector.from_list(system.labels, [random_rational(rng) for _ in range(n)])
        candidates = support_oracle(system, x)
        try:
            result = solve_decomposition(system, x)
        except NoNefBelow:
            if candidates or list(grid_below(system, x)):
                print_error("NoNefBelow although a nef vector lies below x")
            continue
        y = result.positive
        if y not in candidates or not all(y.dominates(g) for g in grid_below(system, x)):
            print_error(f"solver disagrees with brute force on {system.q_matrix}, x = {x.values()}")
        decompositions.append((system, result))
    elapsed = time.time() - start
    check(elapsed < 10.0, f"200 random systems match brute force ({elapsed:.2f} s)")

    certified = 0
    for system, result in decompositions:
        if not result.support:
            continue
        cert = result.certificate
        q = as_matrix(system.restrict(result.support).q_matrix)
        k = q.rows
        if as_matrix(cert.lower) * q * as_matrix(cert.upper) != -sp.eye(k):
            print_error(f"A·Q′·B ≠ −I for support {result.support}")
        if not ((-1) ** k) * determinant(q) > 0:
            print_error(f"determinant sign wrong for support {result.support}")
        if system.restrict(result.support).is_symmetric():
            if not all(((-1) ** (j + 1)) * m > 0 for j, m in enumerate(leading_minors(q))):
                print_error(f"symmetric support {result.support} is not negative definite")
        certified += 1
    check(certified > 0, f"{certified} certificates verified exactly")


def verify_rationality_and_permutation():
    """Criterion 3"""
    print("\n=== 3. Rationality and label permutation ===")

    from src.commands.orchestrator import parse_job, run_job
    from src.utils.report_tables import to_json

    q = [["-3", "1", "2/3"], ["1", "-1", "0"], ["1/2", "0", "-2"]]
    labels = ["a", "b", "c"]
    x = {"a": "1", "b": "2", "c": "-1/2"}

    def solve(perm):
        job = {"command": "solve", "payload": {
            "q": [[q[i][j] for j in perm] for i in perm], "x": x, "labels": [labels[i] for i in perm]}}
        out = run_job(parse_job(job)).payload
        return {label: (y, z) for label, y, z in zip(out["labels"], out["y"], out["z"])}

    base = solve([0, 1, 2])
    permuted = solve([2, 0, 1])
    check(all(_is_rational(v) for pair in base.values() for v in pair), "all outputs are exact rationals")
    check(to_json(base) == to_json({k: permuted[k] for k in base}), "permutation round trip is byte-identical")


def verify_theta_and_pairings():
    """Criteria 4 and 5"""
    print("\n=== 4-5. θ formula and self-intersections ===")

    from src.p1 import Admissible, C0, OneKink, degree_on_curve, pairing, zariski_decompose_p1

    decomposition = zariski_decompose_p1(OneKink(1.0, 1.0, -1.0))
    check(decomposition.theta == 0.5, "θ = 0.5 for α = e, β = 1/e")
    check(degree_on_curve(decomposition.positive, C0) == 0.0, "deg(P̄|C₀) = 0")

    start = time.time()
    divisors = [Admissible(lam) for lam in (0.25, 0.5, 1.0, 2.0)]
    for d in divisors:
        expected = 0.5 * (math.log(d.lam) + 1.0)
        if abs(pairing(d, d) - expected) > 1e-8:
            print_error(f"Admissible{{{d.lam}}} self-pairing {pairing(d, d)} ≠ {expected}")
    gap = max(abs(pairing(a, b) - pairing(b, a)) for a in divisors for b in divisors)
    elapsed = time.time() - start
    check(gap <= 2e-8, f"self-pairings match (log λ + 1)/2, symmetry gap {gap:.2e}")
    check(elapsed < 5.0, f"pairings computed in {elapsed:.2f} s")


def verify_volume():
    """Criterion 6"""
    print("\n=== 6. Volume identity and counting ===")

    from src.p1 import OneKink, volume_p1
    from src.sections.counting import hhat0_bounds, hhat0_exact
    from src.sections.space import section_space

    d = OneKink(1.0, 1.0, -1.0)
    check(volume_p1(d) == 0.5, "vol = deg(P̄²) = 0.5")

    start = time.time()
    n = 200
    bounds = hhat0_bounds(section_space(d, n))
    elapsed = time.time() - start
    ratios = (bounds.lower / (n * n / 2.0), bounds.upper / (n * n / 2.0))
    check(all(0.45 <= r <= 0.55 for r in ratios) and elapsed < 1.0,
          f"bounds/(n²/2) at n = 200: [{ratios[0]:.4f}, {ratios[1]:.4f}] in {elapsed:.3f} s")

    for n in range(1, 7):
        space = section_space(d, n)
        exact = hhat0_exact(space, jobs=4)
        b = hhat0_bounds(space)
        if not b.lower <= exact.log_count + 1e-12 <= b.upper + 2e-12:
            print_error(f"n = {n}: log-count {exact.log_count} outside [{b.lower}, {b.upper}]")
    print_success("exact counts lie inside the bounds for n ≤ 6")


def verify_sigma_and_multiplicities():
    """Criteria 7 and 8"""
    print("\n=== 7-8. σ-decomposition and asymptotic multiplicities ===")

    from src.p1 import C0, CInf, OneKink
    from src.sections.sigma import asymptotic_multiplicity, sigma_decomposition

    d = OneKink(1.0, 1.0, -1.0)
    for n in range(1, 33):
        f = sigma_decomposition(d, n, grid=[0.0]).f_c0
        if f != (n - n // 2) / n:
            print_error(f"F_{n} coefficient {f} ≠ {(n - n // 2) / n}")
    print_success("F_n = (n − ⌊n/2⌋)/n·C₀ for n ≤ 32")
    n_max = 32
    mu = asymptotic_multiplicity(d, C0, n_max).value
    check(abs(mu - 0.5) <= 1.0 / n_max, f"μ_C₀ = {mu}")

    nef = OneKink(1.0, 1.0, 1.0)
    sequences = [asymptotic_multiplicity(nef, curve, n_max).sequence for curve in (C0, CInf)]
    check(all(v == 0.0 for seq in sequences for _, v in seq), "μ_C₀ = μ_C∞ = 0 for every n ≤ 32 (nef and big)")


def verify_orthogonality():
    """Criterion 9"""
    print("\n=== 9. Asymptotic orthogonality ===")

    from src.p1 import OneKink
    from src.sections.sigma import orthogonality_probe

    start = time.time()
    report = orthogonality_probe(OneKink(1.0, 1.0, -1.0), [4, 8, 16, 32])
    elapsed = time.time() - start
    values = [round(r.value, 6) for r in report.rows]
    check(report.non_negative, f"deg(M̄_n|F_n) non-negative: {values}")
    check(report.rows[-1].value < report.rows[0].value, "value at n = 32 below value at n = 4")
    check(report.limit_ok, f"extrapolated limit {report.limit:.4f} within 0.05 of 0")
    check(elapsed < 60.0, f"probe finished in {elapsed:.1f} s")


def verify_distortion():
    """Criterion 10"""
    print("\n=== 10. Distortion laws ===")

    from src.p1 import OneKink
    from src.sections.distortion import (
        dist_growth_probe,
        log_distortion,
        log_inner_products,
        section_inner_product,
        section_log_pointwise,
    )
    from src.sections.space import random_section, section_space

    d = OneKink(1.0, 1.0, -1.0)
    rng = np.random.default_rng(3)
    space = section_space(d, 4)
    log_inner = log_inner_products(space)
    for _ in range(100):
        s = random_section(space, rng)
        log_mass = math.log(section_inner_product(s, log_inner))
        ts = rng.uniform(-8.0, 4.0, size=10)
        log_dist = log_distortion(space, log_inner, ts)
        for t, bound in zip(ts, log_dist):
            theta = float(rng.uniform(0.0, 2.0 * math.pi))
            if 2.0 * section_log_pointwise(s, space, t, theta) > bound + log_mass + 1e-9:
                print_error(f"pointwise bound fails at t = {t}, θ = {theta}")
    print_success("|s|² ≤ ⟨s,s⟩·dist at every sampled point for 100 random sections")

    bigger = section_space(OneKink(1.0, 1.5, -1.0), 4)
    grid = np.linspace(-8.0, 6.0, 57)
    u = 4 * (np.asarray(bigger.profile.green(grid)) - np.asarray(space.profile.green(grid)))
    lhs = log_distortion(space, log_inner, grid)
    rhs = u + log_distortion(bigger, log_inner_products(bigger), grid)
    check(bool(np.all(u >= 0)) and bool(np.all(lhs <= rhs + 1e-9)), "dist(V;g) ≤ exp(g′ − g)·dist(V;g′)")

    report = dist_growth_probe(d, 16)
    check(report.chain_holds, f"C(n+1)³ bound with chain inequality for n + m ≤ 16 (C = {report.constant:.4g})")


def verify_negative_part():
    """Criterion 11"""
    print("\n=== 11. Negative-part certification ===")

    from src.p1 import TwoKink, negative_part_certificate, negative_part_matrix

    d = TwoKink(0.0, 0.0, -LOG2, -LOG2)
    (a, b), (c, e) = negative_part_matrix(d).matrix
    check(max(abs(a + LOG2), abs(e + LOG2), abs(b), abs(c)) <= 1e-10, "degree matrix = diag(−log 2, −log 2)")
    cert = negative_part_certificate(d)
    check(cert.det_sign_ok and cert.symmetric_negdef,
          f"rationalized matrix certified, diagonal {[str(v) for v in cert.congruence_diagonal]}")


def verify_non_existence():
    """Criterion 12"""
    print("\n=== 12. Non-existence ===")

    from src.commands.cli import main as cli_main
    from src.errors import NoDecomposition
    from src.p1 import OneKink, zariski_decompose_p1

    try:
        zariski_decompose_p1(OneKink(1.0, -LOG2, -LOG2))
        print_error("α = β = 1/2 returned a decomposition")
    except NoDecomposition as e:
        print_success(f"NoDecomposition with witness t₀ = {e.witness.get('log_t0')}")

    job = {"command": "p1-decompose", "payload": {"family": "one-kink", "log_alpha": -LOG2, "log_beta": -LOG2}}
    path = os.path.join(project_root, ".verify_job.json")
    with open(path, "w", encoding="utf-8") as handle:
        json.dump(job, handle)
    try:
        with redirect_stdout(io.StringIO()):
            code = cli_main(["--input", path])
    finally:
        os.remove(path)
    check(code == 3, "CLI exits with code 3")


def main():
    print("=" * 60)
    print("Acceptance Verification")
    print("=" * 60)

    try:
        verify_oracle_and_certificates()
        verify_rationality_and_permutation()
        verify_theta_and_pairings()
        verify_volume()
        verify_sigma_and_multiplicities()
        verify_orthogonality()
        verify_distortion()
        verify_negative_part()
        verify_non_existence()

        print("\n" + "=" * 60)
        print("[SUCCESS] ALL ACCEPTANCE CRITERIA PASSED")
        print("=" * 60)

    except SystemExit:
        print("\n" + "=" * 60)
        print("[ERROR] ACCEPTANCE VERIFICATION FAILED")
        print("=" * 60)
        sys.exit(1)


if __name__ == "__main__":
    main()
