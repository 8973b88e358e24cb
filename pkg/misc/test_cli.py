"""
Test script for the command-line front end
Runs JSON jobs through cli.main and checks the emitted artifact and the exit codes
"""

import io
import json
import math
import os
import tempfile
from contextlib import redirect_stdout

from src.commands.cli import main as cli_main
from src.commands.orchestrator import COMMAND_HANDLERS, get_command
from src.errors import MalformedJob
from src.utils.report_tables import Colors, to_table

LOG2 = math.log(2.0)


def print_test(test_name):
    """Print test name"""
    print(f"\n{'='*60}")
    print(f"TEST: {test_name}")
    print(f"{'='*60}")


def print_success(message):
    """Print success message"""
    print(f"✓ {message}")


def run(job, *flags):
    """Write the job to a temp file, run the CLI on it, return (exit code, stdout)"""
    with tempfile.TemporaryDirectory() as tmp:
        path = os.path.join(tmp, "job.json")
        with open(path, "w", encoding="utf-8") as handle:
            handle.write(job if isinstance(job, str) else json.dumps(job))
        buffer = io.StringIO()
        with redirect_stdout(buffer):
            code = cli_main(["--input", path, *flags])
    return code, buffer.getvalue().strip()


def test_solve_example():
    code, out = run({"command": "solve", "payload": {"q": [["-1"]], "x": ["1"]}})
    assert code == 0
    assert out == '{"y": ["0"], "z": ["1"], "support": [0]}'


def test_solve_with_certificate_and_labels():
    job = {"command": "solve", "payload": {"q": [["-2", "1"], ["1", "-2"]], "x": {"a": "1", "b": "0"},
                                           "labels": ["a", "b"], "certificate": True}}
    code, out = run(job)
    assert code == 0
    result = json.loads(out)
    assert result["labels"] == ["a", "b"]
    assert result["certificate"]["det_sign_ok"] is True
    assert all("/" in v or v.lstrip("-").isdigit() for v in result["y"] + result["z"])


def test_solve_and_certify_round_trip():
    q = [["-2", "1", "0"], ["1", "-2", "1"], ["0", "1", "-2"]]
    labels = ["a", "b", "c"]
    solve_job = {"command": "solve", "payload": {"q": q, "x": ["3", "1", "2"], "labels": labels,
                                                 "certificate": True}}
    code, out = run(solve_job)
    assert code == 0
    solved = json.loads(out)
    assert solved["support"]

    refed = {"command": "solve", "payload": {"q": q, "x": solved["y"], "labels": labels}}
    code, again = run(refed)
    assert code == 0
    again = json.loads(again)
    assert again["y"] == solved["y"]
    assert all(v == "0" for v in again["z"])
    assert again["support"] == []

    certify_job = {"command": "certify", "payload": {"q": q, "labels": labels, "support": solved["support"]}}
    first = run(certify_job)
    assert first[0] == 0
    assert json.loads(first[1]) == solved["certificate"]
    assert run(certify_job) == first


def test_p1_decompose_theta():
    code, out = run({"command": "p1-decompose",
                     "payload": {"family": "one-kink", "log_alpha": 1, "log_beta": -1}})
    assert code == 0
    result = json.loads(out)
    assert result["theta"] == 0.5
    assert result["deg_positive_c0"] == 0.0


def test_p1_vol_scaled_admissible():
    code, out = run({"command": "p1-vol", "payload": {"family": "admissible", "lambda": 1, "scale": 2}})
    assert code == 0
    assert abs(json.loads(out)["volume"] - 2.0) < 1e-9


def test_no_decomposition_exit_code():
    code, out = run({"command": "p1-decompose",
                     "payload": {"family": "one-kink", "log_alpha": -LOG2, "log_beta": -LOG2}})
    assert code == 3
    result = json.loads(out)
    assert result["outcome"] == "no-decomposition"
    assert "witness" in result


def test_no_nef_below_exit_code():
    code, out = run({"command": "solve", "payload": {"q": [["1"]], "x": ["-1"]}})
    assert code == 3
    assert json.loads(out)["error"] == "NoNefBelow"


def test_malformed_inputs_exit_two():
    bad_jobs = [
        "{not json",
        {"command": "launch", "payload": {}},
        {"command": "solve", "payload": {"q": [[-1.5]], "x": ["1"]}},
        {"command": "solve", "payload": {"q": [["-1", "-1"], ["0", "-1"]], "x": ["1", "1"]}},
        {"command": "solve", "payload": {"x": ["1"]}},
        {"command": "p1-vol", "payload": {"family": "one-kink", "colour": 3}},
        {"command": "solve", "payload": {"q": [["-1"]], "x": ["1"]}, "tol": -1},
    ]
    for job in bad_jobs:
        code, out = run(job)
        assert code == 2, (job, out)
        assert json.loads(out)["outcome"] == "invalid-input"


def test_ambiguous_boundary_exit_four():
    job = {"command": "sections-count",
           "payload": {"family": "one-kink", "lambda": 1, "log_a": 4, "log_b": 0, "n": 1, "mode": "exact"}}
    code, out = run(job, "--tol", "0.9")
    assert code == 4
    result = json.loads(out)
    assert result["error"] == "AmbiguousBoundary"


def test_csv_header():
    job = {"command": "sections-count",
           "payload": {"family": "one-kink", "log_alpha": 1, "log_beta": -1, "n": [1, 2], "mode": "both"}}
    code, out = run(job, "--format", "csv")
    assert code == 0
    lines = out.splitlines()
    assert lines[0].startswith("n,log_count,lower,upper")
    assert len(lines) == 3


def test_table_output():
    code, out = run({"command": "p1-vol", "payload": {"family": "one-kink", "log_alpha": 1, "log_beta": -1}},
                    "--format", "table")
    assert code == 0
    assert "volume" in out


def test_table_flags_colored():
    payload = {"stable": True, "verdict": False, "constant": 1.0}
    colored = to_table("Gromov", payload, [], color=True)
    assert f"{Colors.GREEN}True{Colors.END}" in colored
    assert f"{Colors.RED}False{Colors.END}" in colored
    plain = to_table("Gromov", payload, [], color=False)
    assert "\033[" not in plain
    assert "False" in plain and "True" in plain


def test_output_is_deterministic():
    job = {"command": "sections-sigma", "payload": {"family": "one-kink", "log_alpha": 1, "log_beta": -1,
                                                    "n": 4, "grid": [-3.0, -2.0, 0.0]}}
    first = run(job)
    second = run(job, "--jobs", "2")
    assert first == second
    assert json.loads(first[1])["F"]["C0"] == 0.5


def test_unknown_command_lists_available():
    try:
        get_command("launch")
    except MalformedJob as e:
        assert all(name in e.message for name in COMMAND_HANDLERS)
    else:
        raise AssertionError("expected MalformedJob")


def main():
    print("\n" + "=" * 60)
    print("CLI TEST SUITE")
    print("=" * 60)
    tests = [
        ("1. solve example", test_solve_example),
        ("2. solve with certificate", test_solve_with_certificate_and_labels),
        ("3. solve and certify round trip", test_solve_and_certify_round_trip),
        ("4. p1-decompose θ", test_p1_decompose_theta),
        ("5. p1-vol", test_p1_vol_scaled_admissible),
        ("6. Exit 3: no decomposition", test_no_decomposition_exit_code),
        ("7. Exit 3: no nef vector", test_no_nef_below_exit_code),
        ("8. Exit 2: malformed input", test_malformed_inputs_exit_two),
        ("9. Exit 4: ambiguous boundary", test_ambiguous_boundary_exit_four),
        ("10. CSV header", test_csv_header),
        ("11. Table output", test_table_output),
        ("12. Colored flags", test_table_flags_colored),
        ("13. Determinism", test_output_is_deterministic),
        ("14. Unknown command", test_unknown_command_lists_available),
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
