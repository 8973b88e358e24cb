#!/usr/bin/env python3
# Run with: python -m src.commands.cli --input job.json [--tol X] [--format table|json|csv] [--jobs N]
#
# Exit codes: 0 success, 2 invalid input, 3 domain outcome (payload explains),
#             4 numerical tolerance not met, 1 internal error

import argparse
import json
import logging
import os
import sys
from typing import List, Optional

from src.commands.orchestrator import parse_job, run_job
from src.defaults import DEFAULT_JOBS
from src.errors import MalformedJob, ZariskiError
from src.utils.report_tables import render, to_json

logger = logging.getLogger(__name__)


def configure_logging():
    log_level = getattr(logging, os.getenv('PYTHON_LOG_LEVEL', 'INFO').upper(), logging.INFO)
    logging.basicConfig(level=log_level, stream=sys.stderr,
                        format="%(levelname)s %(name)s: %(message)s")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="zariski",
        description="Zariski decompositions, arithmetic divisors on P¹_ℤ and small-section experiments",
    )
    parser.add_argument("--input", "-i", default=None, help="job file (JSON); stdin when omitted or '-'")
    parser.add_argument("--tol", type=float, default=None, help="numerical tolerance, overrides the job's tol")
    parser.add_argument("--format", "-f", dest="fmt", choices=["table", "json", "csv"], default=None,
                        help="output format (default: the job's output field, else json)")
    parser.add_argument("--jobs", "-j", type=int, default=DEFAULT_JOBS, help="worker threads for enumeration")
    return parser


def load_job(path: Optional[str]):
    """
    Read and decode the job document

    Raises:
        MalformedJob: unreadable file or invalid JSON
    """
    try:
        if path is None or path == "-":
            text = sys.stdin.read()
        else:
            with open(path, encoding="utf-8") as handle:
                text = handle.read()
    except OSError as e:
        raise MalformedJob(f"Cannot read job file '{path}': {e}", path=path)
    try:
        return json.loads(text)
    except json.JSONDecodeError as e:
        raise MalformedJob(f"Job is not valid JSON: {e}")


def main(argv: Optional[List[str]] = None) -> int:
    configure_logging()
    args = build_parser().parse_args(argv)

    try:
        if args.tol is not None and not args.tol > 0:
            raise MalformedJob(f"--tol must be positive, got {args.tol}")
        if args.jobs < 1:
            raise MalformedJob(f"--jobs must be at least 1, got {args.jobs}")
        job = parse_job(load_job(args.input), tol=args.tol)
        result = run_job(job, jobs=args.jobs)
    except ZariskiError as e:
        if e.exit_code in (2, 1):
            logger.error(f"✗ {type(e).__name__}: {e.message}")
        else:
            logger.warning(f"✗ {type(e).__name__}: {e.message}")
        print(to_json(e.to_dict()))
        return e.exit_code

    fmt = args.fmt or job.output or "json"
    print(render(result, fmt, color=fmt == "table" and sys.stdout.isatty()))
    return 0


if __name__ == "__main__":
    sys.exit(main())
