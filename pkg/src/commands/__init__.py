"""
Commands Package

Command-line front end: JSON job specs in, tables / CSV / JSON out.
Each command handler is responsible for:
- Declaring its payload model and default configuration
- Building divisors and systems from the payload
- Calling the library and shaping the result for output

Available Commands:
- solve, certify
- p1-decompose, p1-degree, p1-pair, p1-vol
- sections-count, sections-sigma
- probe-dist, probe-gromov, probe-orth
"""

__version__ = "1.0.0"
