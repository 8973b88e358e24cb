# Errors - exception hierarchy shared by both tiers and the command line
# Main classes: ZariskiError, InputError, DomainOutcome, NumericalError, InternalError
# Used by: every package under src/; commands/cli.py maps the families to exit codes

from typing import Dict, Optional


class ZariskiError(Exception):
    """Base class. Subclasses set `exit_code` and carry structured details."""

    exit_code = 1
    kind = "error"

    def __init__(self, message: str, **details):
        super().__init__(message)
        self.message = message
        self.details = details

    def to_dict(self) -> Dict:
        payload = {"outcome": self.kind, "error": type(self).__name__, "message": self.message}
        if self.details:
            payload["details"] = self.details
        return payload


class InputError(ZariskiError, ValueError):
    """Invalid input; exit code 2"""

    exit_code = 2
    kind = "invalid-input"


class DomainOutcome(ZariskiError):
    """Mathematically meaningful negative answer; exit code 3"""

    exit_code = 3
    kind = "domain-outcome"


class NumericalError(ZariskiError):
    """Numerical accuracy could not be guaranteed; exit code 4"""

    exit_code = 4
    kind = "numerical-failure"


class InternalError(ZariskiError):
    """Hypothesis violation or solver bug"""

    exit_code = 1
    kind = "internal-error"


# ---- input errors -------------------------------------------------------

class OffDiagonalNegative(InputError):
    def __init__(self, i, j, value):
        super().__init__(
            f"Off-diagonal entry Q[{i}][{j}] = {value} is negative",
            i=i, j=j, value=str(value),
        )


class LabelMismatch(InputError):
    def __init__(self, expected: int, got: int):
        super().__init__(
            f"Dimension mismatch: expected {expected} entries, got {got}",
            expected=expected, got=got,
        )


class EmptyList(InputError):
    def __init__(self, what: str = "label list"):
        super().__init__(f"Empty {what}", what=what)


class InexactInput(InputError):
    def __init__(self, value):
        super().__init__(
            f"Floating-point value {value!r} rejected: exact rationals only (use \"p/q\" strings or integers)",
            value=repr(value),
        )


class UnsupportedFamily(InputError):
    def __init__(self, family: str, reason: str = ""):
        text = f"Unsupported divisor family: '{family}'"
        if reason:
            text += f" ({reason})"
        super().__init__(text, family=family)


class UnsupportedConfiguration(InputError):
    pass


class ZeroSection(InputError):
    def __init__(self):
        super().__init__("The zero section has no meaningful sup-norm comparison")


class BoxTooLarge(InputError):
    def __init__(self, size: int, limit: int):
        super().__init__(
            f"Candidate box has {size} elements (limit {limit})",
            size=size, limit=limit,
        )


class MalformedJob(InputError):
    pass


# ---- domain outcomes ----------------------------------------------------

class NoNefBelow(DomainOutcome):
    kind = "no-nef-below"

    def __init__(self):
        super().__init__("No nef class lies below the input vector")


class NoDecomposition(DomainOutcome):
    kind = "no-decomposition"

    def __init__(self, witness: Dict):
        super().__init__(
            "No Zariski decomposition exists: the nef classes below the divisor have no greatest element",
            witness=witness,
        )
        self.witness = witness

    def to_dict(self) -> Dict:
        return {"outcome": self.kind, "witness": self.witness}


class EmptySections(DomainOutcome):
    kind = "empty-sections"

    def __init__(self, n: int):
        super().__init__(f"No small sections at level n = {n}", n=n)


class NotComputed(DomainOutcome):
    kind = "not-computed"

    def __init__(self, reason: str, **details):
        super().__init__(f"Not computed: {reason}", reason=reason, **details)


# ---- numerical failures -------------------------------------------------

class QuadratureDivergence(NumericalError):
    def __init__(self, where: str, error_estimate: float, tol: float):
        super().__init__(
            f"Quadrature for {where} did not reach tolerance {tol:g} (error estimate {error_estimate:g})",
            where=where, error_estimate=error_estimate, tol=tol,
        )


class AmbiguousBoundary(NumericalError):
    def __init__(self, count: int, partial: Optional[Dict] = None):
        super().__init__(
            f"{count} candidate(s) have sup-norm indistinguishable from 1 at the requested tolerance",
            count=count, partial=partial or {},
        )
        self.count = count


# ---- internal -----------------------------------------------------------

class CertificateFailure(InternalError):
    pass


class NonNegativeDiagonal(InternalError):
    def __init__(self, label, value):
        super().__init__(
            f"Diagonal entry for {label!r} is {value}, expected negative",
            label=str(label), value=str(value),
        )


class SingularReduction(InternalError):
    def __init__(self, step: int, pivot):
        super().__init__(
            f"Pivot {pivot} at reduction step {step} is not negative",
            step=step, pivot=str(pivot),
        )
