"""
Command Handlers

One handler per job command. Each declares COMMAND_INFO the way strategy controllers
declare their metadata: name, description, payload model, required fields and the
default_config merged under the job payload.

Available Commands:
- solve / certify: exact Zariski decompositions and negative-part certificates
- p1-decompose / p1-degree / p1-pair / p1-vol: arithmetic divisors on P¹_ℤ
- sections-count / sections-sigma: small sections and σ-decompositions
- probe-dist / probe-gromov / probe-orth: distortion, Gromov and orthogonality experiments
"""

import logging
from typing import Dict, List

from src.commands.base_command import BaseCommand, CommandResult, RunContext
from src.commands.schemas import (
    CertifyPayload,
    CountPayload,
    DecomposePayload,
    DegreePayload,
    DistortionPayload,
    GromovPayload,
    OrthogonalityPayload,
    PairPayload,
    SigmaPayload,
    SolvePayload,
    VolumePayload,
)
from src.defaults import ENUMERATION_CAP, NEF_SAMPLE_HEIGHT
from src.errors import MalformedJob
from src.p1.decomposition import (
    RATIONAL_MAX_DENOMINATOR,
    is_big,
    negative_part_certificate,
    volume_p1,
    zariski_decompose_p1,
)
from src.p1.divisors import C0, CInf, degree_on_curve, degree_sweep
from src.p1.intersection import hodge_index_check, pairing, toric_volume
from src.sections.counting import hhat0_bounds, hhat0_exact, sn_box
from src.sections.distortion import dist_growth_probe, distortion, gromov_probe
from src.sections.sigma import asymptotic_multiplicity, orthogonality_probe, sigma_decomposition
from src.sections.space import section_space
from src.zariski_core import (
    BasisVector,
    NegativityCertificate,
    certify_negative_part,
    format_fraction,
    solve_decomposition,
    validate_system,
)

logger = logging.getLogger(__name__)


def _matrix(m) -> List[List[str]]:
    return [[format_fraction(v) for v in row] for row in m]


def certificate_payload(cert: NegativityCertificate) -> Dict:
    payload = {
        "support": list(cert.labels),
        "lower": _matrix(cert.lower),
        "upper": _matrix(cert.upper),
        "det_sign_ok": cert.det_sign_ok,
    }
    if cert.symmetric_negdef is not None:
        payload["symmetric_negdef"] = cert.symmetric_negdef
        payload["congruence"] = _matrix(cert.congruence)
        payload["congruence_diagonal"] = [format_fraction(v) for v in cert.congruence_diagonal]
    return payload


# ---- tier 1 -----------------------------------------------------------------

class SolveCommand(BaseCommand):
    COMMAND_INFO = {
        "name": "solve",
        "description": "Greatest nef vector below x for an exact Zariski system",
        "payload_model": SolvePayload,
        "required_fields": ["q", "x"],
        "default_config": {"certificate": False, "cross_check": True},
    }

    def execute(self, payload: SolvePayload, context: RunContext) -> CommandResult:
        system = validate_system(payload.q, payload.labels)
        if isinstance(payload.x, dict):
            by_name = {str(label): label for label in system.labels}
            unknown = [k for k in payload.x if k not in by_name]
            if unknown:
                raise MalformedJob(f"Unknown labels in x: {unknown}", labels=list(by_name))
            x = BasisVector.from_mapping(system.labels, {by_name[k]: v for k, v in payload.x.items()})
        else:
            x = BasisVector.from_list(system.labels, payload.x)

        result = solve_decomposition(system, x, cross_check=payload.cross_check,
                                     with_certificate=payload.certificate)
        out = {
            "y": [format_fraction(v) for v in result.positive.values()],
            "z": [format_fraction(v) for v in result.negative.values()],
            "support": list(result.support),
        }
        if payload.labels is not None:
            out["labels"] = list(system.labels)
        if result.certificate is not None:
            out["certificate"] = certificate_payload(result.certificate)
        rows = [{"label": label, "x": format_fraction(x.get(label)),
                 "y": format_fraction(result.positive.get(label)),
                 "z": format_fraction(result.negative.get(label))} for label in system.labels]
        return CommandResult("solve", out, rows, "Zariski decomposition")


class CertifyCommand(BaseCommand):
    COMMAND_INFO = {
        "name": "certify",
        "description": "Triangular certificate A·Q′·B = −I for a support, or for a two-kink negative part",
        "payload_model": CertifyPayload,
        "required_fields": [],
        "default_config": {"max_denominator": RATIONAL_MAX_DENOMINATOR},
    }

    def extra_checks(self, config: Dict) -> List[str]:
        has_matrix = config.get("q") is not None
        has_divisor = config.get("divisor") is not None
        if has_matrix == has_divisor:
            return ["give exactly one of q (with support) or divisor"]
        if has_matrix and not config.get("support"):
            return ["support is required with q"]
        return []

    def execute(self, payload: CertifyPayload, context: RunContext) -> CommandResult:
        if payload.divisor is not None:
            cert = negative_part_certificate(payload.divisor.build(), payload.max_denominator)
        else:
            system = validate_system(payload.q, payload.labels)
            support = [system.labels[system.index_of(label)] for label in payload.support]
            cert = certify_negative_part(system, support)
        out = certificate_payload(cert)
        rows = [{"row": i, "lower": list(lo), "upper": list(up)}
                for i, (lo, up) in enumerate(zip(out["lower"], out["upper"]))]
        return CommandResult("certify", out, rows, "Negative-part certificate")


# ---- tier 2: divisors -------------------------------------------------------

class DecomposeCommand(BaseCommand):
    COMMAND_INFO = {
        "name": "p1-decompose",
        "description": "Closed-form Zariski decomposition of a model divisor on P¹_ℤ",
        "payload_model": DecomposePayload,
        "required_fields": ["family"],
        "default_config": {},
    }

    def execute(self, payload: DecomposePayload, context: RunContext) -> CommandResult:
        d = payload.build()
        decomposition = zariski_decompose_p1(d)
        positive = decomposition.positive
        out = decomposition.to_payload()
        out["deg_positive_c0"] = degree_on_curve(positive, C0)
        out["deg_positive_cinf"] = degree_on_curve(positive, CInf)
        rows = [
            {"part": "positive", "c0": positive.c0, "cinf": positive.cinf,
             "deg_c0": out["deg_positive_c0"], "deg_cinf": out["deg_positive_cinf"]},
            {"part": "negative", "c0": decomposition.negative_c0, "cinf": decomposition.negative_cinf,
             "deg_c0": None, "deg_cinf": None},
        ]
        return CommandResult("p1-decompose", out, rows, f"Zariski decomposition ({d.family})")


class DegreeCommand(BaseCommand):
    COMMAND_INFO = {
        "name": "p1-degree",
        "description": "deg(D̄|C) on one horizontal curve, or a sweep over rational points up to a height",
        "payload_model": DegreePayload,
        "required_fields": ["family"],
        "default_config": {"height": NEF_SAMPLE_HEIGHT},
    }

    def execute(self, payload: DegreePayload, context: RunContext) -> CommandResult:
        d = payload.build()
        if payload.curve is not None:
            curve = payload.curve.build()
            rows = [{"curve": curve.label(), "degree": degree_on_curve(d, curve)}]
            return CommandResult("p1-degree", dict(rows[0]), rows, "Arithmetic degree")
        rows = [{"curve": label, "degree": value} for label, value in degree_sweep(d, payload.height)]
        worst = min(rows, key=lambda row: row["degree"])
        out = {"height": payload.height, "min_curve": worst["curve"], "min_degree": worst["degree"],
               "degrees": rows}
        return CommandResult("p1-degree", out, rows, f"Degree sweep (height {payload.height})")


class PairCommand(BaseCommand):
    COMMAND_INFO = {
        "name": "p1-pair",
        "description": "Arithmetic intersection pairing deg(D̄₁·D̄₂); self-pairing when second is omitted",
        "payload_model": PairPayload,
        "required_fields": ["first"],
        "default_config": {"hodge": False},
    }

    def execute(self, payload: PairPayload, context: RunContext) -> CommandResult:
        first = payload.first.build()
        second = payload.second.build() if payload.second is not None else first
        value = pairing(first, second, context.tol)
        out = {"pairing": value}
        if payload.second is not None:
            out["symmetry_gap"] = abs(value - pairing(second, first, context.tol))
        if payload.hodge:
            report = hodge_index_check(first, context.tol)
            out["hodge"] = {"vol_estimate": report.vol_estimate, "self_pairing": report.self_pairing,
                            "holds": report.holds}
        return CommandResult("p1-pair", out, [], "Intersection pairing")


class VolumeCommand(BaseCommand):
    COMMAND_INFO = {
        "name": "p1-vol",
        "description": "vol(D̄) = deg(P̄²), cross-checked against the toric volume",
        "payload_model": VolumePayload,
        "required_fields": ["family"],
        "default_config": {},
    }

    def execute(self, payload: VolumePayload, context: RunContext) -> CommandResult:
        d = payload.build()
        out = {
            "volume": volume_p1(d, context.tol),
            "toric_volume": toric_volume(d, context.tol),
            "big": is_big(d, context.tol),
        }
        return CommandResult("p1-vol", out, [], "Arithmetic volume")


# ---- tier 2: sections -------------------------------------------------------

class CountCommand(BaseCommand):
    COMMAND_INFO = {
        "name": "sections-count",
        "description": "ĥ⁰(nD̄) by exact enumeration and/or log-domain bounds for one or more levels",
        "payload_model": CountPayload,
        "required_fields": ["family", "n"],
        "default_config": {"mode": "both", "cap": ENUMERATION_CAP, "sub_box": False},
    }

    def execute(self, payload: CountPayload, context: RunContext) -> CommandResult:
        d = payload.build()
        rows = []
        for n in payload.n:
            space = section_space(d, n)
            row = {"n": n, "log_count": None, "lower": None, "upper": None}
            if payload.mode in ("exact", "both"):
                count = hhat0_exact(space, context.tol, context.jobs, payload.cap)
                row["log_count"] = count.log_count
                row["count"] = count.count
            if payload.mode in ("bounds", "both"):
                bounds = hhat0_bounds(space)
                row["lower"], row["upper"] = bounds.lower, bounds.upper
            if payload.sub_box:
                box = sn_box(space)
                row["sub_box_log_size"] = box.log_size
                row["sub_box_certified"] = box.certified
            rows.append(row)
        return CommandResult("sections-count", {"levels": rows}, rows, "Small-section counts")


class SigmaCommand(BaseCommand):
    COMMAND_INFO = {
        "name": "sections-sigma",
        "description": "σ-decomposition nD = n·M_n + n·F_n with the Green table of M_n",
        "payload_model": SigmaPayload,
        "required_fields": ["family", "n"],
        "default_config": {},
    }

    def execute(self, payload: SigmaPayload, context: RunContext) -> CommandResult:
        d = payload.build()
        result = sigma_decomposition(d, payload.n, payload.grid, context.tol)
        out = {
            "n": result.n,
            "small_exponents": list(result.small_exponents),
            "F": {"C0": result.f_c0, "CInf": result.f_cinf},
            "M": {"C0": result.m_c0, "CInf": result.m_cinf},
            "exact": result.exact,
            "green": result.rows(),
        }
        if payload.n_max is not None:
            out["multiplicity"] = {}
            for curve in (C0, CInf):
                mu = asymptotic_multiplicity(d, curve, payload.n_max)
                out["multiplicity"][mu.curve] = {"value": mu.value,
                                                 "sequence": [list(step) for step in mu.sequence]}
        return CommandResult("sections-sigma", out, result.rows(), f"σ-decomposition (n = {result.n})")


# ---- probes -----------------------------------------------------------------

class DistortionCommand(BaseCommand):
    COMMAND_INFO = {
        "name": "probe-dist",
        "description": "Distortion growth and chain inequality up to n_max; with table_n, one distortion table",
        "payload_model": DistortionPayload,
        "required_fields": ["family"],
        "default_config": {"n_max": 16},
    }

    def execute(self, payload: DistortionPayload, context: RunContext) -> CommandResult:
        d = payload.build()
        if payload.table_n is not None:
            table = distortion(section_space(d, payload.table_n), payload.sub_basis, payload.grid, context.tol)
            out = {"n": table.n, "exponents": list(table.exponents), "table": table.rows()}
            return CommandResult("probe-dist", out, table.rows(), f"Distortion (n = {table.n})")

        report = dist_growth_probe(d, payload.n_max, context.tol, payload.grid)
        out = {
            "constant": report.constant,
            "growth_constant": report.growth_constant,
            "chain_constant": report.chain_constant,
            "chain_holds": report.chain_holds,
            "growth_exponent": report.growth_exponent,
            "exponent_ok": report.exponent_ok,
            "worst_chain_gap": report.worst_chain_gap,
            "levels": report.rows(),
        }
        return CommandResult("probe-dist", out, report.rows(), f"Distortion growth (n ≤ {payload.n_max})")


class GromovCommand(BaseCommand):
    COMMAND_INFO = {
        "name": "probe-gromov",
        "description": "Monte-Carlo estimate of the Gromov constant for Σ a_i D̄_i",
        "payload_model": GromovPayload,
        "required_fields": ["divisors"],
        "default_config": {"samples": 20, "seed": 0, "a_max": 2.0},
    }

    def execute(self, payload: GromovPayload, context: RunContext) -> CommandResult:
        divisors = [spec.build() for spec in payload.divisors]
        report = gromov_probe(divisors, payload.samples, context.tol, payload.seed, payload.a_max)
        out = {
            "constant": report.constant,
            "doubled_constant": report.doubled_constant,
            "stable": report.stable,
            "samples": report.samples,
            "evaluated": report.evaluated,
            "worst_coefficients": list(report.worst_coefficients),
        }
        return CommandResult("probe-gromov", out, [], "Gromov constant")


class OrthogonalityCommand(BaseCommand):
    COMMAND_INFO = {
        "name": "probe-orth",
        "description": "deg(M̄_n|F_n) along n_list with a decay-to-zero verdict",
        "payload_model": OrthogonalityPayload,
        "required_fields": ["family"],
        "default_config": {"n_list": [4, 8, 16, 32]},
    }

    def extra_checks(self, config: Dict) -> List[str]:
        return [f"n_list entries must be positive, got {n}" for n in config.get("n_list", []) if n < 1]

    def execute(self, payload: OrthogonalityPayload, context: RunContext) -> CommandResult:
        report = orthogonality_probe(payload.build(), payload.n_list, context.tol)
        out = {
            "non_negative": report.non_negative,
            "decreasing": report.decreasing,
            "limit": report.limit,
            "limit_ok": report.limit_ok,
            "verdict": report.verdict,
            "values": report.table(),
        }
        return CommandResult("probe-orth", out, report.table(), "Asymptotic orthogonality")
