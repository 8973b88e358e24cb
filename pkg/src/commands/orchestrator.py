"""
Job Orchestrator - Lightweight coordinator for job commands

This orchestrator is responsible for:
1. Mapping command names to their handlers
2. Parsing and validating job specs
3. Running the handler with the job's tolerance and worker count

What this orchestrator does NOT do:
- Does NOT know about payload fields (that's the handler's job)
- Does NOT format output (that's report_tables)
"""

import logging
from typing import Dict, Optional

from pydantic import ValidationError

from src.commands import handlers
from src.commands.base_command import BaseCommand, CommandResult, RunContext
from src.commands.schemas import JobSpec
from src.defaults import DEFAULT_JOBS
from src.errors import MalformedJob

logger = logging.getLogger(__name__)

# Command registry - maps JobSpec.command to its handler class
COMMAND_HANDLERS = {
    "solve": handlers.SolveCommand,
    "certify": handlers.CertifyCommand,
    "p1-decompose": handlers.DecomposeCommand,
    "p1-degree": handlers.DegreeCommand,
    "p1-pair": handlers.PairCommand,
    "p1-vol": handlers.VolumeCommand,
    "sections-count": handlers.CountCommand,
    "sections-sigma": handlers.SigmaCommand,
    "probe-dist": handlers.DistortionCommand,
    "probe-gromov": handlers.GromovCommand,
    "probe-orth": handlers.OrthogonalityCommand,
}


def get_command(name: str) -> BaseCommand:
    """
    Map a command name to its handler

    Raises:
        MalformedJob: unknown command
    """
    handler = COMMAND_HANDLERS.get(name)
    if handler is None:
        raise MalformedJob(
            f"Unknown command: '{name}'. Available commands: {list(COMMAND_HANDLERS.keys())}",
            command=name,
        )
    return handler()


def parse_job(raw: Dict, tol: Optional[float] = None) -> JobSpec:
    """
    Validate a decoded job document; a --tol flag overrides the job's own tol

    Raises:
        MalformedJob: schema violation
    """
    if not isinstance(raw, dict):
        raise MalformedJob(f"Job must be a JSON object, got {type(raw).__name__}")
    if tol is not None:
        raw = {**raw, "tol": tol}
    try:
        return JobSpec.model_validate(raw)
    except ValidationError as e:
        errors = [f"{'.'.join(str(p) for p in err['loc']) or 'job'}: {err['msg']}" for err in e.errors()]
        raise MalformedJob("Invalid job", errors=errors)


def run_job(job: JobSpec, jobs: int = DEFAULT_JOBS) -> CommandResult:
    """Run one parsed job and return its result"""
    logger.info(f"=== JOB: {job.command} (tol={job.tol:g}) ===")
    command = get_command(job.command)
    result = command.run(job.payload, RunContext(tol=job.tol, jobs=jobs))
    logger.info(f"✓ {job.command} finished")
    return result
