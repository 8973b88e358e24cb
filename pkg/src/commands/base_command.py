"""
Base Command Interface

Provides common utilities and enforces a consistent API for all job commands.
Every command declares COMMAND_INFO (name, description, payload model, default_config);
the job payload is merged over the defaults, validated, then executed.
"""

import logging
from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from typing import Dict, List, Optional

from pydantic import BaseModel, ValidationError

from src.defaults import DEFAULT_JOBS, DEFAULT_TOL
from src.errors import MalformedJob

logger = logging.getLogger(__name__)


@dataclass
class CommandResult:
    """
    What a command hands back to the CLI

    `payload` is the JSON artifact; `rows` the same result as a flat table for the
    table / CSV formats.
    """

    command: str
    payload: Dict
    rows: List[Dict] = field(default_factory=list)
    title: Optional[str] = None


@dataclass(frozen=True)
class RunContext:
    tol: float = DEFAULT_TOL
    jobs: int = DEFAULT_JOBS


class BaseCommand(ABC):
    """
    Base class for all job commands
    Defines the interface and common utilities
    """

    COMMAND_INFO: Dict = {}

    def get_command_info(self) -> Dict:
        """
        Return command metadata

        Returns:
            Dictionary with name, description, payload_model, required_fields and default_config
        """
        return self.COMMAND_INFO

    @abstractmethod
    def execute(self, payload: BaseModel, context: RunContext) -> CommandResult:
        """
        Run the command on a validated payload

        Args:
            payload: instance of COMMAND_INFO["payload_model"]
            context: tolerance and worker count for this run

        Returns:
            CommandResult
        """
        pass

    def merge_with_defaults(self, job_config: Dict, default_config: Dict) -> Dict:
        """
        Merge a job payload with the command defaults
        Payload values take precedence over defaults
        """
        merged = default_config.copy()
        merged.update(job_config)
        return merged

    def validate_config(self, config: Dict) -> Dict:
        """
        Validate a merged payload

        Returns:
            Validation result with valid flag and list of errors
        """
        info = self.get_command_info()
        errors = [f"Missing required field: {f}" for f in info.get("required_fields", []) if f not in config]
        if not errors:
            try:
                info["payload_model"].model_validate(config)
            except ValidationError as e:
                for problem in e.errors():
                    where = ".".join(str(part) for part in problem["loc"]) or "payload"
                    errors.append(f"{where}: {problem['msg']}")
        errors.extend(self.extra_checks(config) if not errors else [])
        return {"valid": len(errors) == 0, "errors": errors}

    def extra_checks(self, config: Dict) -> List[str]:
        """Command-specific range checks beyond the schema"""
        return []

    def run(self, job_config: Dict, context: RunContext) -> CommandResult:
        """
        Merge, validate and execute

        Raises:
            MalformedJob: the payload does not validate
        """
        info = self.get_command_info()
        config = self.merge_with_defaults(job_config, info.get("default_config", {}))
        validation = self.validate_config(config)
        if not validation["valid"]:
            logger.error(f"✗ Invalid payload for {info['name']}: {validation['errors']}")
            raise MalformedJob(f"Invalid payload for '{info['name']}'", errors=validation["errors"])
        payload = info["payload_model"].model_validate(config)
        logger.debug(f"{info['name']} config: {config}")
        return self.execute(payload, context)
