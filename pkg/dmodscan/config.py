from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from pathlib import Path
from typing import Optional

from .errors import ContentError

DEFAULT_POWER_CAP = 3
DEFAULT_T_DEGREE_CAP = 4
DEFAULT_DIM_CAP = 64
DEFAULT_DEGREE_BOUND = 16
DEFAULT_SEED = 0

SCHEMA_VERSION = 1


class Command(str, Enum):
    CRITICAL = "critical"
    TABLE = "table"
    EXPORT = "export"
    VERIFY = "verify"


class OutputFormat(str, Enum):
    TEXT = "text"
    JSON = "json"


@dataclass
class RunConfig:
    """Options shared by every command, assembled from the typer flags."""
    command: Command
    content: Optional[str] = None
    lambda_override: Optional[Fraction] = None
    output_format: OutputFormat = OutputFormat.TEXT
    output_path: Optional[Path] = None
    degree_bound: int = DEFAULT_DEGREE_BOUND
    seed: int = DEFAULT_SEED
    quiet: bool = False
    verbose: bool = False

    def validate(self) -> "RunConfig":
        if self.command in (Command.CRITICAL, Command.EXPORT) and not (self.content or "").strip():
            raise ContentError(f"--content is required for `{self.command.value}`")
        if self.degree_bound < 1:
            raise ContentError("--degree-bound must be positive")
        return self
