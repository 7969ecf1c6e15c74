"""Configuration resolution: CLI args > env vars > config files > defaults."""

from __future__ import annotations

import os
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

from hfsmdec.errors import OracleLimitError

CONFIG_DIR_NAME = ".hfsmdec"
ENV_SEED = "HFSMDEC_SEED"
ENV_ORACLE_LIMIT = "HFSMDEC_ORACLE_LIMIT"
ENV_JOBS = "HFSMDEC_JOBS"
ENV_DUMP_DIR = "HFSMDEC_DUMP_DIR"

DEFAULT_SEED = 0
DEFAULT_ORACLE_LIMIT = 14
DEFAULT_JOBS = 1
DEFAULT_DUMP_DIR = "hfsmdec-counterexamples"


@dataclass(frozen=True, slots=True)
class Config:
    """Resolved application configuration."""

    seed: int = DEFAULT_SEED
    oracle_limit: int = DEFAULT_ORACLE_LIMIT
    jobs: int = DEFAULT_JOBS
    dump_dir: str = DEFAULT_DUMP_DIR

    def require_oracle_size(self, n: int) -> int:
        """Return ``n`` if brute-force enumeration over ``n`` states is allowed."""
        if n > self.oracle_limit:
            raise OracleLimitError(
                f"Brute-force oracle limited to {self.oracle_limit} states, got {n}. "
                f"Raise it with --oracle-limit, ${ENV_ORACLE_LIMIT}, "
                f"or {CONFIG_DIR_NAME}/oracle-limit."
            )
        return n


class ConfigError(Exception):
    """Raised when a configuration value is malformed."""

    exit_code = 2


def _read_config_file(name: str) -> Optional[str]:
    """Read a single-line value, checking ./.hfsmdec/ then ~/.hfsmdec/."""
    candidates = [
        Path.cwd() / CONFIG_DIR_NAME / name,
        Path.home() / CONFIG_DIR_NAME / name,
    ]
    for path in candidates:
        if path.is_file():
            content = path.read_text().strip()
            if content:
                return content
    return None


def _as_int(raw: object, source: str, *, minimum: int) -> int:
    try:
        value = int(str(raw))
    except ValueError:
        raise ConfigError(f"{source}: expected an integer, got {raw!r}") from None
    if value < minimum:
        raise ConfigError(f"{source}: must be at least {minimum}, got {value}")
    return value


def _pick(
    cli_value: Optional[object], env_name: str, file_name: str
) -> tuple[Optional[object], str]:
    if cli_value is not None:
        return cli_value, "command line"
    env_value = os.environ.get(env_name)
    if env_value:
        return env_value, f"${env_name}"
    file_value = _read_config_file(file_name)
    if file_value is not None:
        return file_value, f"{CONFIG_DIR_NAME}/{file_name}"
    return None, "default"


def resolve_config(
    *,
    cli_seed: Optional[int] = None,
    cli_oracle_limit: Optional[int] = None,
    cli_jobs: Optional[int] = None,
    cli_dump_dir: Optional[str] = None,
) -> Config:
    """Resolve configuration from CLI args > env vars > config files > defaults."""
    raw, source = _pick(cli_seed, ENV_SEED, "seed")
    seed = DEFAULT_SEED if raw is None else _as_int(raw, source, minimum=0)

    raw, source = _pick(cli_oracle_limit, ENV_ORACLE_LIMIT, "oracle-limit")
    oracle_limit = (
        DEFAULT_ORACLE_LIMIT if raw is None else _as_int(raw, source, minimum=1)
    )

    raw, source = _pick(cli_jobs, ENV_JOBS, "jobs")
    jobs = DEFAULT_JOBS if raw is None else _as_int(raw, source, minimum=1)

    raw, _ = _pick(cli_dump_dir, ENV_DUMP_DIR, "dump-dir")
    dump_dir = DEFAULT_DUMP_DIR if raw is None else str(raw)

    return Config(seed=seed, oracle_limit=oracle_limit, jobs=jobs, dump_dir=dump_dir)
