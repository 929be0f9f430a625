"""Shared config settings for the app."""
from dataclasses import dataclass, replace
import logging
import os
from pathlib import Path
from typing import Optional


TOL_ORTH = 1e-10
TOL_RANK = 1e-9
TRIALS = 32
SEED = 42
RANGE_TOL = 1e-10
STATE_TOL = 1e-12
SCHEMA_VERSION = "1"

SEED_ENV_VAR = "UEBK_SEED"


class UebkError(Exception):
    """Base class for every error raised by the uebk package."""


class SeedEnvVarConfigError(UebkError):
    """Throw this exception when UEBK_SEED is set but is not an integer."""


def get_default_seed() -> int:
    raw = os.getenv(SEED_ENV_VAR)
    if raw is None or raw.strip() == "":
        return SEED
    try:
        return int(raw)
    except ValueError:
        raise SeedEnvVarConfigError(
        f"""
        The {SEED_ENV_VAR} environment variable is set to {raw!r}, which is not an integer!

        Either unset it, or set it to the integer seed used by the randomized rank sampling:
            Under Windows you can set this from a powershell session by running:
                setx "{SEED_ENV_VAR}" "42"

            Under linux, add the following to the last line of your .bashrc or .profile file:
                export {SEED_ENV_VAR}="42"

        A --seed flag on the command line always wins over the environment.
        """)


@dataclass(frozen=True)
class VerifyConfig:
    """Tolerances and sampling settings for a verification run."""

    tol_orth: float = TOL_ORTH
    tol_rank: float = TOL_RANK
    trials: int = TRIALS
    seed: int = SEED

    @classmethod
    def from_env(
        cls,
        tol_orth: Optional[float] = None,
        tol_rank: Optional[float] = None,
        trials: Optional[int] = None,
        seed: Optional[int] = None,
    ) -> "VerifyConfig":
        config = cls(seed=get_default_seed() if seed is None else seed)
        if tol_orth is not None:
            config = replace(config, tol_orth=tol_orth)
        if tol_rank is not None:
            config = replace(config, tol_rank=tol_rank)
        if trials is not None:
            config = replace(config, trials=trials)
        return config

    def as_dict(self) -> dict:
        return {
            "tol_orth": self.tol_orth,
            "tol_rank": self.tol_rank,
            "trials": self.trials,
            "seed": self.seed,
        }


def get_logger(logger_name="uebk") -> logging.Logger:
    """Create a package logger for uebk."""
    log = logging.getLogger(logger_name)
    if log.hasHandlers():
        return log
    log.setLevel(logging.INFO)
    logFormatter = logging.Formatter(
        "%(asctime)s [%(name)s] [%(levelname)-5.5s]  %(message)s"
    )
    file_path = Path(f"log/{log.name}.log")
    file_path.parent.mkdir(parents=True, exist_ok=True)

    fileHandler = logging.FileHandler(file_path, "w")
    fileHandler.setFormatter(logFormatter)
    log.addHandler(fileHandler)
    consoleHandler = logging.StreamHandler()
    consoleHandler.setFormatter(logFormatter)
    log.addHandler(consoleHandler)
    log.propagate = False
    return log
