"""
Configuration management for mirror-povm
Loads environment variables and provides configuration validation
"""

import os
from pathlib import Path
from typing import Dict, Optional

from dotenv import dotenv_values, load_dotenv

# Load environment variables from .env file
load_dotenv()


def _float_env(name: str, default: str) -> float:
    return float(os.getenv(name, default))


class Config:
    """Application configuration"""

    # Project paths
    PROJECT_ROOT = Path(__file__).parent.parent
    DATA_DIR = Path(os.getenv("MIRROR_POVM_OUTPUT_DIR", str(PROJECT_ROOT / "data")))

    # ===== Numerical Tolerances =====
    CERT_TOL = _float_env("MIRROR_POVM_CERT_TOL", "1e-10")
    TIE_TOL = _float_env("MIRROR_POVM_TIE_TOL", "1e-12")
    STATE_TOL = _float_env("MIRROR_POVM_STATE_TOL", "1e-12")
    # 0/0 corner of the ansatz parameter (θ = 0, p = 1/3)
    DEGENERACY_TOL = _float_env("MIRROR_POVM_DEGENERACY_TOL", "1e-9")

    # ===== Oracle =====
    ORACLE_RESOLUTION = _float_env("MIRROR_POVM_ORACLE_RESOLUTION", "1e-3")
    ORACLE_SLACK_FACTOR = 0.5

    # ===== Monte Carlo =====
    DEFAULT_SEED = int(os.getenv("MIRROR_POVM_SEED", "42"))

    # Environment
    ENVIRONMENT = os.getenv("ENVIRONMENT", "development")
    LOG_LEVEL = os.getenv("LOG_LEVEL", "INFO").upper()

    @classmethod
    def validate(cls) -> None:
        """Validate numeric settings"""
        errors = []

        for name, value in (
            ("MIRROR_POVM_CERT_TOL", cls.CERT_TOL),
            ("MIRROR_POVM_TIE_TOL", cls.TIE_TOL),
            ("MIRROR_POVM_STATE_TOL", cls.STATE_TOL),
            ("MIRROR_POVM_DEGENERACY_TOL", cls.DEGENERACY_TOL),
        ):
            if not 0.0 < value < 1e-3:
                errors.append(f"{name}={value} must lie in (0, 1e-3)")

        if not 0.0 < cls.ORACLE_RESOLUTION <= 0.1:
            errors.append(
                f"MIRROR_POVM_ORACLE_RESOLUTION={cls.ORACLE_RESOLUTION} must lie in (0, 0.1]"
            )

        if not 0 <= cls.DEFAULT_SEED < 2**64:
            errors.append(f"MIRROR_POVM_SEED={cls.DEFAULT_SEED} must be a 64-bit unsigned integer")

        if cls.LOG_LEVEL not in ("DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"):
            errors.append(f"Invalid LOG_LEVEL: {cls.LOG_LEVEL}")

        if errors:
            raise EnvironmentError(
                "\nConfiguration validation failed:\n\n" +
                "\n".join(f"  • {error}" for error in errors) +
                "\n\nPlease update your .env file or environment."
            )

    @classmethod
    def ensure_directories(cls) -> None:
        """Ensure the output directory exists"""
        cls.DATA_DIR.mkdir(parents=True, exist_ok=True)

    @classmethod
    def info(cls) -> dict:
        """Get configuration info (safe for logging)"""
        return {
            "environment": cls.ENVIRONMENT,
            "log_level": cls.LOG_LEVEL,
            "cert_tol": cls.CERT_TOL,
            "tie_tol": cls.TIE_TOL,
            "state_tol": cls.STATE_TOL,
            "degeneracy_tol": cls.DEGENERACY_TOL,
            "oracle_resolution": cls.ORACLE_RESOLUTION,
            "default_seed": cls.DEFAULT_SEED,
            "data_dir": str(cls.DATA_DIR),
        }


def load_key_value_file(path: Path) -> Dict[str, Optional[str]]:
    """
    Read a simple key=value file (same syntax as .env)

    Args:
        path: File to read

    Returns:
        Mapping of keys to raw string values (lower-cased keys)

    Raises:
        FileNotFoundError: If the file does not exist
    """
    path = Path(path)
    if not path.is_file():
        raise FileNotFoundError(f"Config file not found: {path}")
    return {key.strip().lower(): value for key, value in dotenv_values(path).items()}


# Validate on import (only in production)
if Config.ENVIRONMENT == "production":
    Config.validate()
