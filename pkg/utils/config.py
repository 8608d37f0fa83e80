"""
Configuration Module
Loads and validates all environment variables
"""

import os
import logging
from dotenv import load_dotenv

load_dotenv()


class Config:
    """Application configuration"""

    @staticmethod
    def _get_int(key, default=None):
        """Helper to safely fetch and convert env vars to int"""
        val = os.getenv(key)
        if val and val.strip().isdigit():
            return int(val)
        return default

    @staticmethod
    def _get_bool(key, default=False):
        val = os.getenv(key)
        if val is None or not val.strip():
            return default
        return val.strip().lower() in ("1", "true", "yes", "on")

    # Summary search path, searched after --include directories
    INCLUDE_PATH = [
        path for path in os.getenv("UNITCHECK_INCLUDE", "").split(os.pathsep)
        if path.strip()
    ]

    # Logging
    LOG_LEVEL = os.getenv("UNITCHECK_LOG_LEVEL", "WARNING").strip().upper() or "WARNING"
    LOG_FILE = os.getenv("UNITCHECK_LOG_FILE", "").strip()

    # Solver
    DUMP_MATRICES = _get_bool("UNITCHECK_DUMP_MATRICES")
    SOLVER_CHECKS = _get_bool("UNITCHECK_SOLVER_CHECKS")
    CORE_THRESHOLD = _get_int("UNITCHECK_CORE_THRESHOLD", 5)

    # Summary files
    FSMOD_VERSION = 1
    FSMOD_SUFFIX = ".fsmod"
    SOURCE_SUFFIX = ".f90"

    # Generator bounds that match the published corpus; other values only warn
    GENERATOR_FUNCTION_COUNTS = (5, 10, 15)
    GENERATOR_FUNCTION_LENGTHS = (5, 10, 15, 20)
    GENERATOR_ARGUMENT_COUNTS = (2, 4)

    @classmethod
    def validate(cls):
        """Validate environment-derived settings"""
        if not isinstance(logging.getLevelName(cls.LOG_LEVEL), int):
            raise ValueError(f"UNITCHECK_LOG_LEVEL is not a logging level: {cls.LOG_LEVEL}")
        if cls.CORE_THRESHOLD is None or cls.CORE_THRESHOLD < 0:
            raise ValueError("UNITCHECK_CORE_THRESHOLD must be a non-negative integer")
        missing = [path for path in cls.INCLUDE_PATH if not os.path.isdir(path)]
        if missing:
            logging.getLogger("Config").warning(
                f"[CONFIG] Ignoring include directories that do not exist: {', '.join(missing)}"
            )
            cls.INCLUDE_PATH = [path for path in cls.INCLUDE_PATH if path not in missing]
