"""
Environment variable loader utility
"""
import logging
import os
from pathlib import Path
from typing import Dict, Optional

from dotenv import load_dotenv

logger = logging.getLogger(__name__)

ENV_VARIABLES = ('EDGELIGHTER_SEED', 'EDGELIGHTER_THREADS', 'EDGELIGHTER_OUT_DIR')


def load_environment() -> Optional[Path]:
    """
    Load environment variables from .env file

    Searches for .env file in:
    1. Current directory
    2. Parent directory
    3. Project root

    Variables already set in the process environment take precedence.

    Returns:
        Path of the loaded file, or None
    """
    current_dir = Path.cwd()
    env_paths = [
        current_dir / '.env',
        current_dir.parent / '.env',
        Path(__file__).parent.parent.parent / '.env'  # Project root
    ]

    for env_path in env_paths:
        if env_path.exists():
            load_dotenv(env_path, override=False)
            logger.info(f"Loaded environment from: {env_path}")
            return env_path

    logger.debug("No .env file found. Using system environment variables.")
    return None


def environment_settings() -> Dict[str, Optional[str]]:
    """Current values of the EDGELIGHTER_* variables"""
    return {name: os.getenv(name) for name in ENV_VARIABLES}


def validate_environment() -> bool:
    """
    Check that the EDGELIGHTER_* variables that are set parse

    Returns:
        True if valid, False otherwise
    """
    valid = True
    for name in ('EDGELIGHTER_SEED', 'EDGELIGHTER_THREADS'):
        value = os.getenv(name)
        if value is None:
            continue
        try:
            parsed = int(value)
        except ValueError:
            logger.error(f"{name}={value!r} is not an integer")
            valid = False
            continue
        if name == 'EDGELIGHTER_THREADS' and parsed < 1:
            logger.error(f"{name} must be >= 1, got {parsed}")
            valid = False
    return valid
