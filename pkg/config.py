"""
Configuration constants and defaults for superder.
"""
import os
from pathlib import Path

# Project paths
BASE_DIR = Path(__file__).parent
DATA_DIR = BASE_DIR / "data"

# Data files
CONFIG_FILE = Path(os.getenv("SUPERDER_CONFIG", DATA_DIR / "config.json"))

# Default configuration
DEFAULT_CONFIG = {
    "jordan_check": {
        "grassmann_generators": 4
    },
    "scan": {
        "parallel": True,
        "always_resolve": ["0", "1", "half"]
    },
    "catalog": {
        "default_field": "p:3",
        "default_m": 1
    },
    "report": {
        "json_indent": 2
    }
}

# Logging
LOG_FORMAT = "%(asctime)s - %(name)s - %(levelname)s - %(message)s"
LOG_LEVEL = os.getenv("LOG_LEVEL", "INFO")
