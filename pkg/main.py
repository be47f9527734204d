"""
Main entry point for the superder command-line tool.
"""
import asyncio
import copy
import json
import os
import sys
from pathlib import Path
from typing import Dict, List, Optional

from dotenv import load_dotenv

# Load environment variables before config reads them
load_dotenv()

from cli.superder_cli import EXIT_USAGE, SuperderCLI  # noqa: E402
from config import CONFIG_FILE, DEFAULT_CONFIG  # noqa: E402
from utils.logger import setup_logger  # noqa: E402

# Setup logging
logger = setup_logger("")


def _merge(defaults: Dict, overrides: Dict) -> Dict:
    merged = copy.deepcopy(defaults)
    for key, value in overrides.items():
        if isinstance(value, dict) and isinstance(merged.get(key), dict):
            merged[key] = _merge(merged[key], value)
        else:
            merged[key] = value
    return merged


def load_config(path: Optional[Path] = None) -> Dict:
    """Configuration file merged over DEFAULT_CONFIG; defaults alone when the file is missing."""
    path = Path(path or os.getenv("SUPERDER_CONFIG") or CONFIG_FILE)
    if not path.exists():
        logger.warning(f"Config file {path} not found, using defaults")
        return copy.deepcopy(DEFAULT_CONFIG)
    with open(path, "r") as f:
        config = _merge(DEFAULT_CONFIG, json.load(f))
    logger.debug(f"Configuration loaded from {path}")
    return config


def main(argv: Optional[List[str]] = None) -> int:
    """Main function."""
    try:
        config = load_config()
    except (OSError, json.JSONDecodeError) as e:
        logger.error(f"Cannot read configuration: {e}")
        return EXIT_USAGE

    cli = SuperderCLI(config)
    try:
        return asyncio.run(cli.run(argv))
    except KeyboardInterrupt:
        logger.info("Stopped by user")
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
