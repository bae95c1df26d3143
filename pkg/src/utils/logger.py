"""Logging utilities for the partial-coherence toolkit."""
import logging
import sys
from pathlib import Path
from datetime import datetime
from typing import Optional

LOGGER_NAME = "partial_coherence"


def setup_logger(
    name: str = LOGGER_NAME,
    log_dir: Optional[str] = None,
    level: str = "INFO"
) -> logging.Logger:
    """
    Set up a logger that writes to stderr and, optionally, to a file.

    stdout is left alone so the CLI can print its result document there.

    Args:
        name: Logger name
        log_dir: Directory to store log files, or None for console only
        level: Console log level name

    Returns:
        Configured logger
    """
    logger = logging.getLogger(name)
    logger.setLevel(logging.DEBUG)

    # Clear any existing handlers
    logger.handlers.clear()

    formatter = logging.Formatter(
        '%(asctime)s - %(name)s - %(levelname)s - %(message)s',
        datefmt='%Y-%m-%d %H:%M:%S'
    )

    console_handler = logging.StreamHandler(sys.stderr)
    console_handler.setLevel(getattr(logging, level.upper(), logging.INFO))
    console_handler.setFormatter(formatter)
    logger.addHandler(console_handler)

    if log_dir:
        log_path = Path(log_dir)
        log_path.mkdir(parents=True, exist_ok=True)

        timestamp = datetime.now().strftime("%Y%m%d_%H%M%S")
        log_file = log_path / f"partial_coherence_{timestamp}.log"

        file_handler = logging.FileHandler(log_file, encoding='utf-8')
        file_handler.setLevel(logging.DEBUG)
        file_handler.setFormatter(formatter)
        logger.addHandler(file_handler)

        logger.debug(f"Logging to: {log_file}")

    return logger
