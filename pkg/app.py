"""Command-line entry point for the partial-coherence toolkit."""
import sys

from src.cli.commands import main
from src.utils.config import load_settings
from src.utils.logger import setup_logger

settings = load_settings()

logger = setup_logger(log_dir=settings.log_dir, level=settings.log_level)


if __name__ == "__main__":
    sys.exit(main(settings=settings))
