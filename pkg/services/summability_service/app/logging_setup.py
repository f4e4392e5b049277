import logging
import sys

from .config import LOG_LEVEL

LOG_FORMAT = "[summability] %(levelname)s %(name)s: %(message)s"


def configure_logging(level: str | None = None) -> None:
    """Логи идут в stderr: stdout занят JSON-отчётом."""
    logging.basicConfig(
        level=(level or LOG_LEVEL).upper(),
        format=LOG_FORMAT,
        stream=sys.stderr,
        force=True,
    )
