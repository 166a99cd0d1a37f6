"""
Logging setup: bracketed level tags on stderr, stdout left for results.
"""
import logging
import sys
import os

sys.path.append(os.path.dirname(os.path.dirname(os.path.abspath(__file__))))
from config.lab_config import get_lab_config

LOG_FORMAT = "[%(levelname)s] %(name)s: %(message)s"

_configured = False


def configure_logging(level=None):
    """Install the stderr handler once; later calls only adjust the level."""
    global _configured
    root = logging.getLogger("hashlab")
    level = level or get_lab_config()["log_level"]
    if not _configured:
        handler = logging.StreamHandler(sys.stderr)
        handler.setFormatter(logging.Formatter(LOG_FORMAT))
        root.addHandler(handler)
        root.propagate = False
        _configured = True
    root.setLevel(level.upper() if isinstance(level, str) else level)
    return root


def get_logger(name):
    """Child logger under the 'hashlab' namespace."""
    configure_logging()
    return logging.getLogger(f"hashlab.{name}")
