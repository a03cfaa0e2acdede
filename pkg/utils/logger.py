from __future__ import annotations

import sys
from pathlib import Path

from loguru import logger

_FORMAT = "{time:YYYY-MM-DD HH:mm:ss} | {level:<8} | {extra[module]} | {message}"
_CONFIGURED = False

# до configure_logging() модули всё равно могут логировать
logger.configure(extra={"module": "-"})


def configure_logging(logs_dir: Path, level: str = "WARNING", to_file: bool = False) -> None:
    """stderr всегда, файл iri.log только по LOG_TO_FILE; stdout остаётся за результатами команд."""
    global _CONFIGURED
    if _CONFIGURED:
        return
    try:
        if hasattr(sys.stderr, "reconfigure"):
            sys.stderr.reconfigure(encoding="utf-8", errors="replace")
    except Exception:
        pass

    logger.remove()
    logger.add(sys.stderr, level=level, backtrace=False, diagnose=False, format=_FORMAT)
    if to_file:
        logs_dir = Path(logs_dir)
        logs_dir.mkdir(parents=True, exist_ok=True)
        logger.add(
            logs_dir / "iri.log",
            level=level,
            rotation="10 MB",
            retention="7 days",
            encoding="utf-8",
            backtrace=False,
            diagnose=False,
            format=_FORMAT,
        )
    _CONFIGURED = True


def get_logger(module: str):
    return logger.bind(module=module)
