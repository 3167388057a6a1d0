"""
Structured logging system for the GKM workbench.

The console gets coloured one-line records routed through ``tqdm.write`` so
they do not tear progress bars apart; the optional log file receives one JSON
object per record. Context passed with ``extra=`` (``N``, counts, timings) is
kept on both, with exact rationals rendered as ``"p/q"``.
"""

import json
import logging
import os
import time
import traceback
from datetime import datetime, timezone
from fractions import Fraction

from tqdm import tqdm

LOGGER_NAME = "gkm_workbench"

# LogRecord attributes that are never treated as context fields
_RESERVED = set(vars(logging.LogRecord("", 0, "", 0, "", (), None))) | {"asctime", "message", "taskName"}


def _plain(value):
    """JSON-friendly form of a context value."""
    if isinstance(value, Fraction):
        return str(value.numerator) if value.denominator == 1 else f"{value.numerator}/{value.denominator}"
    if isinstance(value, dict):
        return {str(k): _plain(v) for k, v in value.items()}
    if isinstance(value, (list, tuple, set, frozenset)):
        return [_plain(v) for v in value]
    if hasattr(value, "item") and not isinstance(value, (str, bytes)):
        return value.item()
    return value


def _context(record):
    return {k: _plain(v) for k, v in record.__dict__.items() if not k.startswith("_") and k not in _RESERVED}


class StructuredLogFormatter(logging.Formatter):
    """One JSON object per record, with the seconds elapsed since logging was set up."""

    def format(self, record):
        entry = {
            "timestamp": datetime.now(timezone.utc).isoformat(),
            "elapsed": round(record.created - _started_wall, 3),
            "level": record.levelname,
            "message": record.getMessage(),
            "module": record.module,
            "function": record.funcName,
            "line": record.lineno,
        }
        if record.exc_info:
            entry["exception"] = {
                "type": record.exc_info[0].__name__,
                "message": str(record.exc_info[1]),
                "traceback": self.formatException(record.exc_info),
            }
        entry.update(_context(record))
        return json.dumps(entry, default=str)


class ConsoleFormatter(logging.Formatter):
    """``[LEVEL] message [k=v, ...] (module:line)`` with ANSI colours."""

    COLORS = {
        "DEBUG": "\033[94m",
        "INFO": "\033[92m",
        "WARNING": "\033[93m",
        "ERROR": "\033[91m",
        "CRITICAL": "\033[91m\033[1m",
    }
    RESET = "\033[0m"
    MAX_VALUE = 50

    def _short(self, value):
        text = json.dumps(value, ensure_ascii=False, default=str) if isinstance(value, (dict, list)) else str(value)
        return text if len(text) <= self.MAX_VALUE else text[:self.MAX_VALUE - 3] + "..."

    def format(self, record):
        color = self.COLORS.get(record.levelname, self.RESET)
        line = f"{color}[{record.levelname}]{self.RESET} {record.getMessage()}"
        fields = [f"{k}={self._short(v)}" for k, v in _context(record).items()]
        if fields:
            line += f" [{', '.join(fields)}]"
        line += f" ({record.module}:{record.lineno})"
        if record.exc_info:
            line += f"\n{color}Exception:{self.RESET} {record.exc_info[0].__name__}: {record.exc_info[1]}"
            line += "\n" + "".join(traceback.format_exception(*record.exc_info))
        return line


class TqdmConsoleHandler(logging.StreamHandler):
    """Console handler that prints above any active progress bar."""

    def emit(self, record):
        try:
            tqdm.write(self.format(record), file=self.stream)
            self.flush()
        except Exception:
            self.handleError(record)


def setup_logging(log_file=None, log_level=logging.INFO, console_level=None):
    """Set up the ``gkm_workbench`` logger.

    Args:
        log_file (str, optional): Path to the JSON-line log file. If None, file logging is disabled.
        log_level (int, optional): Level for the file handler. Defaults to INFO.
        console_level (int, optional): Level for the console handler; defaults to ``log_level``.

    Returns:
        logging.Logger: Configured logger instance.
    """
    global _started_wall
    _started_wall = time.time()
    if console_level is None:
        console_level = log_level

    lg = logging.getLogger(LOGGER_NAME)
    lg.setLevel(min(log_level, console_level))
    lg.propagate = False
    for handler in list(lg.handlers):
        lg.removeHandler(handler)
        handler.close()

    console = TqdmConsoleHandler()
    console.setLevel(console_level)
    console.setFormatter(ConsoleFormatter())
    lg.addHandler(console)

    if log_file:
        os.makedirs(os.path.dirname(log_file) or ".", exist_ok=True)
        file_handler = logging.FileHandler(log_file, encoding="utf-8")
        file_handler.setLevel(log_level)
        file_handler.setFormatter(StructuredLogFormatter())
        lg.addHandler(file_handler)

    return lg


_started_wall = time.time()
setup_logging()


def get_logger():
    """The shared workbench logger.

    Every module holds the same ``gkm_workbench`` logger, so
    :func:`configure_logger` also reconfigures loggers fetched earlier.
    """
    return logging.getLogger(LOGGER_NAME)


def configure_logger(log_file=None, log_level=logging.INFO, console_level=None):
    """Reconfigure the shared logger; see :func:`setup_logging`."""
    return setup_logging(log_file, log_level, console_level)


def progress_enabled():
    """Whether tqdm progress bars should be shown (console at INFO or below)."""
    return any(h.level <= logging.INFO for h in get_logger().handlers if isinstance(h, TqdmConsoleHandler))
