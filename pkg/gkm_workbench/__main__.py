"""
Main entry point for the GKM workbench.

Exit status: 0 on success, 1 when a check finds a mismatch, 2 on a usage
error.
"""

import json
import logging
import os
import sys

from .error_handling import InvalidParameterError
from .logging_utils import configure_logger, get_logger
from .parse_args import parse_args
from .path_utils import get_logs_dir
from .workbench_controller import run_workbench


def main(argv=None):
    """Main entry point for the GKM workbench."""
    # argparse exits with status 2 on usage errors
    args = parse_args(argv)

    # Configure logging with environment variable or fallback
    log_file = os.environ.get("LOG_FILE") or args.get("log_file")
    if not os.path.isabs(log_file):
        log_dir = os.environ.get("LOG_DIR", get_logs_dir())
        log_file = os.path.join(log_dir, log_file)
    configure_logger(log_file=log_file, log_level=getattr(logging, args["log_level"]),
                     console_level=getattr(logging, args["log_level"]))

    try:
        results = run_workbench(args)
    except InvalidParameterError as e:
        get_logger().error(f"Invalid arguments: {e}")
        return 2

    if not results["success"]:
        print(json.dumps({"failures": results.get("failures", []), "error": results.get("error")},
                         indent=2, default=str), file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
