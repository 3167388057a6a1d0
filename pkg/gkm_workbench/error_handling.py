"""
Error handling framework for the GKM workbench.

Every failure the workbench can signal has its own exception class below the
common :class:`WorkbenchError` base. Verification failures carry a structured
diff so the command line can print it and exit with status 1.
"""

import traceback

from .logging_utils import get_logger

logger = get_logger()


class WorkbenchError(Exception):
    """Base class for workbench exceptions."""
    pass


class InvalidParameterError(WorkbenchError):
    """Raised for an unsupported N, a non-prime modulus or a malformed shape."""
    pass


class TruncationError(WorkbenchError):
    """Raised when a series is not known far enough to answer a query."""
    pass


class SearchFailureError(WorkbenchError):
    """Raised when the automorphism search exhausts its attempts."""
    pass


class NotPositiveDefiniteError(WorkbenchError):
    """Raised when a Gram matrix fails the Cholesky test."""
    pass


class EnumerationBudgetError(WorkbenchError):
    """Raised when a short-vector enumeration would exceed its budget."""
    pass


class InadmissibleDistanceError(WorkbenchError):
    """Raised when two root representatives are at a distance no bond allows."""
    pass


class DegenerateCentreError(WorkbenchError):
    """Raised when a vertex set has no unique generalized circumcentre."""
    pass


class UnknownComponentError(WorkbenchError):
    """Raised when a diagram component is not in the catalog."""
    pass


class WindowTooSmallError(WorkbenchError):
    """Raised when a hole touches the margin of the candidate window."""
    pass


class EmbeddingError(WorkbenchError):
    """Raised for an embedding that does not realize its Cartan matrix."""
    pass


class PetersonError(WorkbenchError):
    """Raised when the Peterson recursion produces a non-integral multiplicity."""
    pass


class VerificationError(WorkbenchError):
    """Raised when an exact comparison fails.

    Attributes:
        diff (list): One dict per mismatching item.
    """

    def __init__(self, message, diff=None):
        super().__init__(message)
        self.diff = list(diff or [])


def describe_error(error):
    """Render an exception as a plain dict for reports.

    Args:
        error (Exception): The exception to describe.

    Returns:
        dict: ``type``, ``message`` and, for verification errors, ``diff``.
    """
    info = {"type": type(error).__name__, "message": str(error)}
    if isinstance(error, VerificationError):
        info["diff"] = error.diff
    return info


def safe_operation(operation_func, context, default_value=None, reraise=(), **kwargs):
    """Execute an operation, logging and absorbing any failure.

    Args:
        operation_func (callable): The function to execute.
        context (str): Description of what is being attempted.
        default_value (Any, optional): Value to return on failure.
        reraise (tuple, optional): Exception types that must propagate.
        **kwargs: Keyword arguments passed to the operation function.

    Returns:
        Any: Result of the operation, or ``default_value`` on failure.
    """
    try:
        return operation_func(**kwargs)
    except reraise:
        raise
    except WorkbenchError as e:
        logger.error(f"{context} failed", extra={"error": str(e), "error_type": type(e).__name__})
        return default_value
    except Exception as e:
        logger.error(f"Unexpected error in {context}: {e}", extra={"error_type": type(e).__name__})
        logger.debug(traceback.format_exc())
        return default_value
