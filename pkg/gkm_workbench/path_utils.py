"""
Path utilities for the GKM workbench.

This module provides utilities for determining project paths regardless
of the current working directory.
"""

import os
from pathlib import Path


def get_project_root() -> str:
    """
    Get the project root directory.

    Returns:
        str: Absolute path to the directory containing the gkm_workbench package
    """
    package_dir = Path(__file__).parent.absolute()
    return str(package_dir.parent.absolute())


def get_base_dir() -> str:
    """
    Get the base directory for the application.

    Returns:
        str: Base directory (/app inside a container, project root otherwise)
    """
    if os.path.exists("/.dockerenv"):
        return "/app"
    return get_project_root()


def get_output_dir() -> str:
    """
    Get the directory that receives TSV/JSON artifacts.

    Returns:
        str: ``GKM_OUTPUT_DIR`` if set, else ``<base>/output``
    """
    return os.environ.get("GKM_OUTPUT_DIR", os.path.join(get_base_dir(), "output"))


def get_cache_dir() -> str:
    """
    Get the directory holding cached enumerations.

    Returns:
        str: ``GKM_CACHE_DIR`` if set, else ``<base>/cache``
    """
    return os.environ.get("GKM_CACHE_DIR", os.path.join(get_base_dir(), "cache"))


def get_logs_dir() -> str:
    """
    Get the logs directory path.

    Returns:
        str: Absolute path to the logs directory
    """
    return os.path.join(get_base_dir(), "logs")
