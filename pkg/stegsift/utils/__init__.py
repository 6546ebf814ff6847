"""
Utility modules for StegSift.

Provides shared functionality:
- progress: Progress bars, verbosity control and log routing
"""

from stegsift.utils.progress import (
    VerbosityLevel,
    ProgressTracker,
    get_console,
    set_verbosity,
    is_quiet,
    is_verbose,
    print_info,
    print_success,
    print_warning,
    print_error,
    print_debug,
)

__all__ = [
    "VerbosityLevel",
    "ProgressTracker",
    "get_console",
    "set_verbosity",
    "is_quiet",
    "is_verbose",
    "print_info",
    "print_success",
    "print_warning",
    "print_error",
    "print_debug",
]
