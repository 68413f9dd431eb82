# modules/shared_utils.py
# This file contains utilities shared by every module of the Extremal Polynomial Suite:
# environment-backed settings, the exception hierarchy, exact integer helpers and
# the standard messages used by the command-line front end.

import logging
import math
import os
from typing import Any, Callable, Mapping, Optional

logger = logging.getLogger(__name__)

# ====================================================================================================
# SECTION 1: ENVIRONMENT-BACKED SETTINGS
# Defaults live here; a documented subset can be overridden through the environment
# (or a .env file, which app.py loads before any module is imported).
# ====================================================================================================

# 1.1 Environment variable names
ENV_THREADS = "EXTREMAL_POLY_THREADS"
ENV_LOG_LEVEL = "EXTREMAL_POLY_LOG_LEVEL"
ENV_MAX_GRID = "EXTREMAL_POLY_MAX_GRID"

# 1.2 Defaults
DEFAULT_LOG_LEVEL = "INFO"
DEFAULT_MAX_GRID = 16001
DEFAULT_LP_GRID = 1001

# Relative slack applied on verdict boundaries.
VERDICT_SLACK = 1e-12


def get_setting(name: str, default: Any, cast: Callable[[str], Any] = str) -> Any:
    """
    Reads a setting from the environment, falling back to a default.

    Args:
        name (str): Environment variable name.
        default (Any): Value returned when the variable is unset or unparsable.
        cast (Callable): Converter applied to the raw string.

    Returns:
        Any: The converted value or the default.
    """
    raw = os.getenv(name)
    if raw is None or not raw.strip():
        return default
    try:
        return cast(raw.strip())
    except (TypeError, ValueError):
        logger.warning(f"Ignoring unparsable value {raw!r} for {name}; using {default!r}.")
        return default


def thread_count() -> int:
    """Worker count for sweeps, capped by EXTREMAL_POLY_THREADS."""
    requested = get_setting(ENV_THREADS, os.cpu_count() or 1, int)
    return max(1, int(requested))


def max_lp_grid() -> int:
    """Largest LP grid the oracle may refine to, from EXTREMAL_POLY_MAX_GRID but never below the default grid."""
    return max(DEFAULT_LP_GRID, int(get_setting(ENV_MAX_GRID, DEFAULT_MAX_GRID, int)))


# ====================================================================================================
# SECTION 2: EXCEPTION HIERARCHY
# Library code raises these; only the CLI dispatcher catches them and maps them to exit codes.
# ====================================================================================================

class ExtremalPolyError(Exception):
    """Base class for every error raised by the suite."""


class ParameterRangeError(ExtremalPolyError, ValueError):
    """An (n, k, sigma, theta, x) argument lies outside the supported range."""


class ConvergenceError(ExtremalPolyError, ArithmeticError):
    """
    A Newton iteration, bracketed search or LP solve failed to converge.

    Attributes:
        residual (float): Last residual norm seen by the solver.
        iterations (int): Iterations spent before giving up.
    """

    def __init__(self, message: str, residual: float = math.nan, iterations: int = 0):
        super().__init__(f"{message} (residual={residual:.3e}, iterations={iterations})")
        self.residual = residual
        self.iterations = iterations


class WitnessError(ExtremalPolyError):
    """A half-line witness failed its endpoint-maximum precondition."""

    def __init__(self, message: str, diagnostics: Optional[Mapping[str, Any]] = None):
        super().__init__(message)
        self.diagnostics = dict(diagnostics or {})


# ====================================================================================================
# SECTION 3: COMMON NUMERIC HELPERS
# Small exact-integer helpers used across modules.
# ====================================================================================================

def sigma_n(n: int) -> int:
    """
    Exact value of the n-th derivative of T_n, sigma_n = 2^(n-1) * n!.

    Args:
        n (int): Degree, n >= 1.

    Returns:
        int: sigma_n as an arbitrary-precision integer.
    """
    if n < 1:
        raise ParameterRangeError(f"sigma_n needs n >= 1, got {n}.")
    return 2 ** (n - 1) * math.factorial(n)


def require(condition: bool, message: str) -> None:
    """Raises ParameterRangeError with `message` unless `condition` holds."""
    if not condition:
        raise ParameterRangeError(message)


def leq_with_slack(lhs: float, rhs: float, slack: float = VERDICT_SLACK) -> bool:
    """lhs <= rhs up to a relative slack on the larger magnitude."""
    return lhs <= rhs + slack * max(1.0, abs(lhs), abs(rhs))


def truncate_2dp(value: float) -> str:
    """Two-decimal string truncated toward zero, the convention of the printed tables."""
    truncated = math.floor(abs(value) * 100 + 1e-9) / 100
    return f"{math.copysign(truncated, value):.2f}"


# ====================================================================================================
# SECTION 4: STANDARD MESSAGES
# ====================================================================================================

MSG_VERDICT_FAILED = "At least one verdict in this run was falsified."
MSG_NUMERIC_FAILURE = "A numerical routine failed; see the log for diagnostics."
MSG_INCONCLUSIVE = "At least one endpoint-maximum certificate was inconclusive."
MSG_USAGE = "Invalid arguments; run with --help for usage."

logger.debug("Shared utilities loaded.")
