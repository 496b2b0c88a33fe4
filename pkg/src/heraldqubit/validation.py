"""Input validation helpers used by the library, the estimators and the CLI."""

import math
import numbers

import numpy as np

from .exceptions import InvalidArgumentError, InvalidDimensionError

OUTCOMES = ("yn", "ny")
MODES = ("analytic", "numeric", "both")


def check_eta(eta):
    """Return ``eta`` as a float, raising if it is not a valid efficiency."""
    try:
        value = float(eta)
    except (TypeError, ValueError):
        raise InvalidArgumentError(f"eta must be a real number, got {eta!r}") from None
    if not 0.0 <= value <= 1.0 or math.isnan(value):
        raise InvalidArgumentError(f"eta must lie in [0, 1], got {value}")
    return value


def check_cutoff(cutoff, minimum=2):
    if isinstance(cutoff, bool) or not isinstance(cutoff, numbers.Integral):
        raise InvalidDimensionError(f"cutoff must be an integer, got {cutoff!r}")
    if cutoff < minimum:
        raise InvalidDimensionError(f"cutoff must be >= {minimum}, got {cutoff}")
    return int(cutoff)


def check_cutoff_spec(cutoff):
    """Accept ``"auto"`` or an integer cutoff (as int or numeric string)."""
    if isinstance(cutoff, str):
        if cutoff == "auto":
            return "auto"
        try:
            cutoff = int(cutoff)
        except ValueError:
            raise InvalidDimensionError(
                f"cutoff must be 'auto' or an integer, got {cutoff!r}"
            ) from None
    return check_cutoff(cutoff)


def check_outcome(outcome):
    value = str(outcome).lower()
    if value not in OUTCOMES:
        raise InvalidArgumentError(f"outcome must be one of {OUTCOMES}, got {outcome!r}")
    return value


def check_mode(mode):
    if mode not in MODES:
        raise InvalidArgumentError(f"mode must be one of {MODES}, got {mode!r}")
    return mode


def check_probability_floor(p_min):
    value = float(p_min)
    if not 0.0 < value < 1.0:
        raise InvalidArgumentError(f"p_min must lie in (0, 1), got {value}")
    return value


def check_parameter_grid(X):
    """Validate an ``(n, 2)`` array of ``(gamma, phi)`` rows.

    ``gamma`` may be complex; ``phi`` must be real. Returns a complex gamma
    column and a real phi column.
    """
    X = np.asarray(X)
    if X.ndim != 2 or X.shape[1] != 2:
        raise InvalidArgumentError(
            f"expected an array of shape (n_samples, 2) holding (gamma, phi), got {X.shape}"
        )
    if X.shape[0] == 0:
        raise InvalidArgumentError("parameter grid is empty")
    if not np.issubdtype(X.dtype, np.number):
        raise InvalidArgumentError(f"parameter grid must be numeric, got dtype {X.dtype}")
    gamma = X[:, 0].astype(complex)
    phi = X[:, 1]
    if np.iscomplexobj(phi):
        if np.any(phi.imag != 0):
            raise InvalidArgumentError("phi must be real")
        phi = phi.real
    phi = phi.astype(float)
    if not (np.all(np.isfinite(gamma)) and np.all(np.isfinite(phi))):
        raise InvalidArgumentError("parameter grid contains non-finite values")
    return gamma, phi
