"""Tolerance policy.

All geometric predicates classify relative to a dimensionless tolerance.
The default (1e-10) can be overridden with the SIGNED_DEC_EPS environment
variable, read at call time so tests can adjust it per-process.
"""

import os

DEFAULT_EPS = 1e-10

# Top simplices with volume below this times (longest edge)^n are rejected
# at build time. Deliberately far below DEFAULT_EPS: build rejects only
# hopeless inputs, predicates handle near-degeneracy via classification.
DEGENERACY_FACTOR = 1e-12

_ENV_VAR = "SIGNED_DEC_EPS"


def tolerance(override=None):
    """Return the active relative tolerance.

    Explicit ``override`` wins, then the SIGNED_DEC_EPS environment
    variable, then the default.
    """
    if override is not None:
        if override < 0:
            raise ValueError("tolerance must be nonnegative")
        return float(override)
    raw = os.environ.get(_ENV_VAR)
    if raw is None:
        return DEFAULT_EPS
    try:
        value = float(raw)
    except ValueError as exc:
        raise ValueError(f"{_ENV_VAR} must be a float, got {raw!r}") from exc
    if value < 0:
        raise ValueError(f"{_ENV_VAR} must be nonnegative, got {value}")
    return value
