"""Solver caps.  Environment variables override the defaults at call time:

``DEONTASP_MAXINT``         upper bound of the integer domain used in grounding
``DEONTASP_GROUND_CAP``     maximum number of ground instances considered
``DEONTASP_ENUM_CAP``       maximum number of search nodes during enumeration
"""

from __future__ import annotations

import os

DEFAULT_MAXINT = 64
DEFAULT_GROUND_CAP = 200_000
DEFAULT_ENUM_CAP = 2**20


def _env_int(name: str, default: int) -> int:
    raw = os.environ.get(name)
    if raw is None or raw == "":
        return default
    try:
        value = int(raw)
    except ValueError:
        raise ValueError(f"{name} must be an integer, got {raw!r}") from None
    if value < 0:
        raise ValueError(f"{name} must be non-negative")
    return value


def maxint() -> int:
    return _env_int("DEONTASP_MAXINT", DEFAULT_MAXINT)


def ground_cap() -> int:
    return _env_int("DEONTASP_GROUND_CAP", DEFAULT_GROUND_CAP)


def enum_cap() -> int:
    return _env_int("DEONTASP_ENUM_CAP", DEFAULT_ENUM_CAP)
