"""Size caps shared by the enumeration cores."""

from __future__ import annotations

import os

HARD_MAX_N = 9
MAX_SERIES_ORDER = 10
MAX_DEGREE = 10


class CapExceeded(ValueError):
    """A size parameter is above the configured cap."""


def max_n() -> int:
    """Permutation-size cap; ``QSYMLAB_MAX_N`` may only lower it."""
    raw = os.environ.get("QSYMLAB_MAX_N")
    if raw is None:
        return HARD_MAX_N
    try:
        value = int(raw)
    except ValueError:
        return HARD_MAX_N
    return max(0, min(value, HARD_MAX_N))


def check_n(n: int, cap: int | None = None, what: str = "n") -> None:
    limit = max_n() if cap is None else min(cap, max_n())
    if n < 0:
        raise ValueError(f"{what} must be nonnegative, got {n}")
    if n > limit:
        raise CapExceeded(f"{what}={n} exceeds cap {limit}")
