"""Record which public operations a computation touched.

The CLI wraps each suite in :func:`recording` so its report can list the
operations it exercised; the coverage audit compares that list against
:data:`OPERATIONS`.
"""

from __future__ import annotations

import functools
from contextlib import contextmanager
from typing import Callable, Iterator, TypeVar

F = TypeVar("F", bound=Callable)

_active: set[str] | None = None

# every public operation, as "module.name"
OPERATIONS: set[str] = set()


def operation(func: F) -> F:
    name = f"{func.__module__.rsplit('.', 1)[-1]}.{func.__name__}"
    OPERATIONS.add(name)

    @functools.wraps(func)
    def wrapper(*args, **kwargs):
        if _active is not None:
            _active.add(name)
        return func(*args, **kwargs)

    return wrapper  # type: ignore[return-value]


def touch(name: str) -> None:
    """Mark an operation as used from code that inlines it for speed."""
    if _active is not None:
        _active.add(name)


@contextmanager
def recording() -> Iterator[set[str]]:
    global _active
    previous = _active
    _active = seen = set()
    try:
        yield seen
    finally:
        _active = previous
        if previous is not None:
            previous.update(seen)
