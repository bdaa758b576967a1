"""Process-wide comparison tolerance.

Every numeric comparison in the package that accepts ``tol=None`` falls back
to the value held here. Override it for a block of code with
:func:`use_tolerance`.
"""

from __future__ import annotations

import contextvars
from contextlib import contextmanager
from typing import Iterator, Optional

DEFAULT_TOLERANCE = 1e-9

_current: contextvars.ContextVar[float] = contextvars.ContextVar(
    "posspec_tolerance", default=DEFAULT_TOLERANCE
)


def get_tolerance() -> float:
    return _current.get()


def resolve(tol: Optional[float]) -> float:
    return _current.get() if tol is None else float(tol)


@contextmanager
def use_tolerance(value: float) -> Iterator[float]:
    if not value > 0:
        raise ValueError(f"tolerance must be positive, got {value!r}")
    token = _current.set(float(value))
    try:
        yield float(value)
    finally:
        _current.reset(token)
