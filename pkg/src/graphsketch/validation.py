"""Input checks shared by the estimator layer and the command line."""

from __future__ import annotations

import numbers

import numpy as np


def check_edge_pairs(X, *, allow_empty: bool = False) -> list[tuple]:
    """Coerce ``X`` to a list of ``(source, target)`` label pairs.

    Accepts an ``(n, 2)`` array (any dtype, including object) or an iterable
    of two-element sequences.  Labels are converted from numpy scalars to
    plain ``int`` / ``str`` so they hash consistently.

    Raises:
        ValueError: if ``X`` is not two labels per row, or empty when not allowed.
    """
    if isinstance(X, np.ndarray):
        if X.ndim != 2 or X.shape[1] != 2:
            raise ValueError(f"expected an array of shape (n, 2), got {X.shape}")
        rows = X.tolist()
    else:
        rows = [tuple(row) for row in X]
        if any(len(row) != 2 for row in rows):
            raise ValueError("every edge must have exactly two labels")
    if not rows and not allow_empty:
        raise ValueError("at least one edge is required")
    return [(_plain(s), _plain(t)) for s, t in rows]


def _plain(label):
    if isinstance(label, (bool, np.bool_)):
        raise TypeError("boolean vertex labels are not supported")
    if isinstance(label, numbers.Integral):
        return int(label)
    if isinstance(label, str):
        if not label:
            raise ValueError("vertex labels must be non-empty")
        return str(label)
    raise TypeError(f"vertex labels must be str or int, got {type(label).__name__}")


def check_positive_int(value, name: str, minimum: int = 1) -> int:
    if isinstance(value, (bool, np.bool_)) or not isinstance(value, numbers.Integral) or value < minimum:
        raise ValueError(f"{name} must be an integer >= {minimum}, got {value!r}")
    return int(value)


def check_unit_interval(value, name: str) -> float:
    value = float(value)
    if not 0.0 < value < 1.0:
        raise ValueError(f"{name} must lie in (0, 1), got {value}")
    return value
