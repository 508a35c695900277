"""Input validation helpers shared by the estimators and the functional API."""

import numbers

import numpy as np
from sklearn.utils import check_array, check_consistent_length

from .exceptions import DegenerateError

STURGES = "sturges"


def check_coords(coords, min_points=1):
    """Return ``coords`` as a C-contiguous float64 ``(n, d)`` array.

    A 1-D input is read as ``n`` points on a line.
    """
    coords = np.asarray(coords)
    if coords.ndim == 1:
        coords = coords.reshape(-1, 1)
    coords = check_array(coords, dtype=np.float64, order="C",
                         ensure_min_samples=min_points,
                         input_name="coords")
    return coords


def check_values(values, name="x", min_points=1):
    values = check_array(values, dtype=np.float64, ensure_2d=False,
                         ensure_min_samples=min_points, input_name=name)
    if values.ndim != 1:
        raise ValueError(f"{name} must be one-dimensional, got shape {values.shape}")
    return np.ascontiguousarray(values)


def check_nonconstant(values, name="x"):
    if np.ptp(values) == 0.0:
        raise DegenerateError(f"constant variable: {name} has zero sample variance")


def check_paired(coords, x, y):
    check_consistent_length(coords, x, y)


def check_nclass(nclass):
    """Validate a class-count argument: a positive integer or ``"sturges"``."""
    if isinstance(nclass, str):
        if nclass.lower() != STURGES:
            raise ValueError(f"nclass must be a positive integer or {STURGES!r}, got {nclass!r}")
        return STURGES
    if isinstance(nclass, bool) or not isinstance(nclass, numbers.Integral):
        raise ValueError(f"nclass must be a positive integer or {STURGES!r}, got {nclass!r}")
    if nclass < 1:
        raise ValueError(f"nclass must be >= 1, got {nclass}")
    return int(nclass)


def check_threads(threads):
    if isinstance(threads, bool) or not isinstance(threads, numbers.Integral) or threads < 1:
        raise ValueError(f"threads must be a positive integer, got {threads!r}")
    return int(threads)
