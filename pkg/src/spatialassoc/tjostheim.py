"""Tjostheim's rank-based coefficient of spatial association.

Each variable is ranked and the (centred) location holding rank ``i`` is
recorded for every ``i``.  The coefficient is the cosine between the two
resulting location sequences, treating each sequence as one long vector of
both coordinates.
"""

from dataclasses import dataclass

import numpy as np

from .exceptions import DegenerateError


@dataclass(frozen=True)
class TjostheimResult:
    coef: float
    variance: float

    def to_dict(self):
        return {"coef": self.coef, "variance": self.variance}

    def __str__(self):
        return f"{self.coef:.4f}\nattr(,\"variance\")\n{self.variance:.4f}"


def rank_first(values):
    """Ranks ``1..n``; tied values are ranked in order of appearance."""
    values = np.asarray(values)
    order = np.argsort(values, kind="stable")
    ranks = np.empty(len(values), dtype=np.int64)
    ranks[order] = np.arange(1, len(values) + 1)
    return ranks


def coordinate_of_rank(sample, ranks):
    """First and second coordinate of the observation holding each rank.

    Returns arrays ``F, G`` where ``F[i - 1]`` is the first coordinate of the
    location whose rank is ``i``.  ``sample`` may be a :class:`PointSample`
    or an ``(n, 2)`` coordinate array.
    """
    coords = getattr(sample, "coords", sample)
    coords = np.asarray(coords, dtype=np.float64)
    ranks = np.asarray(ranks)
    n = coords.shape[0]
    if ranks.shape != (n,) or not np.array_equal(np.sort(ranks), np.arange(1, n + 1)):
        raise ValueError("ranks must be a permutation of 1..n")
    holder = np.empty(n, dtype=np.int64)
    holder[ranks - 1] = np.arange(n)
    return coords[holder, 0], coords[holder, 1]


def _centered_coords(sample):
    coords = sample.coords
    if coords.shape[1] != 2:
        raise ValueError(f"Tjostheim's coefficient needs 2-D locations, got d={coords.shape[1]}")
    if np.any(np.ptp(coords, axis=0) == 0.0):
        raise DegenerateError("degenerate coordinates: a coordinate column is constant")
    return coords - coords.mean(axis=0)


def null_variance(coords):
    """Variance of the coefficient when both variables are independent noise.

    ``coords`` must already be centred.
    """
    n = coords.shape[0]
    s11 = coords[:, 0] @ coords[:, 0]
    s22 = coords[:, 1] @ coords[:, 1]
    s12 = coords[:, 0] @ coords[:, 1]
    return float((s11**2 + 2.0 * s12**2 + s22**2) / ((n - 1) * (s11 + s22) ** 2))


def tjostheim_coef(sample):
    """Tjostheim's coefficient ``A`` and its variance under independence."""
    centred = _centered_coords(sample)
    fx, gx = coordinate_of_rank(centred, rank_first(sample.x))
    fy, gy = coordinate_of_rank(centred, rank_first(sample.y))
    num = fx @ fy + gx @ gy
    den = np.sqrt((fx @ fx + gx @ gx) * (fy @ fy + gy @ gy))
    return TjostheimResult(coef=float(num / den), variance=null_variance(centred))
