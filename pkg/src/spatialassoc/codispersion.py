"""Codispersion coefficient: normalised cross-variogram of two processes.

For a set of location pairs ``N`` the estimate is

    sum (x_i - x_j)(y_i - y_j) / sqrt(sum (x_i - x_j)^2 * sum (y_i - y_j)^2)

with ``N`` a distance class (:func:`codisp_binned`), the pairs separated by
a given lag vector (:func:`codisp_directional`), a cell of a polar lag grid
(:func:`codisp_map`) or the time pairs ``(t + h, t)`` (:func:`comovement`).
Sets without pairs, or with a variable constant across all of their pairs,
have no defined value; they are masked in array results and ``None`` in
scalar ones.
"""

from dataclasses import dataclass

import numpy as np

from . import _kernels
from .exceptions import DegenerateError
from .geometry import (
    DEFAULT_NCLASS,
    LagClasses,
    build_lag_classes,
    max_pair_distance,
    pair_chunks,
    run_chunks,
)
from .validation import check_nonconstant, check_values


def _ratio(sxy, sxx, syy):
    sxy, sxx, syy = np.broadcast_arrays(*(np.asarray(a, dtype=np.float64) for a in (sxy, sxx, syy)))
    den = np.sqrt(sxx * syy)
    undefined = ~(den > 0)
    with np.errstate(divide="ignore", invalid="ignore"):
        val = np.where(undefined, 0.0, sxy / np.where(undefined, 1.0, den))
    return np.ma.MaskedArray(np.clip(val, -1.0, 1.0), mask=undefined)


@dataclass(frozen=True, eq=False)
class CodispResult:
    """Codispersion per distance class; undefined classes are masked."""

    coef: np.ma.MaskedArray
    classes: LagClasses

    @property
    def upper_bounds(self):
        return self.classes.upper_bounds

    @property
    def card(self):
        return self.classes.card

    def rows(self):
        """``(upper_bound, card, coef)`` triples, ``coef`` None when undefined."""
        return [
            (float(ub), int(nk), None if m else float(c))
            for ub, nk, c, m in zip(self.upper_bounds, self.card, self.coef.data,
                                    np.ma.getmaskarray(self.coef))
        ]

    def to_dict(self):
        rows = self.rows()
        return {
            "upper_bounds": [r[0] for r in rows],
            "card": [r[1] for r in rows],
            "coef": [r[2] for r in rows],
        }

    def __str__(self):
        lines = ["Codispersion coefficient", "", "Upper Bounds  Cardinality  Coefficient"]
        for ub, nk, c in self.rows():
            lines.append(f"{ub:12.4f}  {nk:11d}  {'NA' if c is None else f'{c:11.4f}'}")
        return "\n".join(lines)


def increment_sums(sample, classes, threads=1):
    """Per-class pair counts and increment sums ``(card, sxy, sxx, syy)``."""
    ub = classes.upper_bounds
    bounds = pair_chunks(sample.n)
    nch = len(bounds) - 1
    k = classes.nclass
    card = np.zeros((nch, k), dtype=np.int64)
    sxy = np.zeros((nch, k))
    sxx = np.zeros((nch, k))
    syy = np.zeros((nch, k))
    run_chunks(lambda a, b: _kernels.increments(sample.coords, sample.x, sample.y, ub,
                                                 bounds, a, b, card, sxy, sxx, syy),
               nch, threads)
    return card.sum(axis=0), sxy.sum(axis=0), sxx.sum(axis=0), syy.sum(axis=0)


def codisp_binned(sample, nclass=DEFAULT_NCLASS, threads=1):
    """Omnidirectional codispersion over equal-width distance classes."""
    classes = build_lag_classes(sample, nclass, threads)
    card, sxy, sxx, syy = increment_sums(sample, classes, threads)
    if not np.array_equal(card, classes.card):
        raise RuntimeError("pair assignment differs between passes")
    if not np.any(card > 0):
        raise DegenerateError("no pair of distinct locations")
    return CodispResult(coef=_ratio(sxy, sxx, syy), classes=classes)


def directional_sums(sample, h, tol=0.0, threads=1):
    """Number of matching ordered pairs and their ``(sxy, sxx, syy)``."""
    h = np.asarray(h, dtype=np.float64).ravel()
    if h.shape != (sample.dim,):
        raise ValueError(f"lag must have {sample.dim} components, got {h.shape[0]}")
    if not tol >= 0:
        raise ValueError(f"tol must be nonnegative, got {tol!r}")
    bounds = pair_chunks(sample.n)
    nch = len(bounds) - 1
    count = np.zeros(nch, dtype=np.int64)
    sums = np.zeros((nch, 3))
    run_chunks(lambda a, b: _kernels.directional(sample.coords, sample.x, sample.y, h,
                                                  float(tol), bounds, a, b, count, sums),
               nch, threads)
    return int(count.sum()), sums.sum(axis=0)


def codisp_directional(sample, h, tol=0.0, threads=1):
    """Codispersion at lag vector ``h``.

    Uses the ordered pairs ``(i, j)`` with ``|s_i - s_j - h| <= tol``.
    Returns None when no pair matches or the increments of a variable vanish.
    """
    count, (sxy, sxx, syy) = directional_sums(sample, h, tol, threads)
    if count == 0:
        return None
    val = _ratio(sxy, sxx, syy)
    return None if val.mask.item() else float(val)


@dataclass(frozen=True, eq=False)
class CodispMap:
    """Codispersion on a polar lag grid.

    ``values[a, r]`` belongs to the lag of length ``radii[r]`` in direction
    ``angles[a]``; cells without pairs are masked.
    """

    angles: np.ndarray
    radii: np.ndarray
    values: np.ma.MaskedArray
    npairs: np.ndarray
    tolerance: float

    def rows(self):
        """Long format ``(angle_rad, radius, value, npairs)``."""
        out = []
        mask = np.ma.getmaskarray(self.values)
        for a, theta in enumerate(self.angles):
            for r, rad in enumerate(self.radii):
                val = None if mask[a, r] else float(self.values.data[a, r])
                out.append((float(theta), float(rad), val, int(self.npairs[a, r])))
        return out

    def to_dict(self):
        mask = np.ma.getmaskarray(self.values)
        return {
            "angles": self.angles.tolist(),
            "radii": self.radii.tolist(),
            "values": [[None if m else float(v) for v, m in zip(row, mrow)]
                       for row, mrow in zip(self.values.data, mask)],
            "npairs": self.npairs.tolist(),
            "tolerance": self.tolerance,
        }


def codisp_map(sample, n_angles=36, n_radii=20, max_radius=None, tol=None, threads=1):
    """Codispersion for every lag of a polar grid in one pass over the pairs.

    Parameters
    ----------
    sample : PointSample
        Two-dimensional locations.
    n_angles : int
        Directions ``(a - 1/2) pi / n_angles``, ``a = 1..n_angles``.  A pair
        vector goes to the nearest direction.
    n_radii : int
        Lag lengths ``j * max_radius / n_radii``, ``j = 1..n_radii``.  A pair
        goes to the nearest length.
    max_radius : float, optional
        Largest lag length; defaults to the largest pair distance and may not
        exceed it.
    tol : float, optional
        A pair is kept only if its length is within ``tol`` of its cell's
        radius.  Defaults to half the radial spacing, which keeps every pair
        up to ``max_radius`` plus half a spacing.
    """
    if sample.dim != 2:
        raise ValueError(f"codispersion maps need 2-D locations, got d={sample.dim}")
    if int(n_angles) < 2 or int(n_radii) < 1:
        raise ValueError("need n_angles >= 2 and n_radii >= 1")
    n_angles, n_radii = int(n_angles), int(n_radii)
    dmax = max_pair_distance(sample, threads)
    if max_radius is None:
        max_radius = dmax
    if not 0 < max_radius <= dmax * (1 + 1e-12):
        raise ValueError(f"max_radius must lie in (0, {dmax}], got {max_radius!r}")
    step = max_radius / n_radii
    if tol is None:
        tol = 0.5 * step
    if not tol > 0:
        raise ValueError(f"tol must be positive, got {tol!r}")
    bounds = pair_chunks(sample.n)
    nch = len(bounds) - 1
    count = np.zeros((nch, n_angles, n_radii), dtype=np.int64)
    sums = np.zeros((nch, n_angles, n_radii, 3))
    run_chunks(lambda a, b: _kernels.polar_cells(sample.coords, sample.x, sample.y,
                                                  n_angles, step, n_radii, float(tol),
                                                  bounds, a, b, count, sums),
               nch, threads)
    count = count.sum(axis=0)
    sums = sums.sum(axis=0)
    values = _ratio(sums[..., 0], sums[..., 1], sums[..., 2])
    values.mask |= count == 0
    return CodispMap(
        angles=(np.arange(n_angles) + 0.5) * np.pi / n_angles,
        radii=np.arange(1, n_radii + 1) * step,
        values=values,
        npairs=count,
        tolerance=float(tol),
    )


@dataclass(frozen=True, eq=False)
class ComovementResult:
    lags: np.ndarray
    coef: np.ma.MaskedArray

    def rows(self):
        mask = np.ma.getmaskarray(self.coef)
        return [(int(h), None if m else float(c))
                for h, c, m in zip(self.lags, self.coef.data, mask)]

    def to_dict(self):
        rows = self.rows()
        return {"lags": [r[0] for r in rows], "coef": [r[1] for r in rows]}


def comovement(x, y, max_lag=None):
    """Codispersion of two time series at each integer lag ``1..max_lag``.

    The lag-``h`` value uses the pairs ``(t + h, t)``, which is the binned
    codispersion of the series placed at ``(t, 1)`` with unit-width classes.
    ``max_lag`` defaults to ``ceil(T / 2)`` (at most ``T - 2``).
    """
    x = check_values(x, "x", min_points=3)
    y = check_values(y, "y", min_points=3)
    if x.shape != y.shape:
        raise ValueError(f"series lengths differ: {x.shape[0]} != {y.shape[0]}")
    check_nonconstant(x, "x")
    check_nonconstant(y, "y")
    t = x.shape[0]
    if max_lag is None:
        max_lag = min(-(-t // 2), t - 2)
    max_lag = int(max_lag)
    if not 1 <= max_lag <= t - 2:
        raise ValueError(f"max_lag must lie in [1, {t - 2}], got {max_lag}")
    lags = np.arange(1, max_lag + 1)
    sums = np.empty((max_lag, 3))
    for idx, h in enumerate(lags):
        dx = x[h:] - x[:-h]
        dy = y[h:] - y[:-h]
        sums[idx] = dx @ dy, dx @ dx, dy @ dy
    return ComovementResult(lags=lags, coef=_ratio(sums[:, 0], sums[:, 1], sums[:, 2]))
