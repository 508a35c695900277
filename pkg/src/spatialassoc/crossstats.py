"""Per-class covariance estimates and Moran indices."""

from dataclasses import dataclass

import numpy as np

from . import _kernels
from .geometry import LagClasses, PointSample, pair_chunks, run_chunks


@dataclass(frozen=True, eq=False)
class StratumCovariances:
    """Binned covariance estimates for both variables.

    ``c_x[k]`` is the mean of ``(x_i - xbar)(x_j - xbar)`` over the pairs of
    class ``k`` (0 for an empty class) and ``c_x0`` the variance with divisor
    ``n``; likewise for ``y``.  The sample is kept because the trace form of
    the effective variance needs a second pass over the locations.
    """

    c_x: np.ndarray
    c_y: np.ndarray
    c_x0: float
    c_y0: float
    classes: LagClasses
    sample: PointSample

    @property
    def n(self):
        return self.sample.n


def stratum_covariances(sample, classes, threads=1):
    xc = sample.x - sample.x.mean()
    yc = sample.y - sample.y.mean()
    ub = classes.upper_bounds
    bounds = pair_chunks(sample.n)
    nch = len(bounds) - 1
    card = np.zeros((nch, classes.nclass), dtype=np.int64)
    sxx = np.zeros((nch, classes.nclass))
    syy = np.zeros((nch, classes.nclass))
    run_chunks(lambda a, b: _kernels.cross_products(sample.coords, xc, yc, ub, bounds,
                                                     a, b, card, sxx, syy),
               nch, threads)
    card = card.sum(axis=0)
    if not np.array_equal(card, classes.card):
        raise ValueError("lag classes were not built from this sample")
    with np.errstate(invalid="ignore", divide="ignore"):
        c_x = np.where(card > 0, sxx.sum(axis=0) / card, 0.0)
        c_y = np.where(card > 0, syy.sum(axis=0) / card, 0.0)
    return StratumCovariances(
        c_x=c_x,
        c_y=c_y,
        c_x0=float(xc @ xc / sample.n),
        c_y0=float(yc @ yc / sample.n),
        classes=classes,
        sample=sample,
    )


def moran_indices(cov):
    """``(K, 2)`` array of per-class autocorrelations ``c[k] / c0``."""
    return np.column_stack((cov.c_x / cov.c_x0, cov.c_y / cov.c_y0))
