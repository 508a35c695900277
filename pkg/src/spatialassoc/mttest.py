"""Modified t-test for the correlation of two spatially autocorrelated processes.

The effective sample size is ``M = 1 + 1/s2`` where ``s2`` estimates the
variance of the sample correlation.  The default estimator is the trace form

    s2 = tr(B Sx B Sy) / (tr(B Sx) tr(B Sy)),   B = I - 11'/n,

with ``Sx[i, j] = c_x[class(i, j)]`` and ``Sx[i, i] = c_x0``.  Neither the
covariance matrices nor ``B`` are formed: the traces expand into class sums
and the row sums of ``Sx`` and ``Sy``.
"""

from dataclasses import dataclass

import numpy as np
from scipy import special

from . import _kernels
from .crossstats import moran_indices, stratum_covariances
from .exceptions import DegenerateError
from .geometry import DEFAULT_NCLASS, LagClasses, build_lag_classes, run_chunks

VARIANCE_ESTIMATORS = ("dutilleul", "clifford")

_ROW_BLOCKS = 64


@dataclass(frozen=True, eq=False)
class MTTestResult:
    fstat: float
    dof: float
    ess: float
    p_value: float
    corr: float
    sigma2_r: float
    imoran: np.ndarray
    classes: LagClasses

    @property
    def upper_bounds(self):
        return self.classes.upper_bounds

    @property
    def card(self):
        return self.classes.card

    def to_dict(self):
        return {
            "fstat": self.fstat,
            "dof": self.dof,
            "ess": self.ess,
            "p_value": self.p_value,
            "corr": self.corr,
            "sigma2_r": self.sigma2_r,
            "upper_bounds": self.upper_bounds.tolist(),
            "card": self.card.tolist(),
            "imoran": self.imoran.tolist(),
        }

    def __str__(self):
        return (
            "Corrected Pearson's correlation for spatial autocorrelation\n\n"
            f"F-statistic: {self.fstat:.4f} on 1 and {self.dof:.4f} DF, "
            f"p-value: {self.p_value:.4f}\n"
            f"alternative hypothesis: true autocorrelation is not equal to 0\n"
            f"sample correlation: {self.corr:.4f}"
        )

    def summary(self):
        lines = [str(self), "", "Upper Bounds  Cardinality  Moran:x   Moran:y"]
        for ub, nk, (mx, my) in zip(self.upper_bounds, self.card, self.imoran):
            lines.append(f"{ub:12.4f}  {nk:11d}  {mx:8.4f}  {my:8.4f}")
        return "\n".join(lines)


def f_cdf(q, d1, d2):
    """Distribution function of Snedecor's F with ``d1`` and ``d2`` degrees of freedom."""
    if q <= 0:
        return 0.0
    return float(special.betainc(0.5 * d1, 0.5 * d2, d1 * q / (d1 * q + d2)))


def f_sf(q, d1, d2):
    """Upper tail ``1 - f_cdf(q, d1, d2)``, evaluated without cancellation."""
    if q <= 0:
        return 1.0
    return float(special.betainc(0.5 * d2, 0.5 * d1, d2 / (d1 * q + d2)))


def _row_sums(cov, threads):
    coords = cov.sample.coords
    n = coords.shape[0]
    rx = np.empty(n)
    ry = np.empty(n)
    edges = np.linspace(0, n, min(_ROW_BLOCKS, n) + 1).astype(np.int64)
    ub = cov.classes.upper_bounds

    def call(a, b):
        for blk in range(a, b):
            _kernels.row_sums(coords, ub, cov.c_x, cov.c_y, cov.c_x0, cov.c_y0,
                              edges[blk], edges[blk + 1], rx, ry)

    run_chunks(call, len(edges) - 1, threads)
    return rx, ry


def effective_variance_dutilleul(cov, threads=1):
    """Trace-form estimate of the variance of the sample correlation."""
    n = cov.n
    card = cov.classes.card
    rx, ry = _row_sums(cov, threads)
    tr_x = n * cov.c_x0
    tr_y = n * cov.c_y0
    tr_xy = n * cov.c_x0 * cov.c_y0 + 2.0 * np.sum(card * cov.c_x * cov.c_y)
    sum_x = rx.sum()
    sum_y = ry.sum()
    num = tr_xy - 2.0 * (rx @ ry) / n + sum_x * sum_y / n**2
    den = (tr_x - sum_x / n) * (tr_y - sum_y / n)
    with np.errstate(divide="ignore", invalid="ignore"):
        s2 = num / den
    if not (np.isfinite(s2) and s2 > 0):
        raise DegenerateError(f"nonpositive effective variance ({num!r} / {den!r})")
    return float(s2)


def effective_variance_clifford(cov, n=None):
    """``sum_k n_k c_x[k] c_y[k] / (n^2 c_x0 c_y0)``."""
    if n is None:
        n = cov.n
    s2 = np.sum(cov.classes.card * cov.c_x * cov.c_y) / (n**2 * cov.c_x0 * cov.c_y0)
    if not (np.isfinite(s2) and s2 > 0):
        raise DegenerateError(f"nonpositive effective variance ({s2!r})")
    return float(s2)


def pearson(x, y):
    xc = x - x.mean()
    yc = y - y.mean()
    return float(xc @ yc / np.sqrt((xc @ xc) * (yc @ yc)))


def modified_ttest(sample, nclass=DEFAULT_NCLASS, variance="dutilleul", threads=1):
    """Test for association between ``sample.x`` and ``sample.y``.

    Parameters
    ----------
    sample : PointSample
    nclass : int or "sturges"
        Distance classes used to estimate the spatial covariances.
    variance : {"dutilleul", "clifford"}
        Estimator of the variance of the sample correlation.
    threads : int
        Worker threads for the pair passes.

    Returns
    -------
    MTTestResult
    """
    if variance not in VARIANCE_ESTIMATORS:
        raise ValueError(f"variance must be one of {VARIANCE_ESTIMATORS}, got {variance!r}")
    corr = pearson(sample.x, sample.y)
    if abs(corr) >= 1.0:
        raise DegenerateError("degenerate correlation: |r| == 1")
    classes = build_lag_classes(sample, nclass, threads)
    cov = stratum_covariances(sample, classes, threads)
    if variance == "dutilleul":
        s2 = effective_variance_dutilleul(cov, threads)
    else:
        s2 = effective_variance_clifford(cov)
    ess = 1.0 + 1.0 / s2
    if ess <= 2.0:
        raise DegenerateError(f"insufficient effective sample size ({ess:.6g})")
    dof = ess - 2.0
    fstat = dof * corr**2 / (1.0 - corr**2)
    return MTTestResult(
        fstat=float(fstat),
        dof=float(dof),
        ess=float(ess),
        p_value=f_sf(fstat, 1.0, dof),
        corr=corr,
        sigma2_r=s2,
        imoran=moran_indices(cov),
        classes=classes,
    )
