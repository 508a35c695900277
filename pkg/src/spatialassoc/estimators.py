"""Estimator wrappers with the scikit-learn parameter protocol.

Each estimator takes its configuration in ``__init__`` and the data in
``fit(coords, x, y)``; fitted quantities carry a trailing underscore.  Being
:class:`~sklearn.base.BaseEstimator` subclasses they support ``get_params``,
``set_params`` and ``clone``, so they can be swept over parameter grids.
"""

import numpy as np
from sklearn.base import BaseEstimator
from sklearn.utils.validation import check_is_fitted

from .codispersion import codisp_binned, codisp_map
from .geometry import DEFAULT_NCLASS, PointSample
from .mttest import modified_ttest
from .tjostheim import tjostheim_coef


class ModifiedTTest(BaseEstimator):
    """Modified t-test of association between two autocorrelated variables.

    Parameters
    ----------
    nclass : int or "sturges", default=13
    variance : {"dutilleul", "clifford"}, default="dutilleul"
    threads : int, default=1

    Attributes
    ----------
    fstat_, dof_, ess_, p_value_, corr_, sigma2_r_ : float
    imoran_ : ndarray of shape (K, 2)
    upper_bounds_, card_ : ndarray of shape (K,)
    result_ : MTTestResult
    """

    def __init__(self, nclass=DEFAULT_NCLASS, variance="dutilleul", threads=1):
        self.nclass = nclass
        self.variance = variance
        self.threads = threads

    def fit(self, coords, x, y):
        res = modified_ttest(PointSample(coords, x, y), self.nclass, self.variance,
                             self.threads)
        self.result_ = res
        self.fstat_ = res.fstat
        self.dof_ = res.dof
        self.ess_ = res.ess
        self.p_value_ = res.p_value
        self.corr_ = res.corr
        self.sigma2_r_ = res.sigma2_r
        self.imoran_ = res.imoran
        self.upper_bounds_ = res.upper_bounds
        self.card_ = res.card
        return self

    def summary(self):
        check_is_fitted(self)
        return self.result_.summary()


class SpatialRankCorrelation(BaseEstimator):
    """Tjostheim's coefficient; ``coef_`` and ``variance_`` after fitting."""

    def fit(self, coords, x, y):
        res = tjostheim_coef(PointSample(coords, x, y))
        self.coef_ = res.coef
        self.variance_ = res.variance
        return self


class Codispersion(BaseEstimator):
    """Binned omnidirectional codispersion coefficient.

    Parameters
    ----------
    nclass : int or "sturges", default=13
    threads : int, default=1

    Attributes
    ----------
    coef_ : masked array of shape (K,)
        Undefined classes are masked.
    upper_bounds_, card_ : ndarray of shape (K,)
    """

    def __init__(self, nclass=DEFAULT_NCLASS, threads=1):
        self.nclass = nclass
        self.threads = threads

    def fit(self, coords, x, y):
        res = codisp_binned(PointSample(coords, x, y), self.nclass, self.threads)
        self.result_ = res
        self.coef_ = res.coef
        self.upper_bounds_ = res.upper_bounds
        self.card_ = res.card
        return self

    def transform(self, lags):
        """Codispersion at the given distances (value of the class holding each)."""
        check_is_fitted(self)
        lags = np.asarray(lags, dtype=np.float64)
        if np.any(lags <= 0) or np.any(lags > self.upper_bounds_[-1]):
            raise ValueError("lags must lie in (0, max_dist]")
        idx = np.searchsorted(self.upper_bounds_, lags, side="left")
        return self.coef_[idx]


class CodispersionMap(BaseEstimator):
    """Codispersion over a polar lag grid; see :func:`codisp_map`."""

    def __init__(self, n_angles=36, n_radii=20, max_radius=None, tol=None, threads=1):
        self.n_angles = n_angles
        self.n_radii = n_radii
        self.max_radius = max_radius
        self.tol = tol
        self.threads = threads

    def fit(self, coords, x, y):
        res = codisp_map(PointSample(coords, x, y), self.n_angles, self.n_radii,
                         self.max_radius, self.tol, self.threads)
        self.result_ = res
        self.angles_ = res.angles
        self.radii_ = res.radii
        self.values_ = res.values
        self.npairs_ = res.npairs
        return self
