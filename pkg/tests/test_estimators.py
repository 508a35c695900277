import numpy as np
import pytest
from sklearn.base import clone
from sklearn.exceptions import NotFittedError

from conftest import random_sample
from spatialassoc import (
    Codispersion,
    CodispersionMap,
    ModifiedTTest,
    SpatialRankCorrelation,
    codisp_binned,
    modified_ttest,
    tjostheim_coef,
)


class TestModifiedTTestEstimator:
    def test_params(self):
        est = ModifiedTTest(nclass=7, variance="clifford")
        assert est.get_params() == {"nclass": 7, "variance": "clifford", "threads": 1}
        assert clone(est).set_params(nclass=9).nclass == 9

    def test_fit_matches_function(self, rng):
        s = random_sample(rng, 60)
        est = ModifiedTTest(nclass=8).fit(s.coords, s.x, s.y)
        ref = modified_ttest(s, 8)
        assert est.fstat_ == ref.fstat
        assert est.dof_ == ref.dof
        np.testing.assert_array_equal(est.imoran_, ref.imoran)
        assert "F-statistic" in est.summary()

    def test_summary_unfitted(self):
        with pytest.raises(NotFittedError):
            ModifiedTTest().summary()


class TestOtherEstimators:
    def test_rank_correlation(self, rng):
        s = random_sample(rng, 40)
        est = SpatialRankCorrelation().fit(s.coords, s.x, s.y)
        assert est.coef_ == tjostheim_coef(s).coef
        assert est.get_params() == {}

    def test_codispersion_transform(self, rng):
        s = random_sample(rng, 50)
        est = Codispersion(nclass=5).fit(s.coords, s.x, s.y)
        ref = codisp_binned(s, 5)
        np.testing.assert_array_equal(est.coef_, ref.coef)
        lags = est.upper_bounds_ - 1e-9
        np.testing.assert_array_equal(est.transform(lags), ref.coef)
        with pytest.raises(ValueError):
            est.transform([0.0])

    def test_map(self, rng):
        s = random_sample(rng, 40)
        est = clone(CodispersionMap(n_angles=6, n_radii=3)).fit(s.coords, s.x, s.y)
        assert est.values_.shape == (6, 3)
        assert est.get_params()["n_angles"] == 6
