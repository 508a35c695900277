"""Measures of association between two processes observed at the same locations."""

from .codispersion import (
    CodispMap,
    CodispResult,
    ComovementResult,
    codisp_binned,
    codisp_directional,
    codisp_map,
    comovement,
)
from .crossstats import StratumCovariances, moran_indices, stratum_covariances
from .estimators import Codispersion, CodispersionMap, ModifiedTTest, SpatialRankCorrelation
from .exceptions import DataFormatError, DegenerateError
from .geometry import (
    LagClasses,
    PointSample,
    build_lag_classes,
    for_each_pair,
    max_pair_distance,
)
from .mttest import (
    MTTestResult,
    effective_variance_clifford,
    effective_variance_dutilleul,
    f_cdf,
    modified_ttest,
)
from .simulate import CovSpec, bench, build_block_sigma, nonsep_cov, sample_gaussian_pair
from .tjostheim import TjostheimResult, coordinate_of_rank, rank_first, tjostheim_coef

__version__ = "0.1.0"
