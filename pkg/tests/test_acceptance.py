"""Acceptance criteria, each printed as one PASS/FAIL line in the summary.

Run alone with ``pytest tests/test_acceptance.py -v``.
"""

import math
import time

import numpy as np
import pytest

from conftest import DATA
from oracles import (
    dense_codisp,
    dense_sigma2_clifford,
    dense_sigma2_dutilleul,
    dense_stratum_cov,
    dense_tjostheim,
)
from spatialassoc import (
    CovSpec,
    DegenerateError,
    PointSample,
    build_lag_classes,
    codisp_binned,
    codisp_map,
    comovement,
    effective_variance_clifford,
    effective_variance_dutilleul,
    modified_ttest,
    sample_gaussian_pair,
    stratum_covariances,
    tjostheim_coef,
)
from spatialassoc.io import parse_points_csv
from spatialassoc.simulate import bench, grid_coords

MURRAY = DATA / "murray.csv"


@pytest.fixture(scope="module")
def murray():
    if not MURRAY.exists():
        return None
    return parse_points_csv(MURRAY)


def _need(murray, verdict):
    if murray is None:
        verdict.check(False, f"fixture {MURRAY.name} missing; run scripts/fetch_murray.py")


# 1. Murray smelter data

@pytest.mark.criterion("1a Murray ttest F/dof/r")
def test_murray_ttest(murray, verdict):
    _need(murray, verdict)
    t0 = time.perf_counter()
    res = modified_ttest(murray)
    elapsed = time.perf_counter() - t0
    ok = (abs(res.fstat - 81.9490) <= 0.01 and abs(res.dof - 154.0617) <= 0.05
          and abs(res.corr - 0.5893) <= 0.0005 and elapsed < 5)
    verdict.check(ok, f"F={res.fstat:.4f} dof={res.dof:.4f} r={res.corr:.4f} in {elapsed:.2f}s")


@pytest.mark.criterion("1b Murray Tjostheim A/Var")
def test_murray_tjostheim(murray, verdict):
    _need(murray, verdict)
    res = tjostheim_coef(murray)
    ok = abs(res.coef + 0.1519) <= 0.0005 and abs(res.variance - 0.0035) <= 0.0002
    verdict.check(ok, f"A={res.coef:.4f} Var={res.variance:.4f}")


@pytest.mark.criterion("1c Murray codispersion maximum")
def test_murray_codisp(murray, verdict):
    _need(murray, verdict)
    res = codisp_binned(murray)
    k = int(np.ma.argmax(res.coef))
    lo = res.upper_bounds[k - 1] if k else 0.0
    width = res.upper_bounds[0]
    # the reported lag is rounded, so allow one class width either side of the class
    ok = abs(res.coef[k] - 0.5602) <= 0.005 and lo - width < 1000 <= res.upper_bounds[k] + width
    verdict.check(ok, f"max {res.coef[k]:.4f} in class ({lo:.1f}, {res.upper_bounds[k]:.1f}]")


@pytest.mark.criterion("1d Murray codispersion map near 45 degrees")
def test_murray_map(murray, verdict):
    _need(murray, verdict)
    m = codisp_map(murray, n_angles=36, n_radii=20, max_radius=min(3000.0, build_lag_classes(murray).max_dist))
    near = np.abs(m.angles - np.pi / 4) <= np.pi / 36
    best = float(m.values[near].max())
    verdict.check(abs(best - 0.7) <= 0.1, f"largest value within 5 degrees of 45: {best:.4f}")


# 2. UK lung deaths

@pytest.fixture(scope="module")
def deaths():
    return np.loadtxt(DATA / "mdeaths.txt"), np.loadtxt(DATA / "fdeaths.txt")


@pytest.mark.criterion("2 comovement per lag > 0.9576 for h=1..35")
def test_comovement_per_lag(deaths, verdict):
    x, y = deaths
    t0 = time.perf_counter()
    res = comovement(x, y, 35)
    elapsed = time.perf_counter() - t0
    low = int(res.lags[np.argmin(res.coef)])
    ok = bool(np.all(res.coef > 0.9576)) and elapsed < 0.1
    verdict.check(ok, f"min {res.coef.min():.4f} at h={low}, {elapsed * 1e3:.1f} ms")


@pytest.mark.criterion("2s comovement with 13 distance classes, first six reach 0.9576")
def test_comovement_binned(deaths, verdict):
    x, y = deaths
    t = np.arange(1.0, 73.0)
    res = codisp_binned(PointSample(np.column_stack((t, np.ones(72))), x, y), 13)
    first = res.coef[res.upper_bounds <= 35]
    ok = len(first) == 6 and round(float(first.min()), 4) == 0.9576
    verdict.check(ok, f"min over classes up to lag 35: {first.min():.6f}")


# 3. Oracle equivalence

def _oracle_sample(seed):
    rng = np.random.default_rng(seed)
    n = int(rng.integers(10, 201))
    coords = rng.uniform(0, 10, size=(n, 2))
    w = rng.normal(size=(2, 2))
    x = np.sin(coords @ w[0] / 4) + 0.3 * rng.normal(size=n)
    y = np.cos(coords @ w[1] / 4) + 0.3 * rng.normal(size=n)
    return PointSample(coords, x, y)


def _guarded_diff(streamed, dense):
    # a nonpositive estimate raises; that agrees with the oracle when it is nonpositive too
    try:
        return abs(streamed() - dense)
    except DegenerateError:
        return 0.0 if dense <= 0 else np.inf


@pytest.mark.criterion("3 streamed vs dense oracles, 50 samples, 1e-10")
def test_oracle_equivalence(verdict):
    worst = 0.0
    for seed in range(50):
        s = _oracle_sample(seed)
        cov = stratum_covariances(s, build_lag_classes(s, 13))
        cx, _ = dense_stratum_cov(s.coords, s.x, 13)
        cy, _ = dense_stratum_cov(s.coords, s.y, 13)
        rho = codisp_binned(s, 13).coef.filled(np.nan)
        ref_rho = dense_codisp(s.coords, s.x, s.y, 13)
        diffs = [
            np.abs(cov.c_x - cx).max(),
            np.abs(cov.c_y - cy).max(),
            _guarded_diff(lambda: effective_variance_dutilleul(cov), dense_sigma2_dutilleul(s.coords, s.x, s.y, 13)),
            _guarded_diff(lambda: effective_variance_clifford(cov), dense_sigma2_clifford(s.coords, s.x, s.y, 13)),
            np.nanmax(np.abs(rho - ref_rho)) if np.array_equal(np.isnan(rho), np.isnan(ref_rho)) else np.inf,
            abs(tjostheim_coef(s).coef - dense_tjostheim(s.coords, s.x, s.y)),
        ]
        worst = max(worst, max(diffs))
    verdict.check(worst <= 1e-10, f"largest absolute difference {worst:.2e}")


# 4. Invariances

def _rotation(theta):
    return np.array([[math.cos(theta), -math.sin(theta)], [math.sin(theta), math.cos(theta)]])


def _cases(n_cases=200, n=30):
    rng = np.random.default_rng(4)
    for _ in range(n_cases):
        coords = rng.uniform(0, 10, size=(n, 2))
        x = rng.normal(size=n)
        yield rng, PointSample(coords, x, 0.6 * x + rng.normal(size=n))


@pytest.mark.criterion("4 invariance suite, 200 cases per property")
def test_invariances(verdict):
    failures = {}

    def note(name, ok):
        failures.setdefault(name, 0)
        failures[name] += not ok

    for rng, s in _cases():
        cd = codisp_binned(s, 6)
        note("bound", bool(np.all(np.abs(cd.coef.compressed()) <= 1.0)))
        b, d = rng.normal(size=2) * 50
        note("translation", np.ma.allclose(codisp_binned(s.with_values(s.x + b, s.y + d), 6).coef, cd.coef, atol=1e-9))
        note("sign", np.ma.allclose(codisp_binned(s.with_values(-s.x, s.y), 6).coef, -cd.coef, atol=1e-12))

        a = tjostheim_coef(s).coef
        note("monotone", abs(tjostheim_coef(s.with_values(np.exp(s.x), s.y ** 3)).coef - a) <= 1e-12)
        note("symmetry", abs(tjostheim_coef(s.with_values(s.y, s.x)).coef - a) <= 1e-12)

        t = modified_ttest(s, 6)
        sa, sc = rng.uniform(0.1, 5, size=2) * rng.choice([-1, 1], size=2)
        u = modified_ttest(s.with_values(sa * s.x + 3, sc * s.y - 7), 6)
        note("affine F/p", math.isclose(u.fstat, t.fstat, rel_tol=1e-9)
             and math.isclose(u.p_value, t.p_value, rel_tol=1e-8, abs_tol=1e-15))

        moved = PointSample(s.coords @ _rotation(rng.uniform(0, 2 * np.pi)).T + rng.normal(size=2) * 10, s.x, s.y)
        note("rigid motion", math.isclose(modified_ttest(moved, 6).fstat, t.fstat, rel_tol=1e-9)
             and np.ma.allclose(codisp_binned(moved, 6).coef, cd.coef, atol=1e-9)
             and abs(tjostheim_coef(moved).coef - a) <= 1e-9)

    bad = {k: v for k, v in failures.items() if v}
    verdict.check(not bad, f"{len(failures)} properties, failures: {bad or 'none'}")


# 5. Calibration

@pytest.mark.criterion("5a white-noise rejection rate at 0.05 in [0.03, 0.08]")
def test_calibration_rejection(verdict):
    rng = np.random.default_rng(55)
    rejections = 0
    for _ in range(1000):
        s = PointSample(rng.uniform(size=(100, 2)), rng.normal(size=100), rng.normal(size=100))
        rejections += modified_ttest(s).p_value < 0.05
    rate = rejections / 1000
    verdict.check(0.03 <= rate <= 0.08, f"rate {rate:.3f}")


@pytest.mark.criterion("5b Tjostheim permutation variance within 20%")
def test_calibration_tjostheim(verdict):
    rng = np.random.default_rng(56)
    coords = rng.uniform(0, 10, size=(80, 2)) * [1.0, 0.5]
    x = rng.normal(size=80)
    y = rng.normal(size=80)
    res = tjostheim_coef(PointSample(coords, x, y))
    draws = [tjostheim_coef(PointSample(coords, x, rng.permutation(y))).coef for _ in range(2000)]
    ratio = np.var(draws, ddof=1) / res.variance
    verdict.check(abs(ratio - 1) <= 0.2, f"permutation / formula = {ratio:.3f}")


# 6. Simulation moments

def _pooled_corr(spec, reps=200):
    x, y = sample_gaussian_pair(grid_coords(32), spec, seed=6, size=reps)
    return float(np.corrcoef(x.ravel(), y.ravel())[0, 1])


@pytest.mark.criterion("6 pooled co-located correlation 0.50 +- 0.05 (c=3, gamma=2)")
def test_simulation_moment_literal(verdict):
    try:
        r = _pooled_corr(CovSpec(c=3.0, gamma=2.0))
    except DegenerateError as exc:
        verdict.check(False, f"{exc}")
    verdict.check(abs(r - 0.5) <= 0.05, f"corr {r:.4f}")


@pytest.mark.criterion("6s pooled co-located correlation 0.50 +- 0.05 (c=1, gamma=1)")
def test_simulation_moment_valid(verdict):
    r = _pooled_corr(CovSpec())
    verdict.check(abs(r - 0.5) <= 0.05, f"corr {r:.4f}")


# 7. Scaling

@pytest.fixture(scope="module")
def bench_rows():
    return bench([8, 16, 32, 64], reps=10)


@pytest.mark.criterion("7a operation counts")
def test_bench_ops(bench_rows, verdict):
    ops = {r["method"]: r["ops"] for r in bench_rows if r["size"] == 64}
    ok = ops["codisp"] == 117_411_840 and ops["ttest"] - ops["codisp"] == 16_777_216
    verdict.check(ok, f"codisp {ops['codisp']:,}, ttest extra {ops['ttest'] - ops['codisp']:,}")


@pytest.mark.criterion("7b time growth per doubling within [2.5, 8]")
def test_bench_growth(bench_rows, verdict):
    ratios = {}
    for method in ("codisp", "ttest"):
        times = [r["mean_seconds"] for r in bench_rows if r["method"] == method]
        ratios[method] = [b / a for a, b in zip(times, times[1:])]
    ok = all(2.5 <= q <= 8 for qs in ratios.values() for q in qs)
    detail = "; ".join(f"{m} " + ", ".join(f"x{q:.1f}" for q in qs) for m, qs in ratios.items())
    verdict.check(ok, detail)


@pytest.mark.criterion("7c mean times nondecreasing")
def test_bench_monotone(bench_rows, verdict):
    ok = all(np.all(np.diff([r["mean_seconds"] for r in bench_rows if r["method"] == m]) >= 0)
             for m in ("codisp", "ttest"))
    verdict.check(ok, "codisp and ttest")


# 8. Image-pair proxy

@pytest.mark.slow
@pytest.mark.criterion("8 128x128 pairs: within > 0.8, across in [-0.15, 0.15]")
def test_image_proxy(verdict):
    coords = grid_coords(128)
    x, y = sample_gaussian_pair(coords, CovSpec(u_cross=0.25), seed=2009, size=2,
                                method="blocks", max_n=128 * 128)
    fields = {"a": x[0], "b": y[0], "c": x[1], "d": y[1]}

    def curve(p):
        res = codisp_binned(PointSample(coords, fields[p[0]], fields[p[1]]))
        assert res.coef.count() == 13
        return res.coef

    within = np.concatenate([curve(p) for p in ("ab", "cd")])
    across = np.concatenate([curve(p) for p in ("ac", "ad", "bc", "bd")])
    ok = within.min() > 0.8 and across.min() >= -0.15 and across.max() <= 0.15
    verdict.check(ok, f"within min {within.min():.3f}, across [{across.min():.3f}, {across.max():.3f}]")
