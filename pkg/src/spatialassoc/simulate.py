"""Correlated Gaussian field pairs and the timing benchmark.

The pair ``Z = (X, Y)`` is multivariate normal with covariance

    [[S0, S1],
     [S1, S0]],   S_u[i, j] = C(|s_i - s_j|, u),

built from the nonseparable space-time family

    C(h, u) = eta(h^2 / psi(u^2)) / psi(u^2)^(d/2),
    psi(r) = (a r^alpha + 1)^beta,  eta(r) = (1 + (r / sigma^2)^gamma)^(-c/gamma).

``X`` and ``Y`` are the field at two time points separated by ``u_cross``.
"""

import time
from dataclasses import asdict, dataclass

import numpy as np
from scipy import linalg
from scipy.linalg import blas, lapack

from .codispersion import codisp_binned
from .exceptions import DegenerateError
from .geometry import DEFAULT_NCLASS, PointSample, n_pairs
from .mttest import modified_ttest
from .validation import check_coords

RNG_NAME = "numpy.random.PCG64"
MAX_DENSE_N = 4096
JITTERS = (0.0, 1e-10, 1e-9, 1e-8, 1e-7, 1e-6)

_BLOCK_ROWS = 512


@dataclass(frozen=True)
class CovSpec:
    """Parameters of the covariance family.

    All defaults are 1 (``u_within=0``).  Only ``gamma <= 1`` guarantees a
    positive definite covariance: ``eta`` is applied to the squared distance,
    so larger ``gamma`` gives a generalised Cauchy function of ``|h|`` with
    exponent ``2 gamma > 2``.  Such specs are accepted, and sampling fails
    if the factorisation does.
    """

    a: float = 1.0
    alpha: float = 1.0
    beta: float = 1.0
    sigma: float = 1.0
    c: float = 1.0
    gamma: float = 1.0
    d: int = 2
    u_within: float = 0.0
    u_cross: float = 1.0

    def __post_init__(self):
        if not self.a > 0:
            raise ValueError(f"a must be positive, got {self.a}")
        if not 0 < self.alpha <= 1:
            raise ValueError(f"alpha must lie in (0, 1], got {self.alpha}")
        if not 0 < self.beta <= 1:
            raise ValueError(f"beta must lie in (0, 1], got {self.beta}")
        if not self.sigma > 0:
            raise ValueError(f"sigma must be positive, got {self.sigma}")
        if not self.c > 0:
            raise ValueError(f"c must be positive, got {self.c}")
        if not 0 < self.gamma <= 2:
            raise ValueError(f"gamma must lie in (0, 2], got {self.gamma}")
        if int(self.d) != self.d or self.d < 1:
            raise ValueError(f"d must be a positive integer, got {self.d}")


def nonsep_cov(h_norm, u, spec=CovSpec()):
    """Covariance at spatial distance ``h_norm`` and time separation ``u``."""
    h_norm = np.asarray(h_norm, dtype=np.float64)
    psi = (spec.a * (np.asarray(u, dtype=np.float64) ** 2) ** spec.alpha + 1.0) ** spec.beta
    r = h_norm**2 / psi
    eta = (1.0 + (r / spec.sigma**2) ** spec.gamma) ** (-spec.c / spec.gamma)
    out = eta / psi ** (spec.d / 2.0)
    return float(out) if out.ndim == 0 else out


def grid_coords(nrow, ncol=None):
    """Pixel centres ``(col, row)`` of an ``nrow x ncol`` grid in row-major order."""
    ncol = nrow if ncol is None else ncol
    rows, cols = np.divmod(np.arange(nrow * ncol), ncol)
    return np.column_stack((cols, rows)).astype(np.float64)


def _fill_cov(out, coords, spec, u, sign=1.0, add=None):
    # out[i, j] = C(|s_i - s_j|, u)  (+ sign * C(., add) when add is given)
    n = coords.shape[0]
    for start in range(0, n, _BLOCK_ROWS):
        stop = min(start + _BLOCK_ROWS, n)
        diff = coords[start:stop, None, :] - coords[None, :, :]
        h = np.sqrt(np.einsum("ijk,ijk->ij", diff, diff))
        block = nonsep_cov(h, u, spec)
        if add is not None:
            block = block + sign * nonsep_cov(h, add, spec)
        out[start:stop] = block
    return out


def build_block_sigma(coords, spec=CovSpec(), max_n=MAX_DENSE_N):
    """Dense ``2n x 2n`` covariance of the stacked pair ``(X, Y)``."""
    coords = check_coords(coords)
    n = coords.shape[0]
    if n > max_n:
        raise ValueError(f"{n} locations exceed the dense cap of {max_n}")
    sigma = np.empty((2 * n, 2 * n))
    s0 = _fill_cov(np.empty((n, n)), coords, spec, spec.u_within)
    s1 = _fill_cov(np.empty((n, n)), coords, spec, spec.u_cross)
    sigma[:n, :n] = s0
    sigma[n:, n:] = s0
    sigma[:n, n:] = s1
    sigma[n:, :n] = s1
    return sigma


def cholesky_jitter(sigma):
    """Lower Cholesky factor, adding ``delta * I`` for escalating ``delta`` on failure.

    Returns the factor and the jitter used.
    """
    for delta in JITTERS:
        try:
            a = sigma if delta == 0.0 else sigma + delta * np.eye(sigma.shape[0])
            return linalg.cholesky(a, lower=True, check_finite=False), delta
        except linalg.LinAlgError:
            continue
    raise DegenerateError("covariance not positive definite")


def _inplace_factor(a):
    """Lower Cholesky factor overwriting the symmetric C-ordered ``a``.

    The factor is returned as a Fortran-ordered view sharing ``a``'s memory;
    its strict upper triangle holds leftovers and must not be read.
    """
    at = a.T  # Fortran-ordered and, by symmetry, equal to a
    base = np.diagonal(a).copy()
    for delta in JITTERS:
        if delta:
            at[np.diag_indices_from(at)] = base + delta
        fac, info = lapack.dpotrf(at, lower=1, clean=0, overwrite_a=1)
        if info == 0:
            return fac, delta
        # dpotrf destroyed part of the lower triangle: restore it from the upper one
        for j in range(a.shape[0] - 1):
            at[j + 1:, j] = at[j, j + 1:]
    raise DegenerateError("covariance not positive definite")


def _draw_blocks(coords, spec, rng, size):
    # X = (U + V)/sqrt(2), Y = (U - V)/sqrt(2) with U ~ N(0, S0 + S1), V ~ N(0, S0 - S1)
    n = coords.shape[0]
    k = 1 if size is None else size
    parts = []
    for sign in (1.0, -1.0):
        work = _fill_cov(np.empty((n, n)), coords, spec, spec.u_within, sign, spec.u_cross)
        fac, _ = _inplace_factor(work)
        eps = np.asfortranarray(rng.standard_normal((n, k)))
        parts.append(blas.dtrmm(1.0, fac, eps, lower=1))
        del work, fac
    u, v = parts
    x = ((u + v) / np.sqrt(2.0)).T
    y = ((u - v) / np.sqrt(2.0)).T
    return (x[0], y[0]) if size is None else (x, y)


def sample_gaussian_pair(coords, spec=CovSpec(), seed=None, size=None,
                         method="dense", max_n=MAX_DENSE_N):
    """Draw ``(x, y)`` from the bivariate field at ``coords``.

    Parameters
    ----------
    coords : array-like of shape (n, d)
    spec : CovSpec
    seed : int or None
        Seed of the PCG64 generator; equal seeds give bit-identical draws.
    size : int, optional
        Number of independent pairs.  When given, ``x`` and ``y`` have shape
        ``(size, n)``.
    method : {"dense", "blocks"}
        ``"dense"`` factors the full ``2n x 2n`` matrix.  ``"blocks"`` uses
        the symmetry of the block structure to factor two ``n x n``
        matrices instead, which is what makes grids beyond 64 x 64 feasible.
    max_n : int
        Largest accepted ``n``.
    """
    coords = check_coords(coords)
    n = coords.shape[0]
    if n > max_n:
        raise ValueError(f"{n} locations exceed the cap of {max_n}")
    rng = np.random.default_rng(seed)
    if method == "blocks":
        return _draw_blocks(coords, spec, rng, size)
    if method != "dense":
        raise ValueError(f"method must be 'dense' or 'blocks', got {method!r}")
    chol, _ = cholesky_jitter(build_block_sigma(coords, spec, max_n))
    eps = rng.standard_normal(2 * n if size is None else (2 * n, size))
    z = chol @ eps
    if size is None:
        return z[:n], z[n:]
    return z[:n].T, z[n:].T


def metadata(spec, seed, coords_shape):
    return {"spec": asdict(spec), "seed": seed, "rng": RNG_NAME,
            "n": int(coords_shape[0]), "dim": int(coords_shape[1])}


def op_counts(size, nclass=DEFAULT_NCLASS):
    """Operation counts ``(K+1) n(n-1)/2`` and the extra ``n^2`` of the t-test."""
    n = size * size
    base = (nclass + 1) * n_pairs(n)
    return base, n * n


def bench(sizes=(8, 16, 32, 64), reps=10, method="both", nclass=DEFAULT_NCLASS,
          spec=CovSpec(), seed=0, threads=1):
    """Time codispersion and/or the modified t-test on simulated grids.

    Returns one dict per (size, method) with the mean and minimum wall time
    over ``reps`` simulated pairs and the nominal operation count.
    """
    methods = {"codisp": ("codisp",), "ttest": ("ttest",), "both": ("codisp", "ttest")}[method]
    warm = PointSample(grid_coords(4), np.arange(16.0), np.arange(16.0) % 5)
    codisp_binned(warm, nclass)
    modified_ttest(warm, nclass)
    rows = []
    for size in sizes:
        coords = grid_coords(size)
        xs, ys = sample_gaussian_pair(coords, spec, seed=seed, size=reps)
        base, extra = op_counts(size, nclass)
        for name in methods:
            times = []
            for x, y in zip(xs, ys):
                sample = PointSample(coords, x, y)
                t0 = time.perf_counter()
                if name == "codisp":
                    codisp_binned(sample, nclass, threads)
                else:
                    modified_ttest(sample, nclass, threads=threads)
                times.append(time.perf_counter() - t0)
            rows.append({
                "size": size,
                "n": size * size,
                "method": name,
                "reps": reps,
                "mean_seconds": float(np.mean(times)),
                "min_seconds": float(np.min(times)),
                "ops": base + (extra if name == "ttest" else 0),
            })
    return rows
