"""Locations, pair streaming and lag-class construction.

All estimators in the package are built on the same traversal: unordered
pairs ``(i, j)`` with ``i < j`` visited in lexicographic order.  Pairs are
grouped into chunks of whole rows whose boundaries depend only on ``n``;
partial sums are reduced in chunk order, so results do not depend on the
number of worker threads.
"""

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .exceptions import DegenerateError
from .validation import (
    STURGES,
    check_coords,
    check_nclass,
    check_nonconstant,
    check_paired,
    check_threads,
    check_values,
)

DEFAULT_NCLASS = 13

_MIN_CHUNK_PAIRS = 1 << 18
_MAX_CHUNKS = 256


@dataclass(frozen=True, eq=False)
class PointSample:
    """Two variables observed at the same ``n`` locations.

    Parameters
    ----------
    coords : array-like of shape (n, d)
        Location coordinates.  A 1-D array is read as points on a line.
    x, y : array-like of shape (n,)
        Observations of the two processes.
    """

    coords: np.ndarray
    x: np.ndarray
    y: np.ndarray

    def __post_init__(self):
        coords = check_coords(self.coords, min_points=3)
        x = check_values(self.x, "x", min_points=3)
        y = check_values(self.y, "y", min_points=3)
        check_paired(coords, x, y)
        check_nonconstant(x, "x")
        check_nonconstant(y, "y")
        for name, arr in (("coords", coords), ("x", x), ("y", y)):
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)

    @property
    def n(self):
        return self.coords.shape[0]

    @property
    def dim(self):
        return self.coords.shape[1]

    def with_values(self, x, y):
        """Same locations, new observations."""
        return PointSample(self.coords, x, y)


@dataclass(frozen=True, eq=False)
class LagClasses:
    """Equal-width distance classes ``((k-1) D/K, k D/K]`` over ``(0, D]``.

    Attributes
    ----------
    upper_bounds : ndarray of shape (K,)
        Right end of each class; the last one equals ``max_dist``.
    card : ndarray of shape (K,)
        Number of unordered pairs in each class.
    max_dist : float
        Largest pairwise distance ``D``.
    zero_pairs : int
        Pairs of coincident locations.  They belong to no class.
    """

    upper_bounds: np.ndarray
    card: np.ndarray
    max_dist: float
    zero_pairs: int

    @property
    def nclass(self):
        return self.upper_bounds.shape[0]

    @property
    def n_pairs(self):
        return int(self.card.sum()) + self.zero_pairs


def as_coords(obj):
    if isinstance(obj, PointSample):
        return obj.coords
    return check_coords(obj)


def n_pairs(n):
    return n * (n - 1) // 2


def pair_chunks(n):
    """Row boundaries of the fixed pair chunks for ``n`` points.

    Chunk ``c`` owns rows ``bounds[c]:bounds[c+1]`` (all pairs ``(i, j)``
    with ``i`` in that range and ``j > i``).  At most 256 chunks are made
    and each holds at least 2**18 pairs where possible.
    """
    total = n_pairs(n)
    if total == 0:
        return np.array([0, n], dtype=np.int64)
    target = max(_MIN_CHUNK_PAIRS, -(-total // _MAX_CHUNKS))
    # pairs owned by rows [0, i) = i*n - i*(i+1)/2
    rows = np.arange(n + 1, dtype=np.int64)
    cum = rows * n - rows * (rows + 1) // 2
    cuts = np.searchsorted(cum, np.arange(target, total, target), side="left")
    bounds = np.unique(np.concatenate(([0], cuts, [n])))
    return bounds.astype(np.int64)


def run_chunks(call, nchunks, threads=1):
    """Run ``call(c0, c1)`` over ``range(nchunks)``, split across threads.

    ``call`` must write its results into per-chunk slots, so that the
    combination step is independent of the split.
    """
    threads = check_threads(threads)
    if threads == 1 or nchunks == 1:
        call(0, nchunks)
        return
    edges = np.linspace(0, nchunks, min(threads, nchunks) + 1).astype(int)
    with ThreadPoolExecutor(max_workers=len(edges) - 1) as pool:
        futures = [pool.submit(call, int(a), int(b)) for a, b in zip(edges[:-1], edges[1:])]
        for f in futures:
            f.result()


def max_pair_distance(sample, threads=1):
    """Largest Euclidean distance between two locations.

    Raises
    ------
    DegenerateError
        If all locations coincide.
    """
    coords = as_coords(sample)
    bounds = pair_chunks(coords.shape[0])
    out = np.zeros(len(bounds) - 1)
    run_chunks(lambda a, b: _kernels.max_sqdist(coords, bounds, a, b, out),
               len(out), threads)
    dmax = float(np.sqrt(out.max())) if len(out) else 0.0
    if not dmax > 0.0:
        raise DegenerateError("degenerate geometry: all locations coincide")
    return dmax


def sturges_nclass(n):
    """Sturges' rule applied to the number of pairs ``n(n-1)/2``."""
    return int(np.ceil(1.0 + np.log2(n_pairs(n))))


def make_upper_bounds(max_dist, nclass):
    ub = max_dist * np.arange(1, nclass + 1, dtype=np.float64) / nclass
    ub[-1] = max_dist
    return ub


def build_lag_classes(sample, nclass=DEFAULT_NCLASS, threads=1):
    """Equal-width distance classes with their pair cardinalities.

    Parameters
    ----------
    sample : PointSample or array-like of coordinates
    nclass : int or "sturges"
        Number of classes.  ``"sturges"`` uses ``ceil(1 + log2(P))`` with
        ``P`` the number of pairs.
    threads : int
        Worker threads for the pair pass.
    """
    coords = as_coords(sample)
    nclass = check_nclass(nclass)
    if nclass == STURGES:
        nclass = sturges_nclass(coords.shape[0])
    dmax = max_pair_distance(coords, threads)
    ub = make_upper_bounds(dmax, nclass)
    bounds = pair_chunks(coords.shape[0])
    nch = len(bounds) - 1
    card = np.zeros((nch, nclass), dtype=np.int64)
    zero = np.zeros(nch, dtype=np.int64)
    run_chunks(lambda a, b: _kernels.class_counts(coords, ub, bounds, a, b, card, zero),
               nch, threads)
    return LagClasses(upper_bounds=ub, card=card.sum(axis=0), max_dist=dmax,
                      zero_pairs=int(zero.sum()))


def iter_pair_blocks(sample):
    """Yield ``(i, j, dist)`` per row: all partners ``j > i`` as arrays."""
    coords = as_coords(sample)
    n = coords.shape[0]
    for i in range(n - 1):
        diff = coords[i + 1:] - coords[i]
        yield i, np.arange(i + 1, n), np.sqrt(np.einsum("ij,ij->i", diff, diff))


def for_each_pair(sample, visitor):
    """Call ``visitor(i, j, dist)`` once per unordered pair, ``i < j``.

    Pairs are visited in lexicographic order.  This is the reference
    traversal; the compiled estimators follow the same order internally.
    """
    for i, js, dists in iter_pair_blocks(sample):
        for j, d in zip(js.tolist(), dists.tolist()):
            visitor(i, j, d)
