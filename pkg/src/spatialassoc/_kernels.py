"""Compiled pair-streaming kernels.

Every kernel walks unordered pairs ``i < j`` in lexicographic order over a
contiguous range of chunks.  Chunk ``c`` covers rows ``bounds[c]`` to
``bounds[c + 1]``; floating point partials are written per chunk so the
caller can reduce them in a fixed order regardless of how many threads ran
the chunks.  Nothing of size ``n x n`` is ever allocated.
"""

import numpy as np
from numba import njit


@njit(cache=True, nogil=True, inline="always")
def _sqdist(coords, i, j):
    s = 0.0
    for k in range(coords.shape[1]):
        t = coords[i, k] - coords[j, k]
        s += t * t
    return s


@njit(cache=True, nogil=True, inline="always")
def _lag_class(dist, width, ub):
    # initial guess from the bin width, then settle against the stored bounds
    # so assignment agrees exactly with the reported upper bounds
    nk = ub.shape[0]
    k = int(np.ceil(dist / width)) - 1
    if k < 0:
        k = 0
    elif k > nk - 1:
        k = nk - 1
    while k > 0 and dist <= ub[k - 1]:
        k -= 1
    while k < nk - 1 and dist > ub[k]:
        k += 1
    return k


@njit(cache=True, nogil=True)
def max_sqdist(coords, bounds, c0, c1, out):
    n = coords.shape[0]
    for c in range(c0, c1):
        best = 0.0
        for i in range(bounds[c], bounds[c + 1]):
            for j in range(i + 1, n):
                s = _sqdist(coords, i, j)
                if s > best:
                    best = s
        out[c] = best


@njit(cache=True, nogil=True)
def class_counts(coords, ub, bounds, c0, c1, card, zero):
    n = coords.shape[0]
    width = ub[-1] / ub.shape[0]
    for c in range(c0, c1):
        for i in range(bounds[c], bounds[c + 1]):
            for j in range(i + 1, n):
                d = np.sqrt(_sqdist(coords, i, j))
                if d == 0.0:
                    zero[c] += 1
                    continue
                card[c, _lag_class(d, width, ub)] += 1


@njit(cache=True, nogil=True)
def cross_products(coords, xc, yc, ub, bounds, c0, c1, card, sxx, syy):
    """Per-class sums of centred cross products xc_i*xc_j and yc_i*yc_j."""
    n = coords.shape[0]
    nk = ub.shape[0]
    width = ub[-1] / nk
    for c in range(c0, c1):
        for i in range(bounds[c], bounds[c + 1]):
            xi = xc[i]
            yi = yc[i]
            for j in range(i + 1, n):
                d = np.sqrt(_sqdist(coords, i, j))
                if d == 0.0:
                    continue
                k = _lag_class(d, width, ub)
                card[c, k] += 1
                sxx[c, k] += xi * xc[j]
                syy[c, k] += yi * yc[j]


@njit(cache=True, nogil=True)
def row_sums(coords, ub, cx, cy, cx0, cy0, start, stop, rx, ry):
    """Row sums of the implicit stratum covariance matrices.

    Visits every ordered pair of the owned rows, so rows are independent and
    each row sum is accumulated in a fixed order.
    """
    n = coords.shape[0]
    width = ub[-1] / ub.shape[0]
    for i in range(start, stop):
        sx = cx0
        sy = cy0
        for j in range(n):
            if j == i:
                continue
            d = np.sqrt(_sqdist(coords, i, j))
            if d == 0.0:
                continue
            k = _lag_class(d, width, ub)
            sx += cx[k]
            sy += cy[k]
        rx[i] = sx
        ry[i] = sy


@njit(cache=True, nogil=True)
def increments(coords, x, y, ub, bounds, c0, c1, card, sxy, sxx, syy):
    """Per-class sums of increment products (x_i-x_j)(y_i-y_j) and squares."""
    n = coords.shape[0]
    nk = ub.shape[0]
    width = ub[-1] / nk
    for c in range(c0, c1):
        for i in range(bounds[c], bounds[c + 1]):
            xi = x[i]
            yi = y[i]
            for j in range(i + 1, n):
                d = np.sqrt(_sqdist(coords, i, j))
                if d == 0.0:
                    continue
                k = _lag_class(d, width, ub)
                dx = xi - x[j]
                dy = yi - y[j]
                card[c, k] += 1
                sxy[c, k] += dx * dy
                sxx[c, k] += dx * dx
                syy[c, k] += dy * dy


@njit(cache=True, nogil=True)
def directional(coords, x, y, h, tol, bounds, c0, c1, count, sums):
    """Increment sums over ordered pairs whose separation lies within tol of h.

    An unordered pair can match in either orientation (or both, for lags
    shorter than tol); each matching orientation is counted once.
    """
    n = coords.shape[0]
    dim = coords.shape[1]
    tol2 = tol * tol
    for c in range(c0, c1):
        for i in range(bounds[c], bounds[c + 1]):
            for j in range(i + 1, n):
                fwd = 0.0
                bwd = 0.0
                for k in range(dim):
                    v = coords[i, k] - coords[j, k]
                    fwd += (v - h[k]) * (v - h[k])
                    bwd += (-v - h[k]) * (-v - h[k])
                mult = 0
                if fwd <= tol2:
                    mult += 1
                if bwd <= tol2:
                    mult += 1
                if mult == 0:
                    continue
                dx = x[i] - x[j]
                dy = y[i] - y[j]
                count[c] += mult
                sums[c, 0] += mult * dx * dy
                sums[c, 1] += mult * dx * dx
                sums[c, 2] += mult * dy * dy


@njit(cache=True, nogil=True)
def polar_cells(coords, x, y, n_angles, step, n_radii, tol, bounds, c0, c1,
                count, sums):
    """Bin pair separation vectors into (angle, radius) cells.

    Angles are folded into [0, pi); the angular cell is the nearest of the
    centres (a + 1/2) pi / n_angles and the radial cell the nearest of
    j * step, j = 1..n_radii, kept only when within tol of it.
    """
    n = coords.shape[0]
    awidth = np.pi / n_angles
    for c in range(c0, c1):
        for i in range(bounds[c], bounds[c + 1]):
            for j in range(i + 1, n):
                v0 = coords[i, 0] - coords[j, 0]
                v1 = coords[i, 1] - coords[j, 1]
                r = np.sqrt(v0 * v0 + v1 * v1)
                if r == 0.0:
                    continue
                jr = int(np.floor(r / step + 0.5))
                if jr < 1 or jr > n_radii:
                    continue
                if abs(r - jr * step) > tol:
                    continue
                theta = np.arctan2(v1, v0)
                if theta < 0.0:
                    theta += np.pi
                if theta >= np.pi:
                    theta -= np.pi
                a = int(theta / awidth)
                if a >= n_angles:
                    a = n_angles - 1
                dx = x[i] - x[j]
                dy = y[i] - y[j]
                count[c, a, jr - 1] += 1
                sums[c, a, jr - 1, 0] += dx * dy
                sums[c, a, jr - 1, 1] += dx * dx
                sums[c, a, jr - 1, 2] += dy * dy
