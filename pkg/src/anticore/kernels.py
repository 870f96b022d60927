"""Hot numeric kernels, each in a numba and a pure-numpy flavour.

The public wrappers at the bottom dispatch on :data:`anticore._accel.USE_NUMBA`.
Both flavours implement the same algorithm in the same order of operations
wherever that is practical, so results agree to rounding.
"""
import math

import numpy as np

from . import _accel
from ._accel import njit
from .errors import ConvergenceError

EPS = np.finfo(np.float64).eps


# --------------------------------------------------------------------------
# implicit-shift QL on a symmetric tridiagonal matrix
# --------------------------------------------------------------------------

@njit
def _tql2_numba(d, e, z, max_iter):
    # d: diagonal (n), e: off-diagonal padded to n, z: identity on entry.
    # Returns 0 on success, otherwise 1 + index of the eigenvalue that failed.
    n = d.shape[0]
    eps = 2.220446049250313e-16
    for l in range(n):
        it = 0
        while True:
            m = l
            while m < n - 1:
                dd = abs(d[m]) + abs(d[m + 1])
                if abs(e[m]) <= eps * dd:
                    break
                m += 1
            if m == l:
                break
            it += 1
            if it > max_iter:
                return l + 1
            g = (d[l + 1] - d[l]) / (2.0 * e[l])
            r = math.hypot(g, 1.0)
            g = d[m] - d[l] + e[l] / (g + math.copysign(r, g))
            s = 1.0
            c = 1.0
            p = 0.0
            i = m - 1
            deflated = False
            while i >= l:
                f = s * e[i]
                b = c * e[i]
                r = math.hypot(f, g)
                e[i + 1] = r
                if r == 0.0:
                    d[i + 1] -= p
                    e[m] = 0.0
                    deflated = True
                    break
                s = f / r
                c = g / r
                g = d[i + 1] - p
                r = (d[i] - g) * s + 2.0 * c * b
                p = s * r
                d[i + 1] = g + p
                g = c * r - b
                for k in range(n):
                    f = z[k, i + 1]
                    z[k, i + 1] = s * z[k, i] + c * f
                    z[k, i] = c * z[k, i] - s * f
                i -= 1
            if deflated:
                continue
            d[l] -= p
            e[l] = g
            e[m] = 0.0
    return 0


def _tql2_numpy(d, e, z, max_iter):
    # Same iteration as _tql2_numba; eigenvector rotations are vectorised.
    # z is stored transposed (row k = eigenvector k) for contiguous updates.
    n = d.shape[0]
    zt = np.ascontiguousarray(z.T)
    for l in range(n):
        it = 0
        while True:
            m = l
            while m < n - 1:
                if abs(e[m]) <= EPS * (abs(d[m]) + abs(d[m + 1])):
                    break
                m += 1
            if m == l:
                break
            it += 1
            if it > max_iter:
                z[...] = zt.T
                return l + 1
            g = (d[l + 1] - d[l]) / (2.0 * e[l])
            r = math.hypot(g, 1.0)
            g = d[m] - d[l] + e[l] / (g + math.copysign(r, g))
            s = c = 1.0
            p = 0.0
            i = m - 1
            deflated = False
            while i >= l:
                f = s * e[i]
                b = c * e[i]
                r = math.hypot(f, g)
                e[i + 1] = r
                if r == 0.0:
                    d[i + 1] -= p
                    e[m] = 0.0
                    deflated = True
                    break
                s = f / r
                c = g / r
                g = d[i + 1] - p
                r = (d[i] - g) * s + 2.0 * c * b
                p = s * r
                d[i + 1] = g + p
                g = c * r - b
                hi = zt[i + 1].copy()
                zt[i + 1] = s * zt[i] + c * hi
                zt[i] = c * zt[i] - s * hi
                i -= 1
            if deflated:
                continue
            d[l] -= p
            e[l] = g
            e[m] = 0.0
    z[...] = zt.T
    return 0


def tridiagonal_eigh(diag, offdiag, max_iter=60, use_numba=None):
    """Eigen-decompose a symmetric tridiagonal matrix by implicit QL.

    Returns unsorted ``(eigenvalues, eigenvectors)`` with eigenvectors in
    columns.  Raises :class:`ConvergenceError` if any eigenvalue needs more
    than ``max_iter`` QL sweeps.
    """
    n = len(diag)
    d = np.array(diag, dtype=np.float64)
    e = np.zeros(n)
    e[: n - 1] = offdiag
    z = np.eye(n)
    if use_numba is None:
        use_numba = _accel.USE_NUMBA
    kernel = _tql2_numba if use_numba else _tql2_numpy
    status = kernel(d, e, z, int(max_iter))
    if status:
        raise ConvergenceError(
            f"implicit QL did not converge for eigenvalue {status - 1} of {n} "
            f"within {max_iter} iterations"
        )
    return d, z


# --------------------------------------------------------------------------
# sqrt(p_max) matrix: S[i, j] = sum_k |V[i, k]| |V[j, k]|
# --------------------------------------------------------------------------

@njit
def _abs_overlap_numba(v):
    n, r = v.shape
    a = np.abs(v)
    s = np.empty((n, n))
    for i in range(n):
        for j in range(i, n):
            acc = 0.0
            for k in range(r):
                acc += a[i, k] * a[j, k]
            s[i, j] = acc
            s[j, i] = acc
    return s


def _abs_overlap_numpy(v):
    a = np.abs(v)
    s = a @ a.T
    upper = np.triu(s)
    return upper + np.triu(s, 1).T


def abs_overlap(v, use_numba=False):
    """Exactly symmetric matrix of ``sum_k |v[i,k] v[j,k]|`` (rows = spins).

    Defaults to the BLAS product, which beats the compiled loop at every size
    benchmarked; ``use_numba=True`` selects the loop.
    """
    v = np.ascontiguousarray(v, dtype=np.float64)
    return _abs_overlap_numba(v) if use_numba else _abs_overlap_numpy(v)


# --------------------------------------------------------------------------
# p_t(i, j) on a time grid via the spectral sum
# --------------------------------------------------------------------------

@njit
def _transfer_probabilities_numba(lam, v, times):
    n = v.shape[0]
    nt = times.shape[0]
    out = np.empty((nt, n, n))
    re = np.empty(n)
    im = np.empty(n)
    for t in range(nt):
        for k in range(n):
            re[k] = math.cos(lam[k] * times[t])
            im[k] = -math.sin(lam[k] * times[t])
        for i in range(n):
            for j in range(i, n):
                ar = 0.0
                ai = 0.0
                for k in range(n):
                    w = v[i, k] * v[j, k]
                    ar += re[k] * w
                    ai += im[k] * w
                p = ar * ar + ai * ai
                out[t, i, j] = p
                out[t, j, i] = p
    return out


def _transfer_probabilities_numpy(lam, v, times):
    phase = np.exp(-1j * np.outer(times, lam))
    amp = np.einsum("ik,tk,jk->tij", v, phase, v, optimize=True)
    p = amp.real ** 2 + amp.imag ** 2
    upper = np.triu(np.ones(v.shape[0], dtype=bool))
    return np.where(upper, p, np.swapaxes(p, 1, 2))


def transfer_probabilities(lam, v, times, use_numba=None):
    """``out[t, i, j] = |sum_k exp(-i lam_k t) v[i,k] v[j,k]|^2``."""
    if use_numba is None:
        use_numba = _accel.USE_NUMBA
    lam = np.ascontiguousarray(lam, dtype=np.float64)
    v = np.ascontiguousarray(v, dtype=np.float64)
    times = np.ascontiguousarray(np.atleast_1d(times), dtype=np.float64)
    if use_numba:
        return _transfer_probabilities_numba(lam, v, times)
    return _transfer_probabilities_numpy(lam, v, times)


# --------------------------------------------------------------------------
# four-point Gromov delta
# --------------------------------------------------------------------------

@njit
def _quad_delta(d, x, y, z, w):
    s1 = d[x, y] + d[z, w]
    s2 = d[x, z] + d[y, w]
    s3 = d[x, w] + d[y, z]
    if s1 < s2:
        s1, s2 = s2, s1
    if s2 < s3:
        s2, s3 = s3, s2
    if s1 < s2:
        s1, s2 = s2, s1
    return 0.5 * (s1 - s2)


@njit
def _four_point_exhaustive_numba(d):
    # Row-major scan over x < y < z < w; first maximiser wins.
    n = d.shape[0]
    best = 0.0
    arg = np.full(4, -1, dtype=np.int64)
    skipped = 0
    for x in range(n):
        for y in range(x + 1, n):
            for z in range(y + 1, n):
                for w in range(z + 1, n):
                    if not (np.isfinite(d[x, y]) and np.isfinite(d[z, w])
                            and np.isfinite(d[x, z]) and np.isfinite(d[y, w])
                            and np.isfinite(d[x, w]) and np.isfinite(d[y, z])):
                        skipped += 1
                        continue
                    delta = _quad_delta(d, x, y, z, w)
                    if delta > best or arg[0] < 0:
                        best = delta
                        arg[0] = x
                        arg[1] = y
                        arg[2] = z
                        arg[3] = w
    return best, arg, skipped


@njit
def _four_point_sampled_numba(d, quads):
    best = 0.0
    arg = np.full(4, -1, dtype=np.int64)
    skipped = 0
    for q in range(quads.shape[0]):
        x = quads[q, 0]
        y = quads[q, 1]
        z = quads[q, 2]
        w = quads[q, 3]
        if not (np.isfinite(d[x, y]) and np.isfinite(d[z, w])
                and np.isfinite(d[x, z]) and np.isfinite(d[y, w])
                and np.isfinite(d[x, w]) and np.isfinite(d[y, z])):
            skipped += 1
            continue
        delta = _quad_delta(d, x, y, z, w)
        if delta > best or arg[0] < 0:
            best = delta
            for c in range(4):
                arg[c] = quads[q, c]
    return best, arg, skipped


def _four_point_sampled_numpy(d, quads):
    x, y, z, w = quads.T
    s = np.stack([d[x, y] + d[z, w], d[x, z] + d[y, w], d[x, w] + d[y, z]])
    finite = np.all(np.isfinite(s), axis=0)
    skipped = int(np.count_nonzero(~finite))
    if not finite.any():
        return 0.0, np.full(4, -1, dtype=np.int64), skipped
    s = np.sort(s[:, finite], axis=0)
    delta = 0.5 * (s[2] - s[1])
    k = int(np.argmax(delta))
    return float(delta[k]), quads[finite][k].astype(np.int64), skipped


def all_quadruples(n):
    """Every ``x < y < z < w`` in row-major order, shape ``(C(n, 4), 4)``."""
    from itertools import combinations

    count = math.comb(n, 4)
    if count == 0:
        return np.empty((0, 4), dtype=np.int64)
    flat = np.fromiter(
        (c for quad in combinations(range(n), 4) for c in quad),
        dtype=np.int64, count=4 * count,
    )
    return flat.reshape(count, 4)


def four_point_scan(d, quads=None, use_numba=None):
    """Max four-point delta over ``quads`` (all quadruples when None).

    Returns ``(delta, quadruple, skipped)``; quadruple is 0-based, ``-1``
    entries mean nothing finite was scanned.
    """
    if use_numba is None:
        use_numba = _accel.USE_NUMBA
    d = np.ascontiguousarray(d, dtype=np.float64)
    if quads is None:
        if use_numba:
            best, arg, skipped = _four_point_exhaustive_numba(d)
        else:
            best, arg, skipped = _four_point_sampled_numpy(d, all_quadruples(d.shape[0]))
    else:
        quads = np.ascontiguousarray(quads, dtype=np.int64)
        if use_numba:
            best, arg, skipped = _four_point_sampled_numba(d, quads)
        else:
            best, arg, skipped = _four_point_sampled_numpy(d, quads)
    return float(best), tuple(int(a) for a in arg), int(skipped)
