"""Pure-Python / numpy versions of the kernels in ``_kernels.pyx``.

Same names and signatures. ``batch_logdet_parts`` and ``lu_det`` replicate
the compiled arithmetic operation for operation, so both backends return
identical bits.
"""
import math

import numpy as np

_SUBSET_CHUNK = 1 << 15


def _subset_masks(start, stop, n):
    idx = np.arange(start, stop, dtype=np.int64)
    return (idx[:, None] >> np.arange(n, dtype=np.int64)) & 1


def _ryser_chunks(a, dtype, sum_dtype=None):
    sum_dtype = sum_dtype or dtype
    n = a.shape[0]
    total = 1 << n
    acc = dtype(0)
    for start in range(1, total, _SUBSET_CHUNK):
        stop = min(total, start + _SUBSET_CHUNK)
        masks = _subset_masks(start, stop, n)
        rowsums = (masks.astype(sum_dtype) @ a.T.astype(sum_dtype)).astype(dtype)
        prods = np.prod(rowsums, axis=1, dtype=dtype)
        odd = (masks.sum(axis=1) & 1).astype(bool)
        acc += prods[~odd].sum(dtype=dtype) - prods[odd].sum(dtype=dtype)
    return -acc if n & 1 else acc


def ryser_float(a):
    """Ryser's inclusion-exclusion permanent, vectorized over subset chunks."""
    a = np.asarray(a, dtype=np.float64)
    if a.shape[0] == 0:
        return 1.0
    return float(_ryser_chunks(a, np.longdouble))


def ryser_int(a):
    """Integer Ryser; caller guarantees 2**n * prod(row abs sums) < 2**63."""
    a = np.asarray(a, dtype=np.int64)
    if a.shape[0] == 0:
        return 1
    return int(_ryser_chunks(a, np.int64))


def _naive(rows, row, n, used):
    if row == n:
        return 1
    total = 0
    current = rows[row]
    for j in range(n):
        if not used[j] and current[j] != 0:
            used[j] = True
            total += current[j] * _naive(rows, row + 1, n, used)
            used[j] = False
    return total


def naive_permanent_float(a):
    """Sum over all permutations, depth-first with shared prefixes."""
    rows = [[float(x) for x in r] for r in np.asarray(a, dtype=np.float64)]
    n = len(rows)
    return float(_naive(rows, 0, n, [False] * n))


def naive_permanent_int(a):
    rows = [[int(x) for x in r] for r in np.asarray(a, dtype=np.int64)]
    n = len(rows)
    return _naive(rows, 0, n, [False] * n)


def lu_det(a):
    """Determinant by partial-pivoting LU; the 0x0 determinant is 1."""
    m = [[float(x) for x in r] for r in np.asarray(a, dtype=np.float64)]
    n = len(m)
    det = 1.0
    for k in range(n):
        p = k
        best = abs(m[k][k])
        for i in range(k + 1, n):
            v = abs(m[i][k])
            if v > best:
                best, p = v, i
        if best == 0.0:
            return 0.0
        if p != k:
            m[k], m[p] = m[p], m[k]
            det = -det
        piv = m[k][k]
        det = det * piv
        rk = m[k]
        for i in range(k + 1, n):
            ri = m[i]
            l = ri[k] / piv
            for j in range(k + 1, n):
                ri[j] = ri[j] - l * rk[j]
    return det


def batch_logdet_parts(a):
    """Vectorized partial-pivoting LU over the leading axis.

    Returns ``(mantissa, exponent, sign)`` with ``|det| = mantissa * 2**exponent``.
    """
    m = np.array(a, dtype=np.float64, copy=True)
    k_samples, n = m.shape[0], (m.shape[1] if m.ndim == 3 else 0)
    mant = np.ones(k_samples)
    expo = np.zeros(k_samples, dtype=np.int64)
    sign = np.ones(k_samples)
    if n == 0 or k_samples == 0:
        return mant, expo, sign
    alive = np.ones(k_samples, dtype=bool)
    rows = np.arange(k_samples)
    with np.errstate(divide="ignore", invalid="ignore"):
        for k in range(n):
            col = np.abs(m[:, k:, k])
            p = k + np.argmax(col, axis=1)
            best = col[rows, p - k]
            # NaN from an earlier dead sample compares False; alive already cleared
            dead = ~(best != 0.0)
            alive &= ~dead
            swap = (p != k) & alive
            if swap.any():
                s = rows[swap]
                tmp = m[s, k, :].copy()
                m[s, k, :] = m[s, p[swap], :]
                m[s, p[swap], :] = tmp
                sign[swap] = -sign[swap]
            piv = m[:, k, k]
            sign[(piv < 0.0) & alive] *= -1.0
            mant, ex = np.frexp(mant * best)
            expo += ex
            if k + 1 < n:
                l = m[:, k + 1:, k] / piv[:, None]
                m[:, k + 1:, k + 1:] = m[:, k + 1:, k + 1:] - l[:, :, None] * m[:, k, None, k + 1:]
    mant[~alive] = 0.0
    expo[~alive] = 0
    sign[~alive] = 0.0
    return mant, expo, sign


def mixdisc_inclusion_exclusion(q):
    """sum over subsets S of (-1)**(n-|S|) det(sum_{i in S} q[i])."""
    q = np.asarray(q, dtype=np.float64)
    n = q.shape[0]
    if n == 0:
        return 1.0
    total = 1 << n
    chunk = max(1, _SUBSET_CHUNK // max(1, n * n))
    terms = []
    for start in range(1, total, chunk):
        stop = min(total, start + chunk)
        masks = _subset_masks(start, stop, n)
        sums = np.einsum("kj,jab->kab", masks.astype(np.float64), q)
        dets = np.linalg.det(sums)
        flip = ((n - masks.sum(axis=1)) & 1).astype(bool)
        dets[flip] = -dets[flip]
        terms.append(dets)
    return math.fsum(np.concatenate(terms))
