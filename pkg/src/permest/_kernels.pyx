"""Compiled inner loops.

Every function here has a twin with the same name and signature in
``_fallback.py``. ``batch_logdet_parts`` and ``lu_det`` must agree with the
twins bit for bit; the oracle kernels only to rounding.
"""
import numpy as np

from libc.math cimport fabs, frexp
from libc.stdlib cimport free, malloc
from libc.string cimport memcpy

ctypedef long long i64

cdef extern from *:
    int __builtin_ctzll(unsigned long long) nogil


# ---------------------------------------------------------------- permanents

def ryser_float(const double[:, ::1] a):
    """Ryser's inclusion-exclusion permanent, Gray-code ordered subsets.

    Accumulates in long double: the alternating sum cancels heavily for large n.
    """
    cdef Py_ssize_t n = a.shape[0], i, j
    cdef unsigned long long k, total_subsets
    cdef long double prod, acc = 0.0
    cdef int size = 0
    if n == 0:
        return 1.0
    cdef long double *rowsum = <long double *> malloc(n * sizeof(long double))
    if rowsum == NULL:
        raise MemoryError()
    with nogil:
        for i in range(n):
            rowsum[i] = 0.0
        total_subsets = (<unsigned long long> 1) << n
        for k in range(1, total_subsets):
            j = __builtin_ctzll(k)
            if ((k ^ (k >> 1)) >> j) & 1:
                size += 1
                for i in range(n):
                    rowsum[i] += a[i, j]
            else:
                size -= 1
                for i in range(n):
                    rowsum[i] -= a[i, j]
            prod = 1.0
            for i in range(n):
                prod *= rowsum[i]
            if size & 1:
                acc -= prod
            else:
                acc += prod
    free(rowsum)
    return <double> (-acc if n & 1 else acc)


def ryser_int(const i64[:, ::1] a):
    """Integer Ryser; caller guarantees 2**n * prod(row abs sums) < 2**63."""
    cdef Py_ssize_t n = a.shape[0], i, j
    cdef unsigned long long k, total_subsets
    cdef i64 prod, acc = 0
    cdef int size = 0
    if n == 0:
        return 1
    cdef i64 *rowsum = <i64 *> malloc(n * sizeof(i64))
    if rowsum == NULL:
        raise MemoryError()
    with nogil:
        for i in range(n):
            rowsum[i] = 0
        total_subsets = (<unsigned long long> 1) << n
        for k in range(1, total_subsets):
            j = __builtin_ctzll(k)
            if ((k ^ (k >> 1)) >> j) & 1:
                size += 1
                for i in range(n):
                    rowsum[i] += a[i, j]
            else:
                size -= 1
                for i in range(n):
                    rowsum[i] -= a[i, j]
            prod = 1
            for i in range(n):
                prod *= rowsum[i]
            if size & 1:
                acc -= prod
            else:
                acc += prod
    free(rowsum)
    return -acc if n & 1 else acc


cdef double _naive_float(const double[:, ::1] a, Py_ssize_t row, Py_ssize_t n,
                         char *used) noexcept nogil:
    cdef Py_ssize_t j
    cdef double total = 0.0
    if row == n:
        return 1.0
    for j in range(n):
        if not used[j] and a[row, j] != 0.0:
            used[j] = 1
            total += a[row, j] * _naive_float(a, row + 1, n, used)
            used[j] = 0
    return total


cdef i64 _naive_int(const i64[:, ::1] a, Py_ssize_t row, Py_ssize_t n,
                    char *used) noexcept nogil:
    cdef Py_ssize_t j
    cdef i64 total = 0
    if row == n:
        return 1
    for j in range(n):
        if not used[j] and a[row, j] != 0:
            used[j] = 1
            total += a[row, j] * _naive_int(a, row + 1, n, used)
            used[j] = 0
    return total


def naive_permanent_float(const double[:, ::1] a):
    """Sum over all permutations, depth-first with shared prefixes."""
    cdef Py_ssize_t n = a.shape[0], j
    cdef double out
    cdef char *used = <char *> malloc(n + 1)
    if used == NULL:
        raise MemoryError()
    for j in range(n):
        used[j] = 0
    with nogil:
        out = _naive_float(a, 0, n, used)
    free(used)
    return out


def naive_permanent_int(const i64[:, ::1] a):
    cdef Py_ssize_t n = a.shape[0], j
    cdef i64 out
    cdef char *used = <char *> malloc(n + 1)
    if used == NULL:
        raise MemoryError()
    for j in range(n):
        used[j] = 0
    with nogil:
        out = _naive_int(a, 0, n, used)
    free(used)
    return out


# ------------------------------------------------------------- determinants

cdef double _lu_det_inplace(double *m, Py_ssize_t n) noexcept nogil:
    # row-major n*n buffer, destroyed
    cdef Py_ssize_t i, j, k, p
    cdef double best, v, piv, l, tmp, det = 1.0
    for k in range(n):
        p = k
        best = fabs(m[k * n + k])
        for i in range(k + 1, n):
            v = fabs(m[i * n + k])
            if v > best:
                best = v
                p = i
        if best == 0.0:
            return 0.0
        if p != k:
            for j in range(n):
                tmp = m[k * n + j]
                m[k * n + j] = m[p * n + j]
                m[p * n + j] = tmp
            det = -det
        piv = m[k * n + k]
        det = det * piv
        for i in range(k + 1, n):
            l = m[i * n + k] / piv
            for j in range(k + 1, n):
                m[i * n + j] = m[i * n + j] - l * m[k * n + j]
    return det


def lu_det(const double[:, ::1] a):
    """Determinant by partial-pivoting LU; the 0x0 determinant is 1."""
    cdef Py_ssize_t n = a.shape[0]
    cdef double out
    if n == 0:
        return 1.0
    cdef double *m = <double *> malloc(n * n * sizeof(double))
    if m == NULL:
        raise MemoryError()
    memcpy(m, &a[0, 0], n * n * sizeof(double))
    with nogil:
        out = _lu_det_inplace(m, n)
    free(m)
    return out


def batch_logdet_parts(const double[:, :, ::1] a):
    """Partial-pivoting LU of each ``a[s]``, |det| kept as mantissa * 2**exponent.

    Returns ``(mantissa, exponent, sign)``; a singular sample has mantissa 0
    and sign 0. ``log|det| = log(mantissa) + exponent * ln 2``.
    """
    cdef Py_ssize_t k_samples = a.shape[0], n = a.shape[1]
    cdef Py_ssize_t s, i, j, k, p
    cdef double best, v, piv, l, tmp, mant
    cdef int ex
    cdef i64 expo
    cdef double sgn
    mantissa_arr = np.ones(k_samples, dtype=np.float64)
    exponent_arr = np.zeros(k_samples, dtype=np.int64)
    sign_arr = np.ones(k_samples, dtype=np.float64)
    cdef double[::1] mantissa = mantissa_arr
    cdef i64[::1] exponent = exponent_arr
    cdef double[::1] sign = sign_arr
    if n == 0 or k_samples == 0:
        return mantissa_arr, exponent_arr, sign_arr
    cdef double *m = <double *> malloc(n * n * sizeof(double))
    if m == NULL:
        raise MemoryError()
    with nogil:
        for s in range(k_samples):
            memcpy(m, &a[s, 0, 0], n * n * sizeof(double))
            mant = 1.0
            expo = 0
            sgn = 1.0
            for k in range(n):
                p = k
                best = fabs(m[k * n + k])
                for i in range(k + 1, n):
                    v = fabs(m[i * n + k])
                    if v > best:
                        best = v
                        p = i
                if best == 0.0:
                    mant = 0.0
                    expo = 0
                    sgn = 0.0
                    break
                if p != k:
                    for j in range(n):
                        tmp = m[k * n + j]
                        m[k * n + j] = m[p * n + j]
                        m[p * n + j] = tmp
                    sgn = -sgn
                piv = m[k * n + k]
                if piv < 0.0:
                    sgn = -sgn
                mant = frexp(mant * best, &ex)
                expo += ex
                for i in range(k + 1, n):
                    l = m[i * n + k] / piv
                    for j in range(k + 1, n):
                        m[i * n + j] = m[i * n + j] - l * m[k * n + j]
            mantissa[s] = mant
            exponent[s] = expo
            sign[s] = sgn
    free(m)
    return mantissa_arr, exponent_arr, sign_arr


# ------------------------------------------------------ mixed discriminants

def mixdisc_inclusion_exclusion(const double[:, :, ::1] q):
    """sum over subsets S of (-1)**(n-|S|) det(sum_{i in S} q[i]), Gray-code order."""
    cdef Py_ssize_t n = q.shape[0], nn, i, j, b
    cdef unsigned long long k, total_subsets
    cdef int size = 0
    cdef double d, acc = 0.0
    if n == 0:
        return 1.0
    nn = n * n
    cdef double *run = <double *> malloc(nn * sizeof(double))
    cdef double *work = <double *> malloc(nn * sizeof(double))
    if run == NULL or work == NULL:
        free(run)
        free(work)
        raise MemoryError()
    with nogil:
        for i in range(nn):
            run[i] = 0.0
        total_subsets = (<unsigned long long> 1) << n
        for k in range(1, total_subsets):
            b = __builtin_ctzll(k)
            if ((k ^ (k >> 1)) >> b) & 1:
                size += 1
                for i in range(n):
                    for j in range(n):
                        run[i * n + j] += q[b, i, j]
            else:
                size -= 1
                for i in range(n):
                    for j in range(n):
                        run[i * n + j] -= q[b, i, j]
            memcpy(work, run, nn * sizeof(double))
            d = _lu_det_inplace(work, n)
            if (n - size) & 1:
                acc -= d
            else:
                acc += d
    free(run)
    free(work)
    return acc
