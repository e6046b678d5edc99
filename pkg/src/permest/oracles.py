"""Exact reference values for small instances.

All methods here are exponential time and guarded by size limits. Integer
matrices are summed in exact int64 arithmetic whenever a simple a-priori
bound shows no intermediate can overflow; otherwise they fall back to
floating point with a logged warning.
"""
from __future__ import annotations

import itertools
import logging
import math
from dataclasses import dataclass

import numpy as np

from ._backend import kernels
from .errors import Disconnected, TooLarge
from .linalg import PsdTuple, as_square_matrix

logger = logging.getLogger(__name__)

MAX_NAIVE_PERMANENT = 10
MAX_RYSER = 24
MAX_MIXDISC_NAIVE = 7
MAX_MIXDISC_IE = 20
MAX_TREE_EDGES = 20

_INT64_MAX = (1 << 63) - 1


@dataclass(frozen=True)
class ExactValue:
    value: float
    method: str  # naive-permutation | ryser | inclusion-exclusion | tree-enumeration

    def __float__(self):
        return float(self.value)

    @property
    def log_value(self) -> float:
        """``ln(value)``; ``-inf`` for zero. Only meaningful for non-negative values."""
        v = self.value
        if v <= 0:
            return -math.inf
        if isinstance(v, int):
            # exact for big integers, where float(v) would overflow
            bits = v.bit_length()
            if bits > 1000:
                shift = bits - 60
                return math.log(v >> shift) + shift * math.log(2.0)
        return math.log(v)


def _integer_view(a: np.ndarray):
    """``a`` as int64 if every entry is an integer of modest size, else None."""
    if np.all(a == np.round(a)) and np.all(np.abs(a) < 2.0**52):
        return np.ascontiguousarray(a.astype(np.int64))
    return None


def _fits_int64(row_abs_sums, extra_factor: int = 1) -> bool:
    bound = extra_factor
    for s in row_abs_sums:
        bound *= int(s)
        if bound > _INT64_MAX:
            return False
    return True


def permanent_naive(a) -> ExactValue:
    """Permanent as the sum over all n! permutations (n <= 10)."""
    a = as_square_matrix(a)
    n = a.shape[0]
    if n > MAX_NAIVE_PERMANENT:
        raise TooLarge(f"naive permanent limited to n <= {MAX_NAIVE_PERMANENT}, got {n}")
    ia = _integer_view(a)
    if ia is not None:
        if _fits_int64(np.abs(ia).sum(axis=1)):
            return ExactValue(int(kernels.naive_permanent_int(ia)), "naive-permutation")
        logger.warning("integer permanent may exceed int64; using floating point")
    return ExactValue(float(kernels.naive_permanent_float(a)), "naive-permutation")


def permanent_ryser(a) -> ExactValue:
    """Permanent by Ryser's inclusion-exclusion formula (n <= 24)."""
    a = as_square_matrix(a)
    n = a.shape[0]
    if n > MAX_RYSER:
        raise TooLarge(f"Ryser permanent limited to n <= {MAX_RYSER}, got {n}")
    ia = _integer_view(a)
    if ia is not None:
        if _fits_int64(np.abs(ia).sum(axis=1), extra_factor=1 << n):
            return ExactValue(int(kernels.ryser_int(ia)), "ryser")
        logger.warning("integer permanent may exceed int64; using floating point")
    return ExactValue(float(kernels.ryser_float(a)), "ryser")


def _as_psd_tuple(q) -> PsdTuple:
    return q if isinstance(q, PsdTuple) else PsdTuple.from_matrices(q)


def mixdisc_naive(q) -> ExactValue:
    """Mixed discriminant by full multilinear expansion (n <= 7).

    Expanding ``det(sum_i t_i Q_i)`` column by column, the coefficient of
    ``t_1 ... t_n`` collects one term per bijection ``sigma`` from columns to
    matrices: ``D = sum_sigma det[Q_sigma(1)[:, 1], ..., Q_sigma(n)[:, n]]``.
    """
    q = _as_psd_tuple(q)
    n = q.n
    if n > MAX_MIXDISC_NAIVE:
        raise TooLarge(f"naive mixed discriminant limited to n <= {MAX_MIXDISC_NAIVE}, got {n}")
    stack = q.stack()
    cols = np.arange(n)
    total = []
    for sigma in itertools.permutations(range(n)):
        # column j of the term comes from matrix sigma[j]
        m = np.ascontiguousarray(stack[list(sigma), :, cols].T)
        total.append(kernels.lu_det(m))
    return ExactValue(math.fsum(total), "naive-permutation")


def mixdisc_inclusion_exclusion(q) -> ExactValue:
    """Mixed discriminant as ``sum_S (-1)^(n-|S|) det(sum_{i in S} Q_i)`` (n <= 20).

    The empty subset contributes the determinant of the n x n zero matrix,
    which is 0 for n >= 1, so it is skipped. The alternating sum cancels
    heavily: relative accuracy is about 1e-12 at n = 10 and 1e-9 at n = 14.
    """
    q = _as_psd_tuple(q)
    n = q.n
    if n > MAX_MIXDISC_IE:
        raise TooLarge(f"inclusion-exclusion limited to n <= {MAX_MIXDISC_IE}, got {n}")
    return ExactValue(float(kernels.mixdisc_inclusion_exclusion(q.stack())), "inclusion-exclusion")


def count_rainbow_trees_brute(graph) -> ExactValue:
    """Count spanning trees whose edges all carry different colors.

    Enumerates every (n-1)-subset of edges. ``graph`` is a
    :class:`permest.applications.ColoredGraph`.
    """
    m = len(graph.edges)
    if m > MAX_TREE_EDGES:
        raise TooLarge(f"tree enumeration limited to {MAX_TREE_EDGES} edges, got {m}")
    if not graph.is_connected():
        raise Disconnected("graph is not connected")
    n = graph.num_vertices
    count = 0
    for subset in itertools.combinations(range(m), n - 1):
        if len({graph.colors[e] for e in subset}) != n - 1:
            continue
        parent = list(range(n))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for e in subset:
            ru, rv = find(graph.edges[e][0]), find(graph.edges[e][1])
            if ru == rv:
                break
            parent[ru] = rv
        else:
            count += 1
    return ExactValue(count, "tree-enumeration")


def kron_identity(a, k: int) -> np.ndarray:
    """Block-diagonal ``A (x) I_k``: k diagonal copies of ``a``.

    ``per(A (x) I_k) = per(A)**k``.
    """
    a = as_square_matrix(a)
    return np.kron(np.eye(k), a)
