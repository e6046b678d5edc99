"""Dense real linear algebra: validation, PSD factorization and determinants.

Tolerance policy (floating point only; exact arithmetic is not assumed):

* ``SYM_TOL``: a matrix is symmetric when ``max|Q - Q^T| <= SYM_TOL * (1 + max|Q|)``.
* ``PSD_TOL``: a matrix is PSD when its smallest eigenvalue is at least
  ``-PSD_TOL`` times its largest absolute eigenvalue. Cholesky pivots within
  ``PSD_TOL * scale`` of zero are treated as zero and their column skipped.
* ``FACT_TOL``: ``factor_psd`` guarantees
  ``max|T T^T - Q - eps I| <= FACT_TOL * (1 + max|Q|)``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from ._backend import kernels
from .errors import DimensionMismatch, InvalidMatrix, NotPsd, NotSymmetric

SYM_TOL = 1e-9
PSD_TOL = 1e-9
FACT_TOL = 1e-9

_LN2 = math.log(2.0)


def as_square_matrix(a, *, name="matrix") -> np.ndarray:
    """Validate ``a`` as a finite n x n real matrix.

    Returns a C-contiguous float64 copy marked read-only.
    """
    try:
        arr = np.array(a, dtype=np.float64, copy=True)
    except (TypeError, ValueError) as exc:
        raise InvalidMatrix(f"{name} is not a real array: {exc}") from None
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
        raise InvalidMatrix(f"{name} must be square, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise InvalidMatrix(f"{name} has NaN or infinite entries")
    arr = np.ascontiguousarray(arr)
    arr.flags.writeable = False
    return arr


def _scale(q: np.ndarray) -> float:
    return float(np.max(np.abs(q))) if q.size else 0.0


def check_symmetric(q: np.ndarray, *, name="matrix") -> None:
    tol = SYM_TOL * (1.0 + _scale(q))
    if q.size and float(np.max(np.abs(q - q.T))) > tol:
        raise NotSymmetric(f"{name} is not symmetric within {tol:.3g}")


def check_psd(q: np.ndarray, *, name="matrix") -> None:
    """Eigenvalue test: ``lambda_min >= -PSD_TOL * max|lambda|``."""
    if not q.size:
        return
    eig = np.linalg.eigvalsh(q)
    top = float(np.max(np.abs(eig)))
    if eig[0] < -PSD_TOL * top:
        raise NotPsd(
            f"{name} is not positive semidefinite (smallest eigenvalue {eig[0]:.6g}); "
            "a positive perturb_eps shifts it by eps*I"
        )


@dataclass(frozen=True)
class PsdTuple:
    """An ordered tuple of n symmetric PSD n x n matrices.

    Build it with :meth:`from_matrices`, which enforces the invariants.
    """

    matrices: tuple

    @property
    def n(self) -> int:
        return len(self.matrices)

    def stack(self) -> np.ndarray:
        """The tuple as a contiguous ``(n, n, n)`` array."""
        if not self.matrices:
            return np.zeros((0, 0, 0))
        return np.ascontiguousarray(np.stack(self.matrices))

    @classmethod
    def from_matrices(cls, matrices: Sequence, perturb_eps: float = 0.0) -> "PsdTuple":
        mats = tuple(as_square_matrix(m, name=f"matrix {i}") for i, m in enumerate(matrices))
        n = len(mats)
        if n == 0:
            raise DimensionMismatch("a PSD tuple needs at least one matrix")
        for i, m in enumerate(mats):
            if m.shape != (n, n):
                raise DimensionMismatch(
                    f"matrix {i} has shape {m.shape}, expected {(n, n)} for a tuple of {n}"
                )
            check_symmetric(m, name=f"matrix {i}")
            check_psd(m + perturb_eps * np.eye(n), name=f"matrix {i}")
        return cls(mats)

    @classmethod
    def diagonal(cls, a) -> "PsdTuple":
        """``Q_i = diag(row i of a)``; its mixed discriminant is ``per a``."""
        a = as_square_matrix(a)
        return cls.from_matrices([np.diag(row) for row in a])

    @classmethod
    def rank_one(cls, vectors) -> "PsdTuple":
        """``Q_i = v_i v_i^T`` for the rows ``v_i`` of ``vectors``."""
        v = as_square_matrix(vectors)
        return cls.from_matrices([np.outer(row, row) for row in v])


def factor_psd(q, perturb_eps: float = 0.0) -> np.ndarray:
    """Lower-triangular ``T`` with ``T T^T = Q + perturb_eps * I``.

    Outer-product Cholesky. A pivot within ``PSD_TOL * scale`` of zero is
    clamped to zero and its column left empty (semidefinite input); the
    remaining entries of that column must then be negligible as well.

    Raises
    ------
    NotSymmetric
        If ``q`` fails the symmetry check.
    NotPsd
        If a pivot is below ``-PSD_TOL * scale`` after perturbation.
    """
    if perturb_eps < 0 or not math.isfinite(perturb_eps):
        raise ValueError("perturb_eps must be a non-negative finite number")
    q = as_square_matrix(q)
    check_symmetric(q)
    n = q.shape[0]
    work = 0.5 * (q + q.T) + perturb_eps * np.eye(n)
    scale = _scale(work)
    zero_tol = PSD_TOL * scale
    off_tol = math.sqrt(PSD_TOL) * scale
    t = np.zeros((n, n))
    for k in range(n):
        pivot = work[k, k]
        if pivot < -zero_tol:
            raise NotPsd(f"negative pivot {pivot:.6g} at column {k}; matrix is not PSD")
        if pivot <= zero_tol:
            if n > k + 1 and float(np.max(np.abs(work[k + 1:, k]))) > off_tol:
                raise NotPsd(f"zero pivot at column {k} with non-zero column below it")
            continue
        root = math.sqrt(pivot)
        col = work[k:, k] / root
        t[k:, k] = col
        work[k + 1:, k + 1:] -= np.outer(col[1:], col[1:])
    return t


def det(m) -> float:
    """Determinant via partial-pivoting LU. Singular input gives 0.0."""
    m = as_square_matrix(m)
    return float(kernels.lu_det(m))


def _parts_to_log(mant, expo):
    with np.errstate(divide="ignore"):
        return np.log(mant) + expo * _LN2


def batch_log_abs_det(stack) -> tuple[np.ndarray, np.ndarray]:
    """``log|det|`` and sign for each matrix of a ``(k, n, n)`` stack.

    Singular entries get ``-inf`` and sign 0.
    """
    a = np.ascontiguousarray(stack, dtype=np.float64)
    if a.ndim != 3 or a.shape[1] != a.shape[2]:
        raise DimensionMismatch(f"expected a (k, n, n) stack, got shape {a.shape}")
    mant, expo, sign = kernels.batch_logdet_parts(a)
    return _parts_to_log(np.asarray(mant), np.asarray(expo)), np.asarray(sign)


def log_abs_det(m) -> tuple[float, int]:
    """Overflow-safe determinant: ``(log|det M|, sign)``.

    ``sign`` is 0 for a singular matrix, with ``log_magnitude = -inf``.

    >>> log_abs_det([[1.0, 2.0], [3.0, 4.0]])[1]
    -1
    """
    m = as_square_matrix(m)
    logs, signs = batch_log_abs_det(m[None])
    return float(logs[0]), int(signs[0])
