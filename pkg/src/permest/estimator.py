"""Randomized squared-determinant estimators.

Each sample is ``alpha = det(M)**2`` for a random matrix ``M``:

* mixed discriminant: factor every ``Q_i = T_i T_i^T`` once, draw Gaussian
  ``u_1, ..., u_n`` and use the columns ``T_i u_i``;
* permanent: ``M[i, j] = u_ij * sqrt(a_ij)`` with ``u_ij`` Gaussian or, for the
  Godsil-Gutman baseline, uniform signs.

``alpha`` is unbiased for the target and is kept in log space throughout
(``-inf`` encodes ``alpha = 0``).

Sampling is split into fixed chunks; chunk ``c`` draws from
``RngStream(seed, c)``. The chunk size depends only on ``n``, so the estimate
list is the same for any number of workers.
"""
from __future__ import annotations

import enum
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .constants import analytic_constants
from .errors import BadParameter, DimensionMismatch, NegativeEntry
from .linalg import PsdTuple, as_square_matrix, batch_log_abs_det, factor_psd
from .sampler import RngStream

_CHUNK_BUDGET = 1 << 22  # doubles per chunk of sample matrices
_MAX_CHUNK = 4096


class EstimatorKind(str, enum.Enum):
    GAUSSIAN_MIXDISC = "gaussian-mixdisc"
    GAUSSIAN_PERMANENT = "gaussian-permanent"
    BINARY_PERMANENT = "binary-permanent"


@dataclass(frozen=True)
class LogEstimate:
    """``alpha = exp(log_value) >= 0``; ``alpha = 0`` is ``log_value = -inf``."""

    log_value: float

    @property
    def value(self) -> float:
        return math.exp(self.log_value) if self.log_value < 709.0 else math.inf


def samples_per_stream(n: int) -> int:
    return max(1, min(_MAX_CHUNK, _CHUNK_BUDGET // max(1, n * n)))


def log_mean_exp(logs) -> float:
    """``log(mean(exp(logs)))`` without overflow; ``-inf`` if every entry is."""
    logs = np.asarray(logs, dtype=np.float64)
    if logs.size == 0:
        raise ValueError("empty sample")
    top = float(np.max(logs))
    if top == -math.inf:
        return -math.inf
    return top + math.log(math.fsum(np.exp(logs - top))) - math.log(logs.size)


def mean_and_stderr(logs) -> tuple[float, float]:
    """Sample mean and its standard error of ``exp(logs)``, in linear scale.

    Both are ``inf`` when the mean is not representable as a double.
    """
    logs = np.asarray(logs, dtype=np.float64)
    top = float(np.max(logs))
    if top == -math.inf:
        return 0.0, 0.0
    x = np.exp(logs - top)
    mean = math.fsum(x) / x.size
    var = math.fsum((x - mean) ** 2) / max(1, x.size - 1)
    if top >= 709.0:
        return math.inf, math.inf
    scale = math.exp(top)
    return mean * scale, math.sqrt(var / x.size) * scale


# ----------------------------------------------------------------- sampling

def _permanent_logs(root_a: np.ndarray, u: np.ndarray) -> np.ndarray:
    logs, _ = batch_log_abs_det(u * root_a)
    return 2.0 * logs


def _mixdisc_logs(factors: np.ndarray, u: np.ndarray) -> np.ndarray:
    # m[s, a, i] = sum_b T_i[a, b] u[s, i, b], accumulated in a fixed order over b
    k, n = u.shape[0], factors.shape[0]
    m = np.zeros((k, n, n))
    for b in range(n):
        m += u[:, None, :, b] * factors[:, :, b].T[None, :, :]
    logs, _ = batch_log_abs_det(m)
    return 2.0 * logs


def _check_factors(factors) -> np.ndarray:
    f = np.ascontiguousarray(np.asarray(factors, dtype=np.float64))
    n = f.shape[0] if f.ndim == 3 else -1
    if f.ndim != 3 or f.shape != (n, n, n):
        raise DimensionMismatch(f"expected n factors of shape (n, n), got array of shape {f.shape}")
    return f


def _check_permanent_input(a) -> np.ndarray:
    a = as_square_matrix(a)
    if np.any(a < 0):
        raise NegativeEntry("permanent estimator needs a non-negative matrix")
    return a


def estimate_mixdisc_once(factors, stream: RngStream) -> LogEstimate:
    """One draw of ``det[T_1 u_1, ..., T_n u_n]**2``.

    ``factors`` holds the ``T_i`` from :func:`permest.linalg.factor_psd`.
    Row ``i`` of the Gaussian draw is ``u_i``.
    """
    f = _check_factors(factors)
    n = f.shape[0]
    u = stream.gaussian_array((1, n, n))
    return LogEstimate(float(_mixdisc_logs(f, u)[0]))


def estimate_permanent_once(a, stream: RngStream,
                            kind: EstimatorKind = EstimatorKind.GAUSSIAN_PERMANENT) -> LogEstimate:
    """One draw of ``det(B)**2`` with ``b_ij = u_ij sqrt(a_ij)``."""
    a = _check_permanent_input(a)
    kind = EstimatorKind(kind)
    n = a.shape[0]
    if kind is EstimatorKind.GAUSSIAN_PERMANENT:
        u = stream.gaussian_array((1, n, n))
    elif kind is EstimatorKind.BINARY_PERMANENT:
        u = stream.rademacher_array((1, n, n))
    else:
        raise BadParameter(f"{kind.value} is not a permanent estimator")
    return LogEstimate(float(_permanent_logs(np.sqrt(a), u)[0]))


@dataclass
class EstimateRun:
    """Configuration and results of one Monte-Carlo estimation.

    ``estimates`` holds the ``log alpha`` of every sample in sample order.
    Aggregates are log values too.
    """

    kind: EstimatorKind
    seed: int
    num_samples: int
    num_median_blocks: int
    estimates: np.ndarray = field(repr=False)
    aggregate_mean: float
    aggregate_median_of_block_means: float
    mean: float
    standard_error: float

    @property
    def n_zero(self) -> int:
        return int(np.count_nonzero(self.estimates == -math.inf))

    def frequency(self, predicate) -> float:
        """Fraction of samples whose log value satisfies ``predicate``."""
        return float(np.count_nonzero(predicate(self.estimates))) / self.num_samples


def median_of_block_means(logs, num_blocks: int) -> float:
    """Median over contiguous, equal blocks of the per-block log mean."""
    logs = np.asarray(logs)
    if num_blocks < 1 or num_blocks % 2 == 0:
        raise BadParameter("num_median_blocks must be a positive odd integer")
    if logs.size % num_blocks:
        raise BadParameter("num_samples must be divisible by num_median_blocks")
    size = logs.size // num_blocks
    block_logs = sorted(log_mean_exp(logs[b * size:(b + 1) * size]) for b in range(num_blocks))
    return block_logs[num_blocks // 2]


def run_estimate(instance, kind, seed: int, num_samples: int, num_median_blocks: int = 1,
                 perturb_eps: float = 0.0, workers: int = 1) -> EstimateRun:
    """Draw ``num_samples`` estimates and aggregate them.

    ``instance`` is a non-negative matrix for the permanent kinds and a
    :class:`PsdTuple` (or list of PSD matrices) for ``gaussian-mixdisc``.
    PSD factorizations happen once, before sampling.
    """
    kind = EstimatorKind(kind)
    if num_samples < 1:
        raise BadParameter("num_samples must be positive")
    if num_median_blocks < 1 or num_median_blocks % 2 == 0:
        raise BadParameter("num_median_blocks must be a positive odd integer")
    if num_samples % num_median_blocks:
        raise BadParameter("num_samples must be divisible by num_median_blocks")
    if workers < 1:
        raise BadParameter("workers must be positive")

    if kind is EstimatorKind.GAUSSIAN_MIXDISC:
        q = instance if isinstance(instance, PsdTuple) else PsdTuple.from_matrices(instance, perturb_eps)
        n = q.n
        factors = np.ascontiguousarray(np.stack([factor_psd(m, perturb_eps) for m in q.matrices]))

        def draw(stream, k):
            return _mixdisc_logs(factors, stream.gaussian_array((k, n, n)))
    else:
        if isinstance(instance, PsdTuple):
            raise BadParameter(f"{kind.value} needs a matrix, not a PSD tuple")
        a = _check_permanent_input(instance)
        n = a.shape[0]
        root_a = np.sqrt(a)
        binary = kind is EstimatorKind.BINARY_PERMANENT

        def draw(stream, k):
            shape = (k, n, n)
            u = stream.rademacher_array(shape) if binary else stream.gaussian_array(shape)
            return _permanent_logs(root_a, u)

    chunk = samples_per_stream(n)
    spans = [(c, min(chunk, num_samples - c * chunk)) for c in range(-(-num_samples // chunk))]

    def work(span):
        c, k = span
        return draw(RngStream(seed, c), k)

    if workers == 1 or len(spans) == 1:
        parts = [work(s) for s in spans]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(work, spans))
    logs = np.concatenate(parts)
    mean, se = mean_and_stderr(logs)
    return EstimateRun(
        kind=kind,
        seed=seed,
        num_samples=num_samples,
        num_median_blocks=num_median_blocks,
        estimates=logs,
        aggregate_mean=log_mean_exp(logs),
        aggregate_median_of_block_means=median_of_block_means(logs, num_median_blocks),
        mean=mean,
        standard_error=se,
    )


# --------------------------------------------------------------- tail bounds

def tail_bound_upper(c: float) -> float:
    """Bound on ``P(alpha >= c * target)``: ``1/c`` (Markov)."""
    if not c > 1:
        raise BadParameter(f"C must exceed 1, got {c}")
    return 1.0 / c


def tail_bound_lower(epsilon: float, n: int) -> tuple[float, float]:
    """Threshold and bound for ``P(alpha <= (epsilon * c0)**n * target)``.

    Returns ``(n * (ln epsilon + ln c0), min(1, 8 / (n ln^2 epsilon)))``; the
    first entry is the log of the threshold factor.
    """
    if not 0 < epsilon < 1:
        raise BadParameter(f"epsilon must lie in (0, 1), got {epsilon}")
    if int(n) != n or n < 1:
        raise BadParameter(f"n must be a positive integer, got {n}")
    log_eps = math.log(epsilon)
    threshold = n * (log_eps + analytic_constants().C0)
    return threshold, min(1.0, 8.0 / (n * log_eps * log_eps))
