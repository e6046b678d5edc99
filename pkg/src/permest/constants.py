"""Log-moments of a squared standard normal, by quadrature.

``C0 = E ln x^2 = (4/sqrt(2 pi)) int_0^inf ln(t) exp(-t^2/2) dt``,
``c0 = exp(C0)`` and ``L2 = E ln^2 x^2 = (8/sqrt(2 pi)) int_0^inf ln^2(t) exp(-t^2/2) dt``.

Both integrals are split at ``t = 1``. On ``[0, 1]`` the substitution
``t = exp(-s)`` removes the logarithmic singularity, leaving a smooth,
exponentially decaying integrand on ``[0, inf)``.
"""
from __future__ import annotations

import math
import threading
from dataclasses import asdict, dataclass

import numpy as np
from scipy import integrate

from .errors import BadSpectrum, QuadratureFailure

QUAD_TOL = 1e-9
_NORM = 1.0 / math.sqrt(2.0 * math.pi)


def _log_moment_integral(power: int) -> tuple[float, float]:
    """``int_0^inf ln(t)**power exp(-t^2/2) dt`` and its error estimate."""

    def near(s):
        # t = exp(-s), dt = -exp(-s) ds, ln t = -s
        return (-s) ** power * math.exp(-s - 0.5 * math.exp(-2.0 * s))

    def far(t):
        return math.log(t) ** power * math.exp(-0.5 * t * t)

    v1, e1 = integrate.quad(near, 0.0, math.inf, epsabs=1e-14, epsrel=1e-13, limit=200)
    v2, e2 = integrate.quad(far, 1.0, math.inf, epsabs=1e-14, epsrel=1e-13, limit=200)
    return v1 + v2, e1 + e2


def compute_C0() -> float:
    """``E ln x^2`` for standard normal ``x`` (about -1.2704)."""
    value, err = _log_moment_integral(1)
    err *= 4.0 * _NORM
    if err > QUAD_TOL:
        raise QuadratureFailure(f"C0 quadrature error estimate {err:.3g} exceeds {QUAD_TOL}")
    return 4.0 * _NORM * value


def compute_L2() -> float:
    """``E (ln x^2)^2`` for standard normal ``x`` (about 6.5486)."""
    value, err = _log_moment_integral(2)
    err *= 8.0 * _NORM
    if err > QUAD_TOL:
        raise QuadratureFailure(f"L2 quadrature error estimate {err:.3g} exceeds {QUAD_TOL}")
    return 8.0 * _NORM * value


@dataclass(frozen=True)
class AnalyticConstants:
    C0: float
    c0: float
    L2: float
    quadrature_error_estimate: float

    def to_dict(self):
        return asdict(self)


_lock = threading.Lock()
_cached: AnalyticConstants | None = None


def analytic_constants() -> AnalyticConstants:
    """Computed on first use, then cached (thread-safe, computed once)."""
    global _cached
    if _cached is None:
        with _lock:
            if _cached is None:
                v1, e1 = _log_moment_integral(1)
                v2, e2 = _log_moment_integral(2)
                err = max(4.0 * _NORM * e1, 8.0 * _NORM * e2)
                if err > QUAD_TOL:
                    raise QuadratureFailure(f"quadrature error estimate {err:.3g} exceeds {QUAD_TOL}")
                c0_log = 4.0 * _NORM * v1
                _cached = AnalyticConstants(
                    C0=c0_log, c0=math.exp(c0_log), L2=8.0 * _NORM * v2,
                    quadrature_error_estimate=err,
                )
    return _cached


@dataclass(frozen=True)
class LogMomentCheck:
    """Monte-Carlo log-moments of ``q(x) = sum_i lambda_i x_i^2``."""

    mean_log: float
    stderr_log: float
    mean_log2: float
    stderr_log2: float
    num_samples: int
    within_bounds: bool


def verify_logmoment_bounds(spectrum, num_samples: int = 10**6, seed: int = 0,
                            num_se: float = 4.0) -> LogMomentCheck:
    """Estimate ``E ln q`` and ``E ln^2 q`` for a PSD form with ``E q = 1``.

    ``spectrum`` holds the eigenvalues of ``q``: non-negative, summing to 1.
    ``within_bounds`` reports whether ``C0 <= E ln q <= 0`` and
    ``0 <= E ln^2 q <= 8`` hold once widened by ``num_se`` standard errors.
    """
    from .sampler import RngStream

    lam = np.asarray(spectrum, dtype=np.float64)
    if lam.ndim != 1 or lam.size == 0:
        raise BadSpectrum("spectrum must be a non-empty list")
    if np.any(~np.isfinite(lam)) or np.any(lam < 0):
        raise BadSpectrum("spectrum entries must be finite and non-negative")
    if abs(math.fsum(lam) - 1.0) > 1e-9:
        raise BadSpectrum(f"spectrum must sum to 1, sums to {math.fsum(lam)!r}")

    stream = RngStream(seed)
    chunk = max(1, (1 << 20) // lam.size)
    s1 = []
    s2 = []
    done = 0
    while done < num_samples:
        k = min(chunk, num_samples - done)
        x = stream.gaussian_array((k, lam.size))
        lq = np.log((x * x) @ lam)
        s1.append(lq)
        s2.append(lq * lq)
        done += k
    l1 = np.concatenate(s1)
    l2 = np.concatenate(s2)
    m1, m2 = float(l1.mean()), float(l2.mean())
    se1 = float(l1.std(ddof=1)) / math.sqrt(num_samples)
    se2 = float(l2.std(ddof=1)) / math.sqrt(num_samples)
    c = analytic_constants().C0
    ok = (c - num_se * se1 <= m1 <= num_se * se1) and (-num_se * se2 <= m2 <= 8.0 + num_se * se2)
    return LogMomentCheck(m1, se1, m2, se2, num_samples, bool(ok))
