"""Command-line entry point.

Examples::

    permest --mode constants
    permest --mode permanent --input a.txt --seed 7 --samples 100000 --oracle on
    permest --mode trees --input graph.txt --seed 1 --report out.json

Every run prints a JSON report (and writes it to ``--report`` if given).
On failure the report is a JSON error object and the exit status is 1.
"""
from __future__ import annotations

import argparse
import logging
import math
import sys
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import __version__
from .applications import (
    ColoredGraph,
    color_class_matrices,
    count_rainbow_bases_exact,
    incidence_matrix,
)
from .constants import analytic_constants
from .errors import BadParameter, PermestError, TooLarge
from .estimator import EstimatorKind, run_estimate, tail_bound_lower, tail_bound_upper
from .io import (
    parse_matrix_file,
    parse_psd_tuple_file,
    read_graph_file,
    read_vector_family_file,
)
from .oracles import (
    MAX_MIXDISC_IE,
    MAX_RYSER,
    MAX_TREE_EDGES,
    ExactValue,
    count_rainbow_trees_brute,
    mixdisc_inclusion_exclusion,
    permanent_ryser,
)
from .report import TIMESTAMP_KEY, dumps, log_number, timestamp

logger = logging.getLogger(__name__)

MODES = ("permanent", "mixdisc", "trees", "constants", "verify-bounds")
UPPER_C = (2.0, 4.0, 8.0)
LOWER_EPS = (math.exp(-1.0), math.exp(-2.0))
WINDOW_LOW_BASE = 0.28
WINDOW_HIGH = 3.0


@dataclass
class RunConfig:
    mode: str
    input_path: str | None = None
    seed: int | None = None
    num_samples: int = 10_000
    num_median_blocks: int = 1
    estimator_kind: str = "gaussian"
    perturb_eps: float = 0.0
    oracle: str = "auto"
    report_path: str | None = None
    workers: int = 1

    def validate(self):
        if self.mode not in MODES:
            raise BadParameter(f"unknown mode {self.mode!r}")
        if self.oracle not in ("on", "off", "auto"):
            raise BadParameter("oracle must be on, off or auto")
        if self.estimator_kind not in ("gaussian", "binary"):
            raise BadParameter("kind must be gaussian or binary")
        if self.mode == "constants":
            return
        if self.input_path is None:
            raise BadParameter(f"mode {self.mode} needs --input")
        if self.seed is None:
            raise BadParameter("an explicit --seed is required")
        if self.estimator_kind == "binary" and self.mode not in ("permanent", "verify-bounds"):
            raise BadParameter("the binary estimator applies to permanents only")
        if self.perturb_eps < 0 or not math.isfinite(self.perturb_eps):
            raise BadParameter("perturb_eps must be non-negative")

    def echo(self) -> dict:
        # workers is omitted on purpose: it never changes results
        return {
            "mode": self.mode,
            "input_path": self.input_path,
            "seed": self.seed,
            "num_samples": self.num_samples,
            "num_median_blocks": self.num_median_blocks,
            "estimator_kind": self.estimator_kind,
            "perturb_eps": self.perturb_eps,
            "oracle": self.oracle,
        }


def _oracle_active(config: RunConfig, size: int, limit: int, what: str) -> bool:
    if config.oracle == "off":
        return False
    if size <= limit:
        return True
    if config.oracle == "on":
        raise TooLarge(f"exact oracle unavailable: {what} {size} exceeds {limit}")
    return False


def _load_instance(config: RunConfig):
    """Returns ``(instance, kind, descriptor, exact_fn, oracle_size, oracle_limit, what)``."""
    path = config.input_path
    mode = config.mode
    if mode == "verify-bounds":
        mode = "mixdisc" if Path(path).suffix.lower() == ".json" else "permanent"
    if mode == "permanent":
        a = parse_matrix_file(path, nonnegative=True)
        kind = (EstimatorKind.BINARY_PERMANENT if config.estimator_kind == "binary"
                else EstimatorKind.GAUSSIAN_PERMANENT)
        desc = {"type": "matrix", "n": a.shape[0]}
        return a, kind, desc, lambda: permanent_ryser(a), a.shape[0], MAX_RYSER, "n"
    if mode == "mixdisc":
        q = parse_psd_tuple_file(path, perturb_eps=config.perturb_eps)
        desc = {"type": "psd-tuple", "n": q.n}
        return (q, EstimatorKind.GAUSSIAN_MIXDISC, desc,
                lambda: mixdisc_inclusion_exclusion(q), q.n, MAX_MIXDISC_IE, "n")
    # trees
    if Path(path).suffix.lower() == ".json":
        family = read_vector_family_file(path)
        desc = {"type": "vector-family", "n": family.dimension, "m": family.vectors.shape[1]}
        return (color_class_matrices(family), EstimatorKind.GAUSSIAN_MIXDISC, desc,
                lambda: count_rainbow_bases_exact(family), family.dimension, MAX_MIXDISC_IE, "n")
    graph: ColoredGraph = read_graph_file(path)
    family = incidence_matrix(graph)
    desc = {"type": "graph", "num_vertices": graph.num_vertices, "m": len(graph.edges),
            "n": family.dimension}
    return (color_class_matrices(family), EstimatorKind.GAUSSIAN_MIXDISC, desc,
            lambda: count_rainbow_trees_brute(graph), len(graph.edges), MAX_TREE_EDGES, "edge count")


def _exact_entry(exact: ExactValue) -> dict:
    entry = {"method": exact.method}
    if isinstance(exact.value, int):
        entry["value"] = exact.value if abs(exact.value) < 2**63 else float(exact.value)
    else:
        entry["value"] = float(exact.value)
    entry["log_value"] = exact.log_value
    return entry


def tail_rows(logs: np.ndarray, log_exact: float, n: int) -> list:
    """Theoretical bound vs empirical frequency for each tail threshold."""
    count = logs.size
    rows = []
    for c in UPPER_C:
        freq = np.count_nonzero(logs >= math.log(c) + log_exact) / count
        rows.append({
            "tail": "upper",
            "threshold": f"alpha >= {c:g} * exact",
            "parameter": c,
            "theoretical_bound": tail_bound_upper(c),
            "empirical_frequency": freq,
            "num_samples": count,
        })
    for eps in LOWER_EPS:
        log_factor, bound = tail_bound_lower(eps, n)
        freq = np.count_nonzero(logs <= log_factor + log_exact) / count
        rows.append({
            "tail": "lower",
            "threshold": f"alpha <= (epsilon * c0)^{n} * exact, epsilon = exp({math.log(eps):g})",
            "parameter": eps,
            "log_threshold_factor": log_factor,
            "theoretical_bound": bound,
            "empirical_frequency": freq,
            "num_samples": count,
        })
    return rows


def window_frequency(logs: np.ndarray, log_exact: float, n: int) -> float:
    """Fraction of samples with ``0.28**n * exact <= alpha <= 3 * exact``."""
    lo = n * math.log(WINDOW_LOW_BASE) + log_exact
    hi = math.log(WINDOW_HIGH) + log_exact
    return float(np.count_nonzero((logs >= lo) & (logs <= hi))) / logs.size


def execute(config: RunConfig) -> dict:
    """Run the configured pipeline and return the report dictionary.

    Errors propagate as :class:`PermestError` subclasses; :func:`main` turns
    them into JSON error objects.
    """
    config.validate()
    if config.mode == "constants":
        return {
            "tool": "permest",
            "version": __version__,
            "mode": "constants",
            "constants": analytic_constants().to_dict(),
            TIMESTAMP_KEY: timestamp(),
        }

    instance, kind, desc, exact_fn, size, limit, what = _load_instance(config)
    use_oracle = _oracle_active(config, size, limit, what)
    if config.mode == "verify-bounds" and not use_oracle:
        raise BadParameter("verify-bounds needs the exact oracle; do not pass --oracle off")
    exact = exact_fn() if use_oracle else None

    run = run_estimate(instance, kind, config.seed, config.num_samples, config.num_median_blocks,
                       perturb_eps=config.perturb_eps, workers=config.workers)
    report = {
        "tool": "permest",
        "version": __version__,
        "mode": config.mode,
        "config": config.echo(),
        "instance": desc,
        "exact": _exact_entry(exact) if exact is not None else None,
        "estimate": {
            "kind": kind.value,
            "num_samples": run.num_samples,
            "num_median_blocks": run.num_median_blocks,
            "aggregate_mean": log_number(run.aggregate_mean),
            "aggregate_median_of_block_means": log_number(run.aggregate_median_of_block_means),
            "sample_mean": run.mean,
            "standard_error": run.standard_error,
            "zero_fraction": run.n_zero / run.num_samples,
        },
    }
    if exact is not None:
        log_exact = exact.log_value
        n = desc["n"]
        if log_exact == -math.inf:
            report["relative_error"] = None
            report["degenerate"] = True
        else:
            report["relative_error"] = abs(math.expm1(run.aggregate_mean - log_exact))
            report["standard_errors_from_exact"] = (
                (run.mean - math.exp(log_exact)) / run.standard_error
                if 0 < run.standard_error < math.inf and abs(log_exact) < 700 else None
            )
        report["tail_bounds"] = tail_rows(run.estimates, log_exact, n)
        if config.mode == "verify-bounds":
            report["window"] = {
                "description": f"{WINDOW_LOW_BASE}^n * exact <= alpha <= {WINDOW_HIGH:g} * exact",
                "empirical_frequency": window_frequency(run.estimates, log_exact, n),
                "gating": False,
            }
    report[TIMESTAMP_KEY] = timestamp()
    return report


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="permest",
        description="Randomized estimates of permanents, mixed discriminants and rainbow tree counts.",
    )
    p.add_argument("--mode", required=True, choices=MODES)
    p.add_argument("--input", dest="input_path",
                   help="instance file (matrix text, PSD-tuple JSON, graph text or vector-family JSON)")
    p.add_argument("--seed", type=int, help="64-bit seed (required except for constants)")
    p.add_argument("--samples", dest="num_samples", type=int, default=10_000)
    p.add_argument("--blocks", dest="num_median_blocks", type=int, default=1,
                   help="odd number of blocks for the median of block means")
    p.add_argument("--kind", dest="estimator_kind", choices=("gaussian", "binary"), default="gaussian")
    p.add_argument("--perturb-eps", dest="perturb_eps", type=float, default=0.0,
                   help="factor Q + eps*I instead of Q (near-singular PSD inputs)")
    p.add_argument("--oracle", choices=("on", "off", "auto"), default="auto")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--report", dest="report_path", help="also write the JSON report here")
    return p


def _error_report(exc: Exception) -> dict:
    err = {"type": type(exc).__name__, "message": str(exc)}
    for attr in ("line", "column"):
        if getattr(exc, attr, None) is not None:
            err[attr] = getattr(exc, attr)
    return {"tool": "permest", "version": __version__, "error": err, TIMESTAMP_KEY: timestamp()}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    config = RunConfig(**vars(args))
    try:
        report = execute(config)
        status = 0
    except (PermestError, OSError, ValueError) as exc:
        report = _error_report(exc)
        status = 1
    text = dumps(report)
    if config.report_path:
        Path(config.report_path).write_text(text, encoding="utf-8")
    sys.stdout.write(text)
    return status


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
