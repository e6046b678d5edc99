"""Counting rainbow bases and rainbow spanning trees with mixed discriminants.

Color the columns ``u_1, ..., u_m`` of an n x m matrix with n colors and put
``Q_k = sum_{i in class k} u_i u_i^T``. Then

    D(Q_1, ..., Q_n) = sum over rainbow n-subsets I of det[u_I]**2,

so for a unimodular family (every n x n minor in {-1, 0, 1}) it counts the
rainbow bases. Truncated incidence matrices of graphs are unimodular and
their bases are spanning trees.

Unimodularity is not checked (that would take exponential time). For other
families the "count" is the sum of squared determinants above.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np

from .errors import Disconnected, WrongColorCount
from .estimator import EstimatorKind, run_estimate
from .linalg import PsdTuple
from .oracles import ExactValue, mixdisc_inclusion_exclusion

logger = logging.getLogger(__name__)

ROUND_TOL = 1e-6


@dataclass(frozen=True)
class ColoredGraph:
    """Undirected multigraph with one color per edge; vertices are 0-based.

    ``edges[j] = (tail, head)`` fixes an orientation used only to build the
    incidence matrix.
    """

    num_vertices: int
    edges: tuple
    colors: tuple

    def __post_init__(self):
        edges = tuple((int(t), int(h)) for t, h in self.edges)
        object.__setattr__(self, "edges", edges)
        object.__setattr__(self, "colors", tuple(self.colors))
        if self.num_vertices < 1:
            raise ValueError("a graph needs at least one vertex")
        if len(self.colors) != len(edges):
            raise ValueError(f"{len(edges)} edges but {len(self.colors)} colors")
        for j, (t, h) in enumerate(edges):
            if not (0 <= t < self.num_vertices and 0 <= h < self.num_vertices):
                raise ValueError(f"edge {j} has a vertex out of range")
            if t == h:
                raise ValueError(f"edge {j} is a self-loop")

    @property
    def num_colors(self) -> int:
        return len(set(self.colors))

    def is_connected(self) -> bool:
        adj = [[] for _ in range(self.num_vertices)]
        for t, h in self.edges:
            adj[t].append(h)
            adj[h].append(t)
        seen = {0}
        stack = [0]
        while stack:
            for w in adj[stack.pop()]:
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        return len(seen) == self.num_vertices


@dataclass(frozen=True)
class ColoredVectorFamily:
    """``vectors`` is n x m (one vector per column); ``color_of[j]`` colors column j."""

    vectors: np.ndarray
    color_of: tuple

    def __post_init__(self):
        v = np.array(self.vectors, dtype=np.float64)
        if v.ndim != 2:
            raise ValueError("vectors must be an n x m array")
        if not np.all(np.isfinite(v)):
            raise ValueError("vectors must be finite")
        v.flags.writeable = False
        object.__setattr__(self, "vectors", v)
        object.__setattr__(self, "color_of", tuple(self.color_of))
        if len(self.color_of) != v.shape[1]:
            raise ValueError(f"{v.shape[1]} vectors but {len(self.color_of)} colors")
        if len(set(self.color_of)) != v.shape[0]:
            raise WrongColorCount(
                f"dimension {v.shape[0]} needs exactly {v.shape[0]} colors, "
                f"got {len(set(self.color_of))}"
            )

    @property
    def dimension(self) -> int:
        return self.vectors.shape[0]

    def color_classes(self) -> list:
        """Colors in order of first appearance."""
        return list(dict.fromkeys(self.color_of))


def incidence_matrix(graph: ColoredGraph) -> ColoredVectorFamily:
    """Truncated incidence matrix: +1 at the tail, -1 at the head, last vertex's row dropped."""
    if not graph.is_connected():
        raise Disconnected("graph is not connected")
    n = graph.num_vertices
    if n < 2 or graph.num_colors != n - 1:
        raise WrongColorCount(
            f"a graph on {n} vertices needs exactly {n - 1} colors, got {graph.num_colors}"
        )
    a = np.zeros((n, len(graph.edges)))
    for j, (t, h) in enumerate(graph.edges):
        a[t, j] = 1.0
        a[h, j] = -1.0
    return ColoredVectorFamily(a[:-1], graph.colors)


def color_class_matrices(family: ColoredVectorFamily) -> PsdTuple:
    """``Q_k = sum of u u^T`` over the vectors of color class k."""
    v = family.vectors
    n = family.dimension
    colors = np.array([family.color_classes().index(c) for c in family.color_of])
    mats = []
    for k in range(n):
        cols = v[:, colors == k]
        mats.append(cols @ cols.T)
    return PsdTuple.from_matrices(mats)


def count_rainbow_bases_exact(family: ColoredVectorFamily) -> ExactValue:
    """Exact mixed discriminant of the color-class tuple.

    Rounded to an int when within ``ROUND_TOL`` of one.
    """
    raw = mixdisc_inclusion_exclusion(color_class_matrices(family)).value
    nearest = round(raw)
    if abs(raw - nearest) <= ROUND_TOL:
        return ExactValue(int(nearest), "inclusion-exclusion")
    logger.warning("rainbow count %r is not an integer; family is not unimodular", raw)
    return ExactValue(raw, "inclusion-exclusion")


def count_rainbow_bases_estimate(family: ColoredVectorFamily, seed: int, num_samples: int,
                                 num_median_blocks: int = 1, perturb_eps: float = 0.0,
                                 workers: int = 1):
    """Gaussian mixed-discriminant estimate of the rainbow count."""
    return run_estimate(color_class_matrices(family), EstimatorKind.GAUSSIAN_MIXDISC, seed,
                        num_samples, num_median_blocks, perturb_eps=perturb_eps, workers=workers)
