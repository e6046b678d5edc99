import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from permest.applications import (
    ColoredGraph,
    ColoredVectorFamily,
    color_class_matrices,
    count_rainbow_bases_estimate,
    count_rainbow_bases_exact,
    incidence_matrix,
)
from permest.errors import Disconnected, WrongColorCount
from permest.oracles import count_rainbow_trees_brute, mixdisc_inclusion_exclusion

TRIANGLE = ColoredGraph(3, [(0, 1), (1, 2), (0, 2)], ["A", "B", "B"])


def random_colored_graph(r, max_vertices=7, max_edges=12):
    """Connected graph: random spanning tree plus extra edges, n - 1 colors."""
    n = int(r.integers(2, max_vertices + 1))
    order = r.permutation(n)
    edges = [(int(order[int(r.integers(0, i))]), int(order[i])) for i in range(1, n)]
    extra = int(r.integers(0, max_edges - len(edges) + 1))
    for _ in range(extra):
        u, v = r.choice(n, 2, replace=False)
        edges.append((int(u), int(v)))
    edges = [edges[i] for i in r.permutation(len(edges))]
    # every color appears at least once
    colors = list(range(n - 1)) + [int(c) for c in r.integers(0, n - 1, len(edges) - (n - 1))]
    colors = [colors[i] for i in r.permutation(len(colors))]
    return ColoredGraph(n, edges, colors)


class TestIncidence:
    def test_single_edge(self):
        f = incidence_matrix(ColoredGraph(2, [(0, 1)], ["x"]))
        assert np.array_equal(f.vectors, [[1.0]])

    def test_triangle(self):
        g = ColoredGraph(3, [(0, 1), (1, 2), (0, 2)], ["A", "B", "B"])
        f = incidence_matrix(g)
        assert np.array_equal(f.vectors, [[1, 0, 1], [-1, 1, 0]])
        assert f.color_of == g.colors

    def test_orientation_flip(self):
        flipped = ColoredGraph(3, [(1, 0), (1, 2), (0, 2)], ["A", "B", "B"])
        a = incidence_matrix(TRIANGLE).vectors
        b = incidence_matrix(flipped).vectors
        assert np.array_equal(b[:, 0], -a[:, 0])
        assert np.array_equal(b[:, 1:], a[:, 1:])
        assert count_rainbow_bases_exact(incidence_matrix(flipped)).value == 2

    def test_disconnected(self):
        with pytest.raises(Disconnected):
            incidence_matrix(ColoredGraph(4, [(0, 1), (2, 3), (0, 1)], ["a", "b", "c"]))

    def test_wrong_color_count(self):
        with pytest.raises(WrongColorCount):
            incidence_matrix(ColoredGraph(3, [(0, 1), (1, 2), (0, 2)], ["A", "A", "A"]))

    @pytest.mark.parametrize("edges", [[(0, 0)], [(0, 5)], [(-1, 1)]])
    def test_invalid_edges(self, edges):
        with pytest.raises(ValueError):
            ColoredGraph(2, edges, ["a"])


class TestColorClasses:
    def test_one_vector_per_class_rank_one(self):
        r = np.random.default_rng(0)
        fam = ColoredVectorFamily(r.standard_normal((3, 3)), ["a", "b", "c"])
        for q in color_class_matrices(fam).matrices:
            assert np.linalg.matrix_rank(q) == 1

    def test_standard_basis(self):
        fam = ColoredVectorFamily(np.eye(4), [0, 1, 2, 3])
        q = color_class_matrices(fam)
        for k, m in enumerate(q.matrices):
            e = np.zeros(4)
            e[k] = 1.0
            assert np.array_equal(m, np.outer(e, e))
        assert count_rainbow_bases_exact(fam).value == 1

    def test_triangle_tuple(self):
        q = color_class_matrices(incidence_matrix(TRIANGLE))
        assert q.n == 2
        assert mixdisc_inclusion_exclusion(q).value == pytest.approx(2.0)

    def test_wrong_color_count(self):
        with pytest.raises(WrongColorCount):
            ColoredVectorFamily(np.eye(3), ["a", "a", "b"])

    def test_first_appearance_order(self):
        fam = ColoredVectorFamily(np.eye(3), ["z", "a", "m"])
        assert fam.color_classes() == ["z", "a", "m"]


class TestExactCounts:
    def test_triangle(self):
        assert count_rainbow_bases_exact(incidence_matrix(TRIANGLE)).value == 2

    def test_path(self):
        g = ColoredGraph(4, [(0, 1), (1, 2), (2, 3)], ["r", "g", "b"])
        assert count_rainbow_bases_exact(incidence_matrix(g)).value == 1

    def test_k4_proper_coloring(self):
        edges = [(0, 1), (2, 3), (0, 2), (1, 3), (0, 3), (1, 2)]
        g = ColoredGraph(4, edges, ["A", "A", "B", "B", "C", "C"])
        got = count_rainbow_bases_exact(incidence_matrix(g)).value
        assert got == count_rainbow_trees_brute(g).value == 4
        assert isinstance(got, int)

    def test_corpus(self):
        r = np.random.default_rng(5150)
        for _ in range(30):
            g = random_colored_graph(r)
            assert count_rainbow_bases_exact(incidence_matrix(g)).value == count_rainbow_trees_brute(g).value

    def test_relabeling_invariance(self):
        r = np.random.default_rng(99)
        g = random_colored_graph(r)
        base = count_rainbow_bases_exact(incidence_matrix(g)).value
        labels = sorted(set(g.colors))
        for perm in itertools.islice(itertools.permutations(labels), 6):
            mapping = dict(zip(labels, perm))
            h = ColoredGraph(g.num_vertices, g.edges, [mapping[c] for c in g.colors])
            assert count_rainbow_bases_exact(incidence_matrix(h)).value == base

    @settings(max_examples=25, deadline=None)
    @given(seed=st.integers(0, 2**32 - 1))
    def test_matches_brute_force(self, seed):
        g = random_colored_graph(np.random.default_rng(seed), max_vertices=6, max_edges=10)
        assert count_rainbow_bases_exact(incidence_matrix(g)).value == count_rainbow_trees_brute(g).value

    def test_non_unimodular_reports_sum_of_squares(self, caplog):
        fam = ColoredVectorFamily(np.array([[1.0, 0.0, 0.5], [0.0, 1.0, 0.7]]), ["a", "b", "b"])
        # det[v1 v2]^2 + det[v1 v3]^2 = 1 + 0.49
        assert count_rainbow_bases_exact(fam).value == pytest.approx(1.49)
        assert "not an integer" in caplog.text


class TestEstimate:
    def test_triangle(self):
        run = count_rainbow_bases_estimate(incidence_matrix(TRIANGLE), seed=12, num_samples=100_000)
        assert abs(run.mean - 2.0) <= 4 * run.standard_error

    def test_zero_class(self):
        fam = ColoredVectorFamily(np.array([[1.0, 0.0], [0.0, 0.0]]), ["a", "b"])
        run = count_rainbow_bases_estimate(fam, seed=1, num_samples=1000)
        assert run.n_zero == 1000
        assert count_rainbow_bases_exact(fam).value == 0

    def test_deterministic(self):
        fam = incidence_matrix(TRIANGLE)
        a = count_rainbow_bases_estimate(fam, seed=3, num_samples=500)
        b = count_rainbow_bases_estimate(fam, seed=3, num_samples=500)
        assert np.array_equal(a.estimates, b.estimates)
