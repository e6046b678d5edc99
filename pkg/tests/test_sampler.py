import numpy as np
import pytest
from scipy import stats

from permest.sampler import RngStream


def test_gaussian_scalar_moments():
    s = RngStream(11)
    x = np.array([s.gaussian_scalar() for _ in range(20_000)] + list(s.gaussian_array(980_000)))
    assert abs(x.mean()) < 0.005
    assert abs(x.var() - 1.0) < 0.01


def test_determinism_bitwise():
    a, b = RngStream(42, 0), RngStream(42, 0)
    first = [a.gaussian_scalar(), a.gaussian_scalar()]
    second = [b.gaussian_scalar(), b.gaussian_scalar()]
    assert np.array_equal(np.array(first).view(np.uint64), np.array(second).view(np.uint64))


def test_vector_covariance():
    u = RngStream(5).gaussian_array((100_000, 3))
    cov = u.T @ u / u.shape[0]
    assert np.max(np.abs(cov - np.eye(3))) < 0.02


def test_vector_squared_norm():
    u = RngStream(6).gaussian_array((100_000, 4))
    assert abs(np.mean(np.sum(u * u, axis=1)) - 4.0) < 0.05


def test_vector_of_length_one_is_scalar_sequence():
    a, b = RngStream(9), RngStream(9)
    vec = [a.gaussian_vector(1)[0] for _ in range(5)]
    sca = [b.gaussian_scalar() for _ in range(5)]
    assert vec == sca


def test_array_draw_equals_scalar_draws():
    a, b = RngStream(3, 2), RngStream(3, 2)
    block = a.gaussian_array((4, 3, 3)).ravel()
    seq = np.array([b.gaussian_scalar() for _ in range(36)])
    assert np.array_equal(block, seq)


def test_rademacher():
    s = RngStream(1)
    x = s.rademacher_array(1_000_000)
    assert set(np.unique(x)) == {-1.0, 1.0}
    assert abs(x.mean()) < 0.005
    assert s.rademacher_scalar() in (-1.0, 1.0)


def test_rademacher_array_equals_scalar_draws():
    a, b = RngStream(8), RngStream(8)
    assert list(a.rademacher_array(50)) == [b.rademacher_scalar() for _ in range(50)]


def test_rademacher_reproducible():
    assert np.array_equal(RngStream(4, 1).rademacher_array(100), RngStream(4, 1).rademacher_array(100))


def test_substreams_uncorrelated():
    x = RngStream(77, 0).gaussian_array(100_000)
    y = RngStream(77, 1).gaussian_array(100_000)
    assert abs(np.corrcoef(x, y)[0, 1]) < 0.01
    assert not np.array_equal(x[:10], y[:10])


def test_seeds_differ():
    assert RngStream(1).gaussian_scalar() != RngStream(2).gaussian_scalar()


def test_kolmogorov_smirnov():
    x = RngStream(2024).gaussian_array(100_000)
    d = stats.kstest(x, "norm").statistic
    # asymptotic critical value at the 0.001 level
    assert d < 1.9495 / np.sqrt(x.size)


@pytest.mark.parametrize("seed,stream_id", [(-1, 0), (2**64, 0), (0, -1)])
def test_invalid(seed, stream_id):
    with pytest.raises(ValueError):
        RngStream(seed, stream_id)
