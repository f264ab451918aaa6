import numpy as np
import pytest

from lrdopt.errors import DomainError
from lrdopt.rng import ALGORITHM, Rng, bernoulli_mask, gaussian_sample


def test_same_seed_same_stream():
    a = Rng(123).gaussian((100,))
    b = Rng(123).gaussian((100,))
    assert np.array_equal(a, b)


def test_different_seeds_differ():
    assert not np.array_equal(Rng(1).gaussian((50,)), Rng(2).gaussian((50,)))


def test_algorithm_is_named():
    assert Rng(0).algorithm == ALGORITHM == "philox4x64-10"


def test_child_streams_reproducible_and_disjoint():
    root = Rng(7)
    again = Rng(7)
    a = root.child(3).gaussian((64,))
    b = again.child(3).gaussian((64,))
    assert np.array_equal(a, b)
    # sibling and nested children draw different streams
    assert not np.array_equal(a, Rng(7).child(4).gaussian((64,)))
    assert not np.array_equal(a, Rng(7).child(3, 0).gaussian((64,)))


def test_child_derivation_independent_of_draw_position():
    fresh = Rng(9)
    child_first = fresh.child(5).gaussian((8,))
    used = Rng(9)
    used.gaussian((1000,))  # consume the parent stream first
    assert np.array_equal(used.child(5).gaussian((8,)), child_first)


def test_named_children_stable():
    a = Rng(4).child_named("optimizer").gaussian((16,))
    b = Rng(4).child_named("optimizer").gaussian((16,))
    c = Rng(4).child_named("optimizes").gaussian((16,))
    assert np.array_equal(a, b)
    assert not np.array_equal(a, c)


def test_gaussian_degenerate_std_zero():
    out = gaussian_sample(Rng(0), (2,), 0.0, 0.0)
    assert out.tolist() == [0.0, 0.0]
    out = gaussian_sample(Rng(0), (5,), 3.5, 0.0)
    assert out.tolist() == [3.5] * 5


def test_gaussian_negative_std_rejected():
    with pytest.raises(DomainError):
        gaussian_sample(Rng(0), (2,), 0.0, -1.0)


def test_gaussian_sample_mean_bound():
    # 4 sigma / sqrt(n) bound for n = 1e6 standard normals
    out = gaussian_sample(Rng(2024), (1_000_000,), 0.0, 1.0)
    assert abs(out.mean()) <= 0.004


def test_bernoulli_mask_values_pure():
    mask = bernoulli_mask(Rng(5), (1000,), 0.3)
    assert set(np.unique(mask)) <= {0.0, 1.0}
    assert mask.dtype == np.float64


def test_bernoulli_extremes():
    assert bernoulli_mask(Rng(0), (500,), 1.0).all()
    assert not bernoulli_mask(Rng(0), (500,), 0.0).any()


@pytest.mark.parametrize("p", [0.1, 0.3, 0.5, 0.7, 0.9])
def test_bernoulli_fraction_within_4_sigma(p):
    n = 1_000_000
    mask = bernoulli_mask(Rng(31), (n,), p)
    ones = mask.sum()
    sigma = np.sqrt(n * p * (1.0 - p))
    assert abs(ones - n * p) <= 4.0 * sigma


def test_bernoulli_half_fraction_interval():
    mask = bernoulli_mask(Rng(8), (1_000_000,), 0.5)
    frac = mask.mean()
    assert 0.498 <= frac <= 0.502


def test_bernoulli_p_out_of_range():
    with pytest.raises(DomainError):
        bernoulli_mask(Rng(0), (4,), 1.5)
    with pytest.raises(DomainError):
        bernoulli_mask(Rng(0), (4,), -0.1)


def test_bad_seed_rejected():
    with pytest.raises(DomainError):
        Rng(-1)
    with pytest.raises(DomainError):
        Rng("abc")
