import numpy as np
import pytest
from hypothesis import given, settings
import hypothesis.strategies as st

from freewill.core import PolicyDistribution, RngStream, bernoulli, sample_categorical, softmax
from freewill.errors import InvalidInput

finite = st.floats(min_value=-50, max_value=50, allow_nan=False, allow_infinity=False)
score_vectors = st.lists(finite, min_size=1, max_size=20)


def test_same_seed_same_sequence():
    a, b = RngStream(42), RngStream(42)
    assert [a.uniform() for _ in range(10_000)] == [b.uniform() for _ in range(10_000)]


def test_spawned_streams_differ():
    base, other = RngStream(7), RngStream(7, stream=1)
    assert [base.uniform() for _ in range(5)] != [other.uniform() for _ in range(5)]


@pytest.mark.parametrize("seed, stream, first", [
    (0, 0, 0.63696168732145431),
    (0x9E3779B97F4A7C15, 0, 0.022965380575797112),
    (0, 1, 0.6771968569751019),
    (0, 2, 0.83827114795716018),
])
def test_stream_first_draw_is_pinned(seed, stream, first):
    # seed 0 without a spawn key matches np.random.default_rng(0)
    assert RngStream(seed, stream).uniform() == first


def test_seed_range_checked():
    RngStream(2**64 - 1)
    with pytest.raises(InvalidInput):
        RngStream(2**64)
    with pytest.raises(InvalidInput):
        RngStream(-1)


def test_integer_in_range():
    rng = RngStream(0)
    draws = [rng.integer(4) for _ in range(1000)]
    assert set(draws) == {0, 1, 2, 3}
    with pytest.raises(InvalidInput):
        rng.integer(0)


def test_softmax_examples():
    np.testing.assert_allclose(softmax([0, 0, 0, 0]).probs, [0.25] * 4)
    e = np.e
    np.testing.assert_allclose(softmax([1, 0]).probs, [e / (e + 1), 1 / (e + 1)], atol=1e-12)
    np.testing.assert_allclose(softmax([1000, 1000]).probs, [0.5, 0.5])


def test_softmax_rejects_bad_scores():
    with pytest.raises(InvalidInput):
        softmax([])
    with pytest.raises(InvalidInput):
        softmax([0.0, np.nan])
    with pytest.raises(InvalidInput):
        softmax([np.inf, 0.0])


@given(score_vectors)
def test_softmax_is_a_distribution(scores):
    p = softmax(scores).probs
    assert p.shape == (len(scores),)
    assert (p >= 0).all()
    assert abs(p.sum() - 1.0) <= 1e-9


@given(score_vectors, st.floats(min_value=-100, max_value=100, allow_nan=False))
def test_softmax_shift_invariant(scores, c):
    p = softmax(scores).probs
    q = softmax(np.asarray(scores) + c).probs
    np.testing.assert_allclose(p, q, rtol=0, atol=1e-12)


def test_policy_distribution_validation():
    with pytest.raises(InvalidInput):
        PolicyDistribution(np.array([0.5, 0.6]))
    with pytest.raises(InvalidInput):
        PolicyDistribution(np.array([1.5, -0.5]))
    with pytest.raises(InvalidInput):
        PolicyDistribution(np.array([]))
    d = PolicyDistribution(np.array([0.25, 0.75]))
    assert len(d) == 2 and d.num_actions == 2
    with pytest.raises(ValueError):
        d.probs[0] = 1.0


def test_sample_categorical_degenerate():
    rng = RngStream(1)
    d = PolicyDistribution(np.array([1.0, 0.0, 0.0]))
    assert all(sample_categorical(d, rng) == 0 for _ in range(1000))


def test_sample_categorical_never_picks_zero_mass():
    rng = RngStream(2)
    d = PolicyDistribution(np.array([0.0, 0.5, 0.0, 0.5]))
    picks = {sample_categorical(d, rng) for _ in range(2000)}
    assert picks == {1, 3}


@pytest.mark.parametrize("probs", [[0.5, 0.5], [0.2, 0.3, 0.5], [0.1, 0.0, 0.6, 0.3]])
def test_sample_categorical_frequencies(probs):
    rng = RngStream(123)
    d = PolicyDistribution(np.array(probs))
    n = 100_000
    counts = np.bincount([sample_categorical(d, rng) for _ in range(n)], minlength=len(probs))
    freq = counts / n
    assert np.all(np.abs(freq - probs) <= 0.01)
    assert 0.5 * np.abs(freq - probs).sum() <= 0.02


def test_sample_categorical_consumes_one_draw():
    a, b = RngStream(9), RngStream(9)
    sample_categorical(PolicyDistribution(np.array([0.3, 0.7])), a)
    b.uniform()
    assert a.uniform() == b.uniform()


def test_bernoulli():
    rng = RngStream(5)
    assert bernoulli(1.0, rng) == 1
    assert bernoulli(0.0, rng) == 0
    mean = np.mean([bernoulli(0.8, rng) for _ in range(100_000)])
    assert 0.79 <= mean <= 0.81
    with pytest.raises(InvalidInput):
        bernoulli(1.2, rng)
