import math

import numpy as np
import pytest
from hypothesis import assume, given
import hypothesis.strategies as st

from freewill.core import PolicyDistribution
from freewill.env import PhaseSchedule, paper_schedule_4arm
from freewill.errors import DivergenceUndefined, InvalidInput
from freewill.experiment import StepRecord
from freewill.metrics import cumulative_regret, kl_divergence, moving_average, novelty_series, shannon_entropy

UNIFORM4 = PolicyDistribution(np.full(4, 0.25))


@st.composite
def distributions(draw, size=None):
    n = size or draw(st.integers(min_value=1, max_value=12))
    w = draw(st.lists(st.floats(min_value=0, max_value=1), min_size=n, max_size=n))
    assume(sum(w) > 1e-6)
    p = np.asarray(w) / np.sum(w)
    return PolicyDistribution(p / p.sum())


@st.composite
def positive_pairs(draw):
    n = draw(st.integers(min_value=1, max_value=10))
    p = draw(distributions(size=n))
    q_raw = np.asarray(draw(st.lists(st.floats(min_value=0.01, max_value=1), min_size=n, max_size=n)))
    return p, PolicyDistribution(q_raw / q_raw.sum())


def _record(t, action, reward=0):
    return StepRecord(t, action, reward, UNIFORM4, None, 0.0)


def test_moving_average_examples():
    np.testing.assert_allclose(moving_average([1, 1, 0, 0], 2), [1.0, 0.5, 0.0])
    np.testing.assert_allclose(moving_average(np.full(30, 0.3), 7), np.full(24, 0.3))
    with pytest.raises(InvalidInput):
        moving_average([1, 0], 3)
    with pytest.raises(InvalidInput):
        moving_average([1, 0], 0)


def test_moving_average_matches_brute_force():
    x = np.random.default_rng(0).integers(0, 2, size=200).astype(float)
    brute = [np.mean(x[i:i + 50]) for i in range(len(x) - 49)]
    out = moving_average(x, 50)
    assert out.size == 151
    np.testing.assert_allclose(out, brute, rtol=0, atol=1e-12)


@given(st.lists(st.floats(min_value=-1, max_value=1), min_size=20, max_size=60), st.integers(1, 20))
def test_moving_average_property(xs, w):
    brute = [sum(xs[i:i + w]) / w for i in range(len(xs) - w + 1)]
    np.testing.assert_allclose(moving_average(xs, w), brute, rtol=0, atol=1e-12)


def test_entropy_examples():
    assert shannon_entropy(UNIFORM4, 2) == pytest.approx(2.0)
    assert shannon_entropy(UNIFORM4, "e") == pytest.approx(math.log(4))
    assert shannon_entropy([1, 0, 0, 0]) == 0.0
    assert shannon_entropy([0.5, 0.5], 2) == pytest.approx(1.0)
    with pytest.raises(InvalidInput):
        shannon_entropy(UNIFORM4, 10)


@given(distributions())
def test_entropy_bounds(p):
    n = len(p)
    for base, log in ((2, math.log2), ("e", math.log)):
        h = shannon_entropy(p, base)
        assert 0.0 <= h <= log(n) + 1e-12


def test_kl_examples():
    assert kl_divergence(UNIFORM4, UNIFORM4) == 0.0
    assert kl_divergence([1, 0], [0.5, 0.5]) == pytest.approx(math.log(2))
    with pytest.raises(DivergenceUndefined):
        kl_divergence([0.5, 0.5], [1, 0])
    with pytest.raises(InvalidInput):
        kl_divergence([0.5, 0.5], UNIFORM4)


@given(positive_pairs())
def test_kl_matches_direct_sum_and_is_non_negative(pq):
    p, q = pq
    direct = sum(pi * math.log(pi / qi) for pi, qi in zip(p.probs, q.probs) if pi > 0)
    d = kl_divergence(p, q)
    assert d >= 0.0
    assert d == pytest.approx(max(direct, 0.0), abs=1e-12)
    if d <= 1e-15:
        np.testing.assert_allclose(p.probs, q.probs, atol=1e-6)


@given(distributions())
def test_kl_zero_on_identity(p):
    assert kl_divergence(p, p) == 0.0


def test_novelty_examples():
    np.testing.assert_allclose(novelty_series([0, 0, 1, 0, 2], 4), [0.25, 0.25, 0.5, 0.5, 0.75])
    assert novelty_series([3, 1, 0, 2], 4)[-1] == 1.0
    with pytest.raises(InvalidInput):
        novelty_series([0, 4], 4)


@given(st.lists(st.integers(0, 5), min_size=1, max_size=100))
def test_novelty_monotone_and_saturates_iff_all_arms(actions):
    out = novelty_series(actions, 6)
    assert out[0] == pytest.approx(1 / 6)
    assert np.all(np.diff(out) >= 0)
    assert (out[-1] == 1.0) == (set(actions) == set(range(6)))


def test_regret_examples():
    sched = paper_schedule_4arm()
    assert np.all(cumulative_regret([_record(t, 0) for t in range(100)], sched) == 0)
    np.testing.assert_allclose(cumulative_regret([_record(t, 3) for t in range(5)], sched), 0.6 * np.arange(1, 6))
    with pytest.raises(InvalidInput):
        cumulative_regret([], sched)


@given(st.lists(st.integers(0, 3), min_size=1, max_size=60))
def test_regret_matches_oracle_and_is_monotone(actions):
    sched = PhaseSchedule.from_pairs([(0, [0.8, 0.5, 0.3, 0.2]), (20, [0.2, 0.3, 0.8, 0.2])])
    records = [_record(t, a) for t, a in enumerate(actions)]
    out = cumulative_regret(records, sched)
    total, oracle = 0.0, []
    for t, a in enumerate(actions):
        total += max(sched.probs_at(t)) - sched.probs_at(t)[a]
        oracle.append(total)
    np.testing.assert_allclose(out, oracle, rtol=0, atol=1e-12)
    assert np.all(np.diff(out) >= 0)
