r"""Policy distributions and the categorical / Bernoulli draws built on them.

Softmax
-------
For a score vector :math:`s` the policy is

.. math:: p_i = \frac{\exp(s_i - \max_j s_j)}{\sum_k \exp(s_k - \max_j s_j)}

Max-subtraction keeps ``exp`` from overflowing for large scores (e.g.
``Q/T`` with ``T`` at its floor). ``scipy.special.softmax`` applies the same
shift internally.

Sampling
--------
``sample_categorical`` inverts the cumulative distribution with one uniform
draw: the returned index is the first ``i`` whose cumulative mass exceeds
``u``. Zero-probability entries are never selected.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.special import softmax as _scipy_softmax

from freewill.core.rng import RngStream
from freewill.errors import InvalidInput

SUM_TOLERANCE = 1e-9


@dataclass(frozen=True)
class PolicyDistribution:
    """Probability vector over arms.

    Attributes:
        probs: 1D float array; entries non-negative and summing to 1 within
            ``SUM_TOLERANCE``.
    """

    probs: np.ndarray

    def __post_init__(self):
        p = np.asarray(self.probs, dtype=float)
        if p.ndim != 1 or p.size == 0:
            raise InvalidInput("policy must be a non-empty 1D vector")
        if not np.all(np.isfinite(p)) or np.any(p < 0):
            raise InvalidInput("policy entries must be finite and non-negative")
        if abs(float(p.sum()) - 1.0) > SUM_TOLERANCE:
            raise InvalidInput(f"policy entries sum to {p.sum()!r}, expected 1")
        p.setflags(write=False)
        object.__setattr__(self, "probs", p)

    def __len__(self) -> int:
        return int(self.probs.size)

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self.probs, dtype=dtype)

    @property
    def num_actions(self) -> int:
        return int(self.probs.size)


def softmax(scores) -> PolicyDistribution:
    """Max-shifted softmax of a finite, non-empty score vector."""
    s = np.asarray(scores, dtype=float)
    if s.ndim != 1 or s.size == 0:
        raise InvalidInput("softmax needs a non-empty 1D score vector")
    if not np.all(np.isfinite(s)):
        raise InvalidInput("softmax scores must be finite")
    return PolicyDistribution(_scipy_softmax(s))


def sample_categorical(dist: PolicyDistribution, rng: RngStream) -> int:
    """Draw an action index with probability ``dist.probs[i]``."""
    if not isinstance(dist, PolicyDistribution):
        dist = PolicyDistribution(np.asarray(dist, dtype=float))
    p = dist.probs
    u = rng.uniform()
    idx = int(np.searchsorted(np.cumsum(p), u, side="right"))
    if idx >= p.size:
        # u landed in the rounding gap above the final cumulative sum
        idx = int(np.flatnonzero(p > 0)[-1])
    return idx


def bernoulli(p: float, rng: RngStream) -> int:
    """Return 1 with probability ``p``, else 0."""
    p = float(p)
    if not 0.0 <= p <= 1.0:
        raise InvalidInput(f"bernoulli probability must lie in [0, 1], got {p}")
    return 1 if rng.uniform() < p else 0
