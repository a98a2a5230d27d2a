r"""Information measures over policy snapshots.

Entropy
-------
.. math:: H(p) = -\sum_i p_i \log_b p_i, \qquad 0 \log 0 := 0

reported in bits (``base=2``) and nats (``base="e"``). Bounded by
:math:`0 \le H(p) \le \log_b |A|`.

Divergence
----------
.. math:: D_{KL}(p \| q) = \sum_{p_i > 0} p_i \ln \frac{p_i}{q_i}

in nats. Inputs where some :math:`q_i = 0` while :math:`p_i > 0` raise
:class:`~freewill.errors.DivergenceUndefined`; nothing is smoothed.
"""
from __future__ import annotations

import math

import numpy as np
from scipy.special import rel_entr
from scipy.stats import entropy as _scipy_entropy

from freewill.core.distributions import PolicyDistribution
from freewill.errors import DivergenceUndefined, InvalidInput


def _as_dist(d) -> np.ndarray:
    if isinstance(d, PolicyDistribution):
        return d.probs
    return PolicyDistribution(np.asarray(d, dtype=float)).probs


def _log_base(base) -> float | None:
    if base in ("e", None) or base == math.e:
        return None
    if base == 2:
        return 2.0
    raise InvalidInput(f"entropy base must be 2 or 'e', got {base!r}")


def shannon_entropy(dist, base=2) -> float:
    p = _as_dist(dist)
    h = float(_scipy_entropy(p, base=_log_base(base)))
    return max(h, 0.0)


def kl_divergence(p, q) -> float:
    pp, qq = _as_dist(p), _as_dist(q)
    if pp.shape != qq.shape:
        raise InvalidInput(f"distributions differ in length: {pp.size} vs {qq.size}")
    if np.any((qq == 0) & (pp > 0)):
        raise DivergenceUndefined("q assigns zero probability where p is positive")
    # rounding can leave tiny negatives when p == q
    return max(float(np.sum(rel_entr(pp, qq))), 0.0)
