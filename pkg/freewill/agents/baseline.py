"""Decaying epsilon-greedy Q-learner used as the comparison agent."""
from __future__ import annotations

import numpy as np

from freewill.agents.base import ActionTable, StateId
from freewill.config import BaselineParams
from freewill.core.distributions import PolicyDistribution
from freewill.core.rng import RngStream
from freewill.errors import InvalidInput

_DEFAULT_PARAMS = BaselineParams()


def _check_eps(eps: float) -> None:
    if not 0.0 <= eps <= 1.0:
        raise InvalidInput(f"eps must lie in [0, 1], got {eps}")


def baseline_select(state: StateId, q_row, eps: float, rng: RngStream) -> int:
    """Uniform pick with probability ``eps``, otherwise argmax (lowest index on ties).

    ``state`` is accepted for signature parity with the Free-Will agent.
    """
    _check_eps(eps)
    q = np.asarray(q_row, dtype=float)
    if rng.uniform() < eps:
        return rng.integer(q.size)
    return int(np.argmax(q))


def baseline_observe(state: StateId, action: int, r: float, next_state: StateId,
                     q_table: ActionTable, eps: float, params: BaselineParams | None = None,
                     counts: ActionTable | None = None) -> tuple[ActionTable, float]:
    """One Q-learning update followed by the linear eps decay.

    With ``params.step_size == "sample_average"`` the step is 1/N(s, a) and
    ``counts`` must be supplied; it is incremented in place.
    """
    params = params or _DEFAULT_PARAMS
    q = q_table[state]
    if not 0 <= action < q.size:
        raise InvalidInput(f"action {action} out of range for {q.size} actions")
    if params.step_size == "sample_average":
        if counts is None:
            raise InvalidInput("sample_average step size needs a visit-count table")
        counts[state][action] += 1
        step = 1.0 / counts[state][action]
    else:
        step = params.eta
    target = r + params.discount * float(np.max(q_table[next_state]))
    q[action] += step * (target - q[action])
    eps = max(params.eps_floor, eps - params.eps_decay)
    return q_table, eps


def baseline_policy_distribution(q_row, eps: float) -> PolicyDistribution:
    _check_eps(eps)
    q = np.asarray(q_row, dtype=float)
    probs = np.full(q.size, eps / q.size)
    probs[int(np.argmax(q))] += 1.0 - eps
    return PolicyDistribution(probs)


class EpsilonGreedyAgent:
    name = "baseline"

    def __init__(self, num_actions: int, params: BaselineParams | None = None):
        if num_actions < 1:
            raise InvalidInput("agent needs at least one action")
        self.params = params or _DEFAULT_PARAMS
        self.num_actions = num_actions
        self.Q = ActionTable(num_actions)
        self.N = ActionTable(num_actions, dtype=np.int64)
        self.eps = self.params.eps_init

    def select_action(self, state: StateId, rng: RngStream) -> int:
        return baseline_select(state, self.Q[state], self.eps, rng)

    def observe(self, state: StateId, action: int, reward: int, next_state: StateId,
                change_signal: bool = False) -> None:
        # the baseline is never told about changes
        if self.params.step_size == "constant":
            self.N[state][action] += 1
            counts = None
        else:
            counts = self.N
        _, self.eps = baseline_observe(state, action, reward, next_state, self.Q, self.eps,
                                       self.params, counts)

    def policy(self, state: StateId) -> PolicyDistribution:
        return baseline_policy_distribution(self.Q[state], self.eps)
