r"""Free-Will agent: adaptive-temperature softmax with a count-based bonus.

Policy
------
With value estimates :math:`Q(s,a)`, visit counts :math:`N(s,a)` and the
intrinsic bonus

.. math:: I(s,a) = \frac{1}{\sqrt{1 + N(s,a)}}

the policy is :math:`p(a|s) = \mathrm{softmax}(\text{score})` with

- ``formula``: :math:`\text{score}_a = (Q(s,a) + \alpha I(s,a)) / T`
- ``code``:    :math:`\text{score}_a = Q(s,a) + T \alpha I(s,a)` (temperature
  scales only the bonus)

An optional epsilon overlay replaces the softmax draw with a uniform pick with
probability ``eps``; reported policies never include the overlay.

Temperature
-----------
Surprise is :math:`|r_t - \bar r_t|` with :math:`\bar r_t` the mean of the last
``surprise_window`` rewards (current one included; zero while only one reward
has been seen).

- ``endogenous``: :math:`T \leftarrow \min(T_{max}, T\gamma_{inc})` if surprise
  exceeds :math:`\tau`, else :math:`\max(T_{min}, T\gamma_{dec})`.
- ``oracle``: an external change signal resets ``T`` to ``T_init`` and ``eps``
  to ``eps_init``; every other step takes the decay branch.

Learning
--------
.. math:: Q(s,a_t) \leftarrow Q(s,a_t) + \eta\,(r_t + \gamma \max_a Q(s',a) - Q(s,a_t))

followed by :math:`N(s,a_t) \mathrel{+}= 1`, the psi-field update

.. math:: \psi_a \leftarrow \psi_a + \eta\,[r_t \mathbb{1}(a_t = a) + \alpha I(s,a) - \psi_a]

and the linear eps decay. The psi field is a diagnostic trace; it does not
feed back into action selection.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field

import numpy as np

from freewill.agents.base import ActionTable, StateId
from freewill.config import FreeWillParams
from freewill.core.distributions import PolicyDistribution, sample_categorical, softmax
from freewill.core.rng import RngStream
from freewill.errors import InvalidInput


def intrinsic_bonus(n):
    """Count-based novelty bonus 1/sqrt(1 + n); scalar in, float out."""
    arr = np.asarray(n, dtype=float)
    if np.any(arr < 0):
        raise InvalidInput("visit counts must be non-negative")
    out = 1.0 / np.sqrt(1.0 + arr)
    return float(out) if out.ndim == 0 else out


def action_scores(q_row, n_row, T: float, alpha: float, variant: str = "formula") -> np.ndarray:
    """Per-action scores whose softmax is the Free-Will policy."""
    q = np.asarray(q_row, dtype=float)
    n = np.asarray(n_row, dtype=float)
    if q.ndim != 1 or q.shape != n.shape:
        raise InvalidInput(f"Q row and N row must be equal-length vectors, got {q.shape} and {n.shape}")
    if not T > 0:
        raise InvalidInput(f"temperature must be positive, got {T}")
    bonus = intrinsic_bonus(n)
    if variant == "formula":
        return (q + alpha * bonus) / T
    if variant == "code":
        return q + T * alpha * bonus
    raise InvalidInput(f"unknown score variant {variant!r}")


def surprise(r: float, history) -> float:
    """Absolute deviation of ``r`` from the mean of ``history`` (0 if empty)."""
    if len(history) == 0:
        return 0.0
    return abs(float(r) - float(np.mean(np.fromiter(history, dtype=float))))


def temperature_update(T: float, surprise_value: float, params: FreeWillParams) -> float:
    if surprise_value > params.tau:
        return min(params.T_max, T * params.gamma_inc)
    return max(params.T_min, T * params.gamma_dec)


def psi_update(psi_row, chosen: int, r: float, i_row, params: FreeWillParams) -> np.ndarray:
    psi = np.asarray(psi_row, dtype=float)
    bonus = np.asarray(i_row, dtype=float)
    if psi.ndim != 1 or psi.shape != bonus.shape:
        raise InvalidInput(f"psi row and bonus row must be equal-length vectors, got {psi.shape} and {bonus.shape}")
    if not 0 <= chosen < psi.size:
        raise InvalidInput(f"action {chosen} out of range for {psi.size} actions")
    target = params.alpha * bonus
    target[chosen] += r
    return psi + params.eta * (target - psi)


@dataclass
class AgentState:
    """Mutable learning state of one Free-Will agent."""

    num_actions: int
    T: float
    eps: float
    Q: ActionTable
    N: ActionTable
    psi: ActionTable
    reward_history: deque
    last_surprise: float = 0.0
    observed: int = field(default=0)

    @classmethod
    def initial(cls, num_actions: int, params: FreeWillParams) -> "AgentState":
        if num_actions < 1:
            raise InvalidInput("agent needs at least one action")
        return cls(
            num_actions=num_actions,
            T=params.T_init,
            eps=params.eps_init,
            Q=ActionTable(num_actions),
            N=ActionTable(num_actions, dtype=np.int64),
            psi=ActionTable(num_actions),
            reward_history=deque(maxlen=params.surprise_window),
        )


def freewill_policy(state: StateId, agent: AgentState, params: FreeWillParams) -> PolicyDistribution:
    scores = action_scores(agent.Q[state], agent.N[state], agent.T, params.alpha, params.score_variant)
    return softmax(scores)


def freewill_select(state: StateId, agent: AgentState, params: FreeWillParams,
                    rng: RngStream) -> tuple[int, PolicyDistribution]:
    """Pick an action; returns it with the softmax policy (overlay excluded).

    Draws: the eps coin, then exactly one of a uniform index or a categorical
    sample.
    """
    dist = freewill_policy(state, agent, params)
    if rng.uniform() < agent.eps:
        return rng.integer(agent.num_actions), dist
    return sample_categorical(dist, rng), dist


def freewill_observe(state: StateId, action: int, r: float, next_state: StateId,
                     agent: AgentState, params: FreeWillParams,
                     change_signal: bool = False) -> AgentState:
    """Apply one step of learning in place and return ``agent``."""
    if not 0 <= action < agent.num_actions:
        raise InvalidInput(f"action {action} out of range for {agent.num_actions} actions")
    agent.reward_history.append(r)
    s = surprise(r, agent.reward_history) if len(agent.reward_history) > 1 else 0.0
    agent.last_surprise = s

    reset = False
    if params.trigger_variant == "endogenous":
        agent.T = temperature_update(agent.T, s, params)
    elif change_signal:
        agent.T = params.T_init
        agent.eps = params.eps_init
        reset = True
    else:
        agent.T = max(params.T_min, agent.T * params.gamma_dec)

    q = agent.Q[state]
    target = r + params.discount * float(np.max(agent.Q[next_state]))
    q[action] += params.eta * (target - q[action])
    n = agent.N[state]
    n[action] += 1
    agent.psi[state] = psi_update(agent.psi[state], action, r, intrinsic_bonus(n), params)

    if not reset:
        agent.eps = max(params.eps_floor, agent.eps - params.eps_decay)
    agent.observed += 1
    return agent


class FreeWillAgent:
    """Object wrapper over :class:`AgentState` implementing the agent contract."""

    name = "freewill"

    def __init__(self, num_actions: int, params: FreeWillParams | None = None):
        self.params = params or FreeWillParams()
        self.state = AgentState.initial(num_actions, self.params)

    @property
    def num_actions(self) -> int:
        return self.state.num_actions

    @property
    def T(self) -> float:
        return self.state.T

    @property
    def eps(self) -> float:
        return self.state.eps

    def select_action(self, state: StateId, rng: RngStream) -> int:
        action, _ = freewill_select(state, self.state, self.params, rng)
        return action

    def observe(self, state: StateId, action: int, reward: int, next_state: StateId,
                change_signal: bool = False) -> None:
        freewill_observe(state, action, reward, next_state, self.state, self.params, change_signal)

    def policy(self, state: StateId) -> PolicyDistribution:
        return freewill_policy(state, self.state, self.params)

    def psi_value(self, state: StateId, action: int) -> float:
        return float(self.state.psi[state][action])
