"""Agent contract shared by the Free-Will agent and the baseline."""
from __future__ import annotations

from typing import Hashable, Protocol

import numpy as np

from freewill.core.distributions import PolicyDistribution
from freewill.core.rng import RngStream

StateId = Hashable


class Agent(Protocol):
    """select_action(state, rng), then observe(state, action, reward, next_state)."""

    name: str
    num_actions: int

    def select_action(self, state: StateId, rng: RngStream) -> int: ...

    def observe(self, state: StateId, action: int, reward: int, next_state: StateId,
                change_signal: bool = False) -> None: ...

    def policy(self, state: StateId) -> PolicyDistribution: ...


class ActionTable(dict):
    """Mapping state -> per-action vector; unseen states read as zeros."""

    def __init__(self, num_actions: int, dtype=float):
        super().__init__()
        self.num_actions = int(num_actions)
        self.dtype = dtype

    def __missing__(self, state):
        row = np.zeros(self.num_actions, dtype=self.dtype)
        self[state] = row
        return row

    def __reduce__(self):
        return (self.__class__, (self.num_actions, self.dtype), None, None, iter(self.items()))
