"""Non-stationary Bernoulli bandits driven by phase schedules.

A :class:`PhaseSchedule` is an ordered list of ``(start_step, arm_probs)``
pairs. The phase active at step ``t`` is the last one whose ``start_step``
is ``<= t``, so reward probabilities are piecewise constant and switch
exactly at each phase's start step.
"""
from __future__ import annotations

import bisect
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from freewill.core.distributions import bernoulli
from freewill.core.rng import RngStream
from freewill.errors import InvalidInput


@dataclass(frozen=True)
class Phase:
    start_step: int
    arm_probs: tuple[float, ...]


@dataclass(frozen=True)
class PhaseSchedule:
    """Time-indexed arm reward probabilities.

    Attributes:
        phases: Phases ordered by strictly increasing ``start_step``; the
            first starts at step 0 and all share one arm count.
    """

    phases: tuple[Phase, ...]

    def __post_init__(self):
        if not self.phases:
            raise InvalidInput("schedule needs at least one phase")
        if self.phases[0].start_step != 0:
            raise InvalidInput("first phase must start at step 0")
        n_arms = len(self.phases[0].arm_probs)
        if n_arms == 0:
            raise InvalidInput("phases need at least one arm")
        prev = -1
        for i, ph in enumerate(self.phases):
            if ph.start_step <= prev:
                raise InvalidInput(f"phase {i}: start steps must be strictly increasing")
            if len(ph.arm_probs) != n_arms:
                raise InvalidInput(f"phase {i}: expected {n_arms} arm probabilities, got {len(ph.arm_probs)}")
            if any(not (0.0 <= p <= 1.0) for p in ph.arm_probs):
                raise InvalidInput(f"phase {i}: arm probabilities must lie in [0, 1]")
            prev = ph.start_step
        object.__setattr__(self, "_starts", [ph.start_step for ph in self.phases])

    @classmethod
    def from_pairs(cls, pairs: Iterable[tuple[int, Sequence[float]]]) -> "PhaseSchedule":
        return cls(tuple(Phase(int(s), tuple(float(p) for p in probs)) for s, probs in pairs))

    @property
    def num_arms(self) -> int:
        return len(self.phases[0].arm_probs)

    @property
    def change_steps(self) -> tuple[int, ...]:
        """Start steps of every phase after the first."""
        return tuple(ph.start_step for ph in self.phases[1:])

    def phase_at(self, t: int) -> Phase:
        if t < 0:
            raise InvalidInput(f"step index must be non-negative, got {t}")
        return self.phases[bisect.bisect_right(self._starts, t) - 1]

    def probs_at(self, t: int) -> np.ndarray:
        return np.asarray(self.phase_at(t).arm_probs, dtype=float)

    def best_expected_at(self, t: int) -> float:
        return max(self.phase_at(t).arm_probs)

    def to_pairs(self) -> list[dict]:
        return [{"start_step": ph.start_step, "probs": list(ph.arm_probs)} for ph in self.phases]


class BanditEnv:
    """Bernoulli bandit whose arm probabilities follow a :class:`PhaseSchedule`.

    The clock starts at 0 and advances by exactly one per :meth:`step`.
    """

    def __init__(self, schedule: PhaseSchedule, rng: RngStream):
        self.schedule = schedule
        self.rng = rng
        self.clock = 0

    @property
    def num_arms(self) -> int:
        return self.schedule.num_arms

    def active_probs(self, t: int) -> np.ndarray:
        return self.schedule.probs_at(t)

    def optimal_expected(self, t: int) -> float:
        """Expected reward of the best arm at step ``t``."""
        return self.schedule.best_expected_at(t)

    def step(self, action: int) -> int:
        """Pull ``action`` at the current clock, then advance the clock."""
        if not 0 <= action < self.num_arms:
            raise InvalidInput(f"action {action} out of range for {self.num_arms} arms")
        reward = bernoulli(self.schedule.phase_at(self.clock).arm_probs[action], self.rng)
        self.clock += 1
        return reward
