"""Per-step records and the per-agent traces built from them."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterator

import numpy as np

from freewill.core.distributions import PolicyDistribution
from freewill.errors import InvalidInput


@dataclass(frozen=True)
class StepRecord:
    """Everything one agent did and reported at step ``t``.

    Attributes:
        t: Step index.
        action: Arm pulled.
        reward: Bernoulli reward (0 or 1).
        policy: Policy snapshot for the state acted in, read after learning.
        T: Temperature after the step; None for agents without one.
        eps: Exploration rate after the step.
        psi_chosen: Psi-field value of the chosen arm; None for the baseline.
    """

    t: int
    action: int
    reward: int
    policy: PolicyDistribution
    T: float | None
    eps: float
    psi_chosen: float | None = None


@dataclass
class RunTrace:
    """Ordered step records of one agent in one seeded run."""

    agent: str
    seed: int
    num_arms: int
    records: list[StepRecord] = field(default_factory=list)

    def append(self, record: StepRecord) -> None:
        if self.records and record.t <= self.records[-1].t:
            raise InvalidInput(f"step {record.t} does not follow step {self.records[-1].t}")
        self.records.append(record)

    def __len__(self) -> int:
        return len(self.records)

    def __iter__(self) -> Iterator[StepRecord]:
        return iter(self.records)

    def __getitem__(self, i):
        return self.records[i]

    @property
    def steps(self) -> np.ndarray:
        return np.fromiter((r.t for r in self.records), dtype=np.int64, count=len(self.records))

    @property
    def actions(self) -> np.ndarray:
        return np.fromiter((r.action for r in self.records), dtype=np.int64, count=len(self.records))

    @property
    def rewards(self) -> np.ndarray:
        return np.fromiter((r.reward for r in self.records), dtype=float, count=len(self.records))

    @property
    def temperatures(self) -> np.ndarray:
        return np.array([np.nan if r.T is None else r.T for r in self.records], dtype=float)

    @property
    def epsilons(self) -> np.ndarray:
        return np.fromiter((r.eps for r in self.records), dtype=float, count=len(self.records))

    @property
    def psi(self) -> np.ndarray:
        return np.array([np.nan if r.psi_chosen is None else r.psi_chosen for r in self.records], dtype=float)

    def policy_matrix(self) -> np.ndarray:
        """Policies stacked as a (steps, arms) array."""
        if not self.records:
            return np.empty((0, self.num_arms))
        return np.vstack([r.policy.probs for r in self.records])
