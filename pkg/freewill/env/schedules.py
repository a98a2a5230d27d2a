"""Built-in phase schedules, selectable by name from a run configuration.

``four_arm``: arm 0 pays 0.8 until step 1000, then arm 2 pays 0.8. The
non-optimal phase-1 arms span the 0.2-0.5 band; the concrete vectors below
are fixed for reproducibility.

``ten_arm``: starts from ``np.linspace(0.1, 0.8, 10)``. Phase 1 overwrites the
last entry with 0.2, so the best arm is 8 (p = 0.7222...); phase 2 reverses
the spacing and overwrites the first entry with 0.2, so the best arm is 1.
"""
from __future__ import annotations

import numpy as np

from freewill.env.bandit import PhaseSchedule
from freewill.errors import InvalidInput

CHANGE_STEP = 1000

FOUR_ARM_PHASE1 = (0.8, 0.5, 0.3, 0.2)
FOUR_ARM_PHASE2 = (0.2, 0.3, 0.8, 0.2)


def paper_schedule_4arm() -> PhaseSchedule:
    return PhaseSchedule.from_pairs([(0, FOUR_ARM_PHASE1), (CHANGE_STEP, FOUR_ARM_PHASE2)])


def paper_schedule_10arm() -> PhaseSchedule:
    num_arms = 10
    before = np.linspace(0.1, 0.8, num_arms)
    before[-1] = 0.2
    after = np.linspace(0.1, 0.8, num_arms)[::-1].copy()
    after[0] = 0.2
    return PhaseSchedule.from_pairs([(0, before.tolist()), (CHANGE_STEP, after.tolist())])


BUILTIN_SCHEDULES = {
    "four_arm": paper_schedule_4arm,
    "ten_arm": paper_schedule_10arm,
}


def builtin_schedule(name: str) -> PhaseSchedule:
    try:
        return BUILTIN_SCHEDULES[name]()
    except KeyError:
        raise InvalidInput(f"unknown built-in schedule {name!r}; choose from {sorted(BUILTIN_SCHEDULES)}") from None
