"""Non-stationary bandit environments."""
from .bandit import Phase, PhaseSchedule, BanditEnv
from .schedules import paper_schedule_4arm, paper_schedule_10arm, builtin_schedule
