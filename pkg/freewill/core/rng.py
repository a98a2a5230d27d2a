"""Deterministic random streams.

Every stochastic decision in a run draws from an :class:`RngStream`: a thin
wrapper over NumPy's ``PCG64`` bit generator seeded through
``SeedSequence``. A stream is identified by a 64-bit seed plus an optional
spawn key, so one user seed can derive several independent streams (one per
environment and per agent) without sharing state.

Draw Contract
-------------
Each public draw consumes exactly one uniform double from the generator:

- ``uniform()``   -> u in [0, 1)
- ``integer(n)``  -> floor(u * n), clamped to n - 1

Keeping one draw per decision makes traces auditable: an agent step consumes
its epsilon coin, then at most one action draw; the environment consumes one
reward coin. Sequences are reproducible for a given seed within one NumPy
build, not across languages or bit-generator families.
"""
from __future__ import annotations

import numpy as np

from freewill.errors import InvalidInput

SEED_MAX = 2**64 - 1


class RngStream:
    """Single-threaded uniform draw source keyed by ``(seed, stream)``.

    Streams may be handed between threads or pickled into worker processes
    but must never be shared by two consumers.
    """

    def __init__(self, seed: int, stream: int = 0):
        seed = int(seed)
        if not 0 <= seed <= SEED_MAX:
            raise InvalidInput(f"seed must be a 64-bit unsigned integer, got {seed}")
        if stream < 0:
            raise InvalidInput(f"stream must be non-negative, got {stream}")
        self.seed = seed
        self.stream = int(stream)
        spawn_key = (self.stream,) if self.stream else ()
        self._gen = np.random.Generator(
            np.random.PCG64(np.random.SeedSequence(entropy=seed, spawn_key=spawn_key))
        )

    def uniform(self) -> float:
        return float(self._gen.random())

    def integer(self, n: int) -> int:
        """Uniform index in ``[0, n)`` from a single draw."""
        if n < 1:
            raise InvalidInput(f"n must be positive, got {n}")
        return min(int(self.uniform() * n), n - 1)

    def __repr__(self) -> str:
        return f"RngStream(seed={self.seed}, stream={self.stream})"
