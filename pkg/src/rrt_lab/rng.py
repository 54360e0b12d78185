"""Counter-based random streams.

Every replicate of every experiment draws from its own Philox stream keyed by
``(seed, replicate_index)``.  Philox is counter-based, so streams are
statistically independent and results do not depend on scheduling or thread
count; rerunning a replicate always replays the same bytes.
"""
from __future__ import annotations

import numpy as np

from .errors import ConfigurationError

_U64 = 2**64


def stream(seed: int, replicate: int = 0) -> np.random.Generator:
    """Independent generator for one (seed, replicate) pair."""
    if not isinstance(seed, (int, np.integer)) or isinstance(seed, bool):
        raise ConfigurationError(f"seed must be an integer, got {seed!r}")
    if not isinstance(replicate, (int, np.integer)) or isinstance(replicate, bool):
        raise ConfigurationError(f"replicate index must be an integer, got {replicate!r}")
    if not (0 <= seed < _U64):
        raise ConfigurationError(f"seed must fit in 64 bits, got {seed}")
    if not (0 <= replicate < _U64):
        raise ConfigurationError(f"replicate index must fit in 64 bits, got {replicate}")
    key = np.array([seed, replicate], dtype=np.uint64)
    return np.random.Generator(np.random.Philox(key=key))
