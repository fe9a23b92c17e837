"""SplitMix64 streams for reproducible, order-independent trials.

Every Monte Carlo trial owns one stream whose state is derived from
``splitmix64(seed + trial_index)``, so a trial's draws never depend on which
worker ran it or in what order.

Two implementations share the same arithmetic:

* :class:`SplitMix64` -- scalar, pure Python, used by the tick loop.
* :func:`uniform_block` -- numpy, vectorized over many trials at once; used
  by the faithful-mode fast path. Its output is bit-identical to drawing from
  :class:`SplitMix64` one value at a time.
"""

from __future__ import annotations

import numpy as np

MASK64 = (1 << 64) - 1
GOLDEN_GAMMA = 0x9E3779B97F4A7C15
_MIX1 = 0xBF58476D1CE4E5B9
_MIX2 = 0x94D049BB133111EB
_INV_2_53 = 1.0 / (1 << 53)


def _mix(z: int) -> int:
    z = ((z ^ (z >> 30)) * _MIX1) & MASK64
    z = ((z ^ (z >> 27)) * _MIX2) & MASK64
    return z ^ (z >> 31)


def splitmix64(x: int) -> int:
    """First output of a SplitMix64 generator seeded with ``x``."""
    return _mix((x + GOLDEN_GAMMA) & MASK64)


def trial_state(seed: int, trial_index: int) -> int:
    return splitmix64((seed + trial_index) & MASK64)


class SplitMix64:
    """Scalar SplitMix64 stream.

    ``random()`` maps the top 53 bits of each output onto [0, 1), so
    ``bernoulli(1.0)`` is always true and ``bernoulli(0.0)`` always false.
    """

    __slots__ = ("state",)

    def __init__(self, state: int):
        self.state = state & MASK64

    @classmethod
    def for_trial(cls, seed: int, trial_index: int) -> "SplitMix64":
        return cls(trial_state(seed, trial_index))

    def next_u64(self) -> int:
        self.state = (self.state + GOLDEN_GAMMA) & MASK64
        z = self.state
        z = ((z ^ (z >> 30)) * _MIX1) & MASK64
        z = ((z ^ (z >> 27)) * _MIX2) & MASK64
        return z ^ (z >> 31)

    def random(self) -> float:
        return (self.next_u64() >> 11) * _INV_2_53

    def bernoulli(self, p: float) -> bool:
        return self.random() < p


# --- vectorized twin -------------------------------------------------------

def _mix_array(z: np.ndarray) -> np.ndarray:
    # uint64 array arithmetic wraps modulo 2**64 without warnings.
    z = (z ^ (z >> np.uint64(30))) * np.uint64(_MIX1)
    z = (z ^ (z >> np.uint64(27))) * np.uint64(_MIX2)
    return z ^ (z >> np.uint64(31))


def trial_states(seed: int, trial_indices: np.ndarray) -> np.ndarray:
    """Vectorized :func:`trial_state` over an array of trial indices."""
    idx = np.asarray(trial_indices, dtype=np.uint64)
    x = idx + np.uint64(seed & MASK64)
    return _mix_array(x + np.uint64(GOLDEN_GAMMA))


def uniform_block(seed: int, trial_indices: np.ndarray, n_draws: int) -> np.ndarray:
    """Uniform draws, shape ``(len(trial_indices), n_draws)``.

    Row ``i`` equals the first ``n_draws`` values of
    ``SplitMix64.for_trial(seed, trial_indices[i]).random()``.
    """
    states = trial_states(seed, trial_indices)
    steps = np.arange(1, n_draws + 1, dtype=np.uint64) * np.uint64(GOLDEN_GAMMA)
    raw = _mix_array(states[:, None] + steps[None, :])
    return (raw >> np.uint64(11)).astype(np.float64) * _INV_2_53
