"""Deterministic random numbers for reproducible simulation runs.

The generator is splitmix64: a 64-bit counter stepped by the golden-gamma
constant 0x9E3779B97F4A7C15, with each output passed through the
Stafford-mix13 finalizer

    z ^= z >> 30; z *= 0xBF58476D1CE4E5B9
    z ^= z >> 27; z *= 0x94D049BB133111EB
    z ^= z >> 31

(all arithmetic mod 2^64).  Uniform doubles in [0, 1) take the top 53 bits:
u = (z >> 11) * 2^-53.  The same algorithm is inlined in the compiled sweep
kernels; both paths are bit-identical, so a run is reproduced exactly by its
seed on any platform.

Independent runs inside a grid or a replicate set get their seeds from
``derive_seed(base_seed, index)``, which is simply output number ``index`` of
a splitmix64 stream seeded with ``base_seed``.
"""

MASK64 = (1 << 64) - 1

GOLDEN_GAMMA = 0x9E3779B97F4A7C15
_MIX_A = 0xBF58476D1CE4E5B9
_MIX_B = 0x94D049BB133111EB

_INV_2_53 = 1.0 / 9007199254740992.0  # 2^-53


def mix64(z: int) -> int:
    """Stafford-mix13 finalizer on a 64-bit value."""
    z &= MASK64
    z = ((z ^ (z >> 30)) * _MIX_A) & MASK64
    z = ((z ^ (z >> 27)) * _MIX_B) & MASK64
    return z ^ (z >> 31)


def derive_seed(base_seed: int, index: int) -> int:
    """Seed for independent run number ``index`` under ``base_seed``.

    Equals the (index+1)-th raw output of splitmix64 seeded with base_seed,
    i.e. mix64(base_seed + (index+1) * GOLDEN_GAMMA).
    """
    if index < 0:
        raise ValueError("index must be non-negative")
    return mix64((base_seed + (index + 1) * GOLDEN_GAMMA) & MASK64)


class RandomStream:
    """splitmix64 stream of uniform doubles in [0, 1).

    Pure-python mirror of the generator inlined in the compiled kernels;
    identical seeds produce identical draws on both paths.
    """

    __slots__ = ("_state",)

    def __init__(self, seed: int):
        self._state = seed & MASK64

    @property
    def state(self) -> int:
        return self._state

    def next_u64(self) -> int:
        self._state = (self._state + GOLDEN_GAMMA) & MASK64
        return mix64(self._state)

    def uniform(self) -> float:
        """Next uniform double in [0, 1)."""
        return (self.next_u64() >> 11) * _INV_2_53
