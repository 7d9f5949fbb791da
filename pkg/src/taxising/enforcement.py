"""Audit-and-punishment mechanism.

Standing tax evaders face an audit with probability p_a once per sweep.  A
caught evader is forced honest and locked for the next ``punishment_length``
sweeps via a per-site countdown; locked sites take no part in the spin
dynamics until their countdown reaches zero.

Enforcement is active only when both the audit probability and the
punishment length are positive; with either at zero the model reduces
exactly to the baseline Ising dynamics (no audit randomness is consumed).
"""

import numpy as np

from .errors import ConfigurationError
from .lattice import EVADER, HONEST, SpinLattice


class EnforcementState:
    """Per-site punishment countdowns (sweeps of forced honesty remaining)."""

    def __init__(self, side_length: int):
        if side_length < 2:
            raise ConfigurationError(
                f"side length must be at least 2, got {side_length}"
            )
        self._countdown = np.zeros((side_length, side_length), dtype=np.int32)

    @property
    def side_length(self) -> int:
        return self._countdown.shape[0]

    @property
    def countdown(self) -> np.ndarray:
        return self._countdown

    def is_locked(self, row: int, col: int) -> bool:
        return self._countdown[row, col] > 0

    def locked_count(self) -> int:
        return int((self._countdown > 0).sum())

    def tick(self) -> int:
        """End-of-sweep decrement of every positive countdown.

        Returns how many sites reached zero on this call, i.e. how many were
        released from punishment.
        """
        positive = self._countdown > 0
        self._countdown[positive] -= 1
        return int((positive & (self._countdown == 0)).sum())


def audit(
    lattice: SpinLattice,
    enforcement: EnforcementState,
    audit_probability: float,
    punishment_length: int,
    row: int,
    col: int,
    rng,
) -> bool:
    """Audit one standing evader; returns True when it is caught.

    Consumes exactly one uniform draw.  On a catch the spin is forced to +1
    and the site's countdown is set to the punishment length.  Must only be
    called for unlocked sites whose current spin is -1.
    """
    assert lattice.spin(row, col) == EVADER, "audit called on an honest site"
    assert not enforcement.is_locked(row, col), "audit called on a locked site"
    if rng.uniform() < audit_probability:
        lattice.set_spin(row, col, HONEST)
        enforcement.countdown[row, col] = punishment_length
        return True
    return False
