"""Square spin lattice with periodic boundaries and its observables.

Each site holds +1 (honest taxpayer) or -1 (tax evader).  Every site
interacts with its four nearest neighbours (north, west, east, south);
the boundaries wrap around, so the lattice is a torus.  For side length 2
the two neighbours in a direction coincide and are counted twice.
"""

from dataclasses import dataclass

import numpy as np

from .errors import ConfigurationError

HONEST = 1
EVADER = -1


@dataclass(frozen=True)
class Observables:
    """Aggregate state of one configuration (coupling fixed at J=1)."""

    magnetization: int
    evasion_fraction: float
    total_energy: float


class SpinLattice:
    """L x L grid of spins in {+1, -1} on a torus."""

    def __init__(self, spins: np.ndarray):
        spins = np.asarray(spins)
        if spins.ndim != 2 or spins.shape[0] != spins.shape[1]:
            raise ConfigurationError("spin array must be square")
        if spins.shape[0] < 2:
            raise ConfigurationError(
                f"side length must be at least 2, got {spins.shape[0]}"
            )
        if not np.isin(spins, (HONEST, EVADER)).all():
            raise ConfigurationError("every spin must be +1 or -1")
        self._spins = spins.astype(np.int8)

    @classmethod
    def all_honest(cls, side_length: int) -> "SpinLattice":
        """Fresh lattice with every agent honest (+1)."""
        if side_length < 2:
            raise ConfigurationError(
                f"side length must be at least 2, got {side_length}"
            )
        return cls(np.ones((side_length, side_length), dtype=np.int8))

    @property
    def side_length(self) -> int:
        return self._spins.shape[0]

    @property
    def spins(self) -> np.ndarray:
        """The underlying int8 spin array (mutated in place by the dynamics)."""
        return self._spins

    def spin(self, row: int, col: int) -> int:
        return int(self._spins[row, col])

    def set_spin(self, row: int, col: int, value: int) -> None:
        if value != HONEST and value != EVADER:
            raise ConfigurationError("spin value must be +1 or -1")
        self._spins[row, col] = value

    def neighbor_sum(self, row: int, col: int) -> int:
        """Sum of the four nearest-neighbour spins, wrapping at the edges."""
        s = self._spins
        L = s.shape[0]
        return int(
            s[(row - 1) % L, col]
            + s[(row + 1) % L, col]
            + s[row, (col - 1) % L]
            + s[row, (col + 1) % L]
        )

    def interaction_energy(self, row: int, col: int) -> int:
        """Alignment of a site with its neighbourhood: spin times neighbour sum.

        Even integer in [-4, 4]; +4 means fully conforming, -4 fully opposed.
        """
        return self.spin(row, col) * self.neighbor_sum(row, col)

    def observables(self, coupling: float = 1.0) -> Observables:
        """Magnetization, evader fraction and total energy of the configuration.

        Energy sums -J * S_i * S_j over each of the 2 L^2 nearest-neighbour
        bonds once (every site paired with its east and south neighbour).
        """
        s = self._spins.astype(np.int64)
        n_sites = s.size
        mag = int(s.sum())
        bonds = (s * np.roll(s, -1, axis=0)).sum() + (s * np.roll(s, -1, axis=1)).sum()
        return Observables(
            magnetization=mag,
            evasion_fraction=(n_sites - mag) / (2 * n_sites),
            total_energy=float(-coupling * bonds),
        )

    def evader_count(self) -> int:
        return int((self._spins == EVADER).sum())

    def copy(self) -> "SpinLattice":
        return SpinLattice(self._spins.copy())

    def __eq__(self, other) -> bool:
        return isinstance(other, SpinLattice) and np.array_equal(
            self._spins, other._spins
        )
