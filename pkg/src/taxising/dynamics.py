"""Heat-bath single-spin-flip dynamics.

A site flips with probability p = exp(-dE/T) / (1 + exp(-dE/T)), where
dE = 2*J*I_e + 2*B*S_i is the energy change of the flip (I_e the site's
interaction energy, B the external field).  One sweep visits every site
once in typewriter order (row by row, left to right) and is the model's
unit of time.

Within a sweep each site visit proceeds as: locked sites are skipped
outright; a standing evader faces its audit first and, if caught, takes no
update this sweep; every site still free then takes one heat-bath update.
All positive punishment countdowns are decremented once after the full
pass, and observables are recorded after that decrement.  The random-draw
schedule is therefore: no draws for a locked site, one audit draw for a
standing evader (only while enforcement is active), and one flip draw for
every site that reaches the update step.

The functions here are the plain-python reference used by the tests; the
production runs use the compiled kernels, which replicate this site-visit
and draw schedule exactly.
"""

import math
from dataclasses import dataclass

import numpy as np

from .enforcement import EnforcementState, audit
from .errors import ConfigurationError
from .lattice import EVADER, Observables, SpinLattice
from .rng import MASK64

INTERACTION_LEVELS = (-4, -2, 0, 2, 4)


@dataclass(frozen=True)
class ModelParams:
    """Full configuration of one simulation run."""

    temperature: float
    audit_probability: float = 0.0
    punishment_length: int = 0
    side_length: int = 256
    sweeps: int = 300
    seed: int = 0
    coupling: float = 1.0
    external_field: float = 0.0

    def __post_init__(self):
        if not self.temperature > 0:
            raise ConfigurationError(
                f"temperature must be positive, got {self.temperature}"
            )
        if not 0.0 <= self.audit_probability <= 1.0:
            raise ConfigurationError(
                f"audit probability must be within [0, 1], got {self.audit_probability}"
            )
        if self.punishment_length < 0:
            raise ConfigurationError(
                f"punishment length must be non-negative, got {self.punishment_length}"
            )
        if self.side_length < 2:
            raise ConfigurationError(
                f"side length must be at least 2, got {self.side_length}"
            )
        if self.sweeps < 1:
            raise ConfigurationError(
                f"sweep count must be positive, got {self.sweeps}"
            )
        object.__setattr__(self, "seed", self.seed & MASK64)

    @property
    def enforcement_active(self) -> bool:
        """Audits run only when both p_a and the punishment length are positive."""
        return self.audit_probability > 0.0 and self.punishment_length > 0


def flip_probability(
    interaction_energy: int,
    temperature: float,
    coupling: float = 1.0,
    external_field: float = 0.0,
    spin: int = 1,
) -> float:
    """Heat-bath probability of flipping a spin.

    Evaluated as a numerically stable logistic in x = dE/T: saturates to 0
    or 1 at extreme arguments instead of overflowing.
    """
    if not temperature > 0:
        raise ConfigurationError(
            f"temperature must be positive, got {temperature}"
        )
    delta_e = 2.0 * coupling * interaction_energy + 2.0 * external_field * spin
    x = delta_e / temperature
    if x >= 0:
        e = math.exp(-x)
        return e / (1.0 + e)
    return 1.0 / (1.0 + math.exp(x))


def flip_probability_table(params: ModelParams) -> np.ndarray:
    """Per-run lookup table of flip probabilities.

    Shape (2, 5): row 0 for a +1 spin, row 1 for a -1 spin (the rows differ
    only when the external field is nonzero), columns indexed by
    (I_e + 4) / 2 for I_e in (-4, -2, 0, 2, 4).
    """
    table = np.empty((2, 5), dtype=np.float64)
    for row, spin in enumerate((1, -1)):
        for col, ie in enumerate(INTERACTION_LEVELS):
            table[row, col] = flip_probability(
                ie, params.temperature, params.coupling, params.external_field, spin
            )
    return table


def update_site(
    lattice: SpinLattice,
    enforcement: EnforcementState,
    params: ModelParams,
    row: int,
    col: int,
    rng,
) -> bool:
    """Heat-bath update of one site; returns True when the spin flipped.

    A punishment-locked site is left untouched and consumes no random draw;
    otherwise exactly one uniform is drawn and the spin is negated iff the
    draw falls below the flip probability at the current neighbourhood.
    """
    if enforcement.is_locked(row, col):
        return False
    spin = lattice.spin(row, col)
    p = flip_probability(
        spin * lattice.neighbor_sum(row, col),
        params.temperature,
        params.coupling,
        params.external_field,
        spin,
    )
    if rng.uniform() < p:
        lattice.set_spin(row, col, -spin)
        return True
    return False


def sweep(
    lattice: SpinLattice,
    enforcement: EnforcementState,
    params: ModelParams,
    rng,
) -> Observables:
    """One full pass over the lattice in typewriter order; the unit of time.

    Audits (when enforcement is active) hit standing evaders before their
    update; a caught site is locked for the next punishment_length sweeps and
    skips its update.  Ends with the countdown decrement, then returns the
    post-sweep observables.
    """
    if lattice.side_length != enforcement.side_length:
        raise ConfigurationError(
            "lattice and enforcement state differ in side length: "
            f"{lattice.side_length} vs {enforcement.side_length}"
        )
    active = params.enforcement_active
    L = lattice.side_length
    for row in range(L):
        for col in range(L):
            if enforcement.is_locked(row, col):
                continue
            if active and lattice.spin(row, col) == EVADER:
                caught = audit(
                    lattice,
                    enforcement,
                    params.audit_probability,
                    params.punishment_length,
                    row,
                    col,
                    rng,
                )
                if caught:
                    continue
            update_site(lattice, enforcement, params, row, col, rng)
    enforcement.tick()
    return lattice.observables(params.coupling)
