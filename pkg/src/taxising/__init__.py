"""Heat-bath Ising dynamics with audit-and-punishment enforcement.

Agents on a periodic square lattice are honest taxpayers (+1) or evaders
(-1).  Each sweep every agent reconsiders its type under heat-bath dynamics
driven by its four neighbours and the social temperature; standing evaders
face an audit with probability p_a and, when caught, are forced honest for
the next k sweeps.  Runs are deterministic functions of their parameters.
"""

__version__ = "0.1.0"

from .dynamics import (
    ModelParams,
    flip_probability,
    flip_probability_table,
    sweep,
    update_site,
)
from .enforcement import EnforcementState, audit
from .errors import ConfigurationError
from .experiment import (
    CRITICAL_TEMPERATURE,
    EquilibriumEstimate,
    SimulationRecord,
    SweepGrid,
    TimeSeries,
    VerificationReport,
    estimate_equilibrium,
    exact_boltzmann_stats,
    onsager_spontaneous_magnetization,
    run_baseline_series,
    run_grid,
    run_series,
    run_series_detailed,
    verify_against_enumeration,
)
from .lattice import EVADER, HONEST, Observables, SpinLattice
from .rng import RandomStream, derive_seed

__all__ = [
    "CRITICAL_TEMPERATURE",
    "ConfigurationError",
    "EVADER",
    "EnforcementState",
    "EquilibriumEstimate",
    "HONEST",
    "ModelParams",
    "Observables",
    "RandomStream",
    "SimulationRecord",
    "SpinLattice",
    "SweepGrid",
    "TimeSeries",
    "VerificationReport",
    "audit",
    "derive_seed",
    "estimate_equilibrium",
    "exact_boltzmann_stats",
    "flip_probability",
    "flip_probability_table",
    "onsager_spontaneous_magnetization",
    "run_baseline_series",
    "run_grid",
    "run_series",
    "run_series_detailed",
    "sweep",
    "update_site",
    "verify_against_enumeration",
]
