"""Experiment drivers: single runs, audit-probability grids, equilibrium
estimates, and the exact small-lattice oracles used to validate the kernel.

Every run starts from an all-honest lattice with zero countdowns and is
fully determined by its ModelParams, seed included.  Independent runs in a
grid or replicate set draw their seeds from ``rng.derive_seed`` so they can
be executed in any order, or concurrently, without changing the output.
"""

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace

import numpy as np

from . import kernels
from .dynamics import ModelParams, flip_probability_table
from .errors import ConfigurationError
from .lattice import SpinLattice
from .rng import derive_seed

CRITICAL_TEMPERATURE = 2.0 / math.log(1.0 + math.sqrt(2.0))

GRID_STEPS = 101  # audit probability 0.00 .. 1.00 in 1% steps

MAX_ENUMERATION_SIDE = 4


@dataclass(frozen=True)
class TimeSeries:
    """Evasion fraction (and magnetization) after each sweep of one run."""

    evasion: np.ndarray
    magnetization: np.ndarray
    params: ModelParams


@dataclass(frozen=True)
class SimulationRecord:
    """A run's full diagnostics: per-sweep counts plus the final state."""

    evader_counts: np.ndarray
    caught: np.ndarray
    released: np.ndarray
    final_spins: np.ndarray
    final_countdown: np.ndarray
    final_rng_state: int
    params: ModelParams

    def time_series(self) -> TimeSeries:
        n_sites = self.params.side_length ** 2
        return TimeSeries(
            evasion=self.evader_counts / n_sites,
            magnetization=n_sites - 2 * self.evader_counts,
            params=self.params,
        )


@dataclass(frozen=True)
class SweepGrid:
    """Evasion fraction indexed by (audit-probability step, sweep)."""

    audit_probabilities: np.ndarray
    evasion: np.ndarray
    seeds: np.ndarray
    base_params: ModelParams


@dataclass(frozen=True)
class EquilibriumEstimate:
    """Cross-replicate mean of the long-run evasion fraction."""

    mean_evasion: float
    std_error: float
    burn_in_sweeps: int
    measure_sweeps: int
    seeds_used: int
    replicate_means: tuple


@dataclass(frozen=True)
class VerificationReport:
    """Exact-enumeration oracle versus a long heat-bath run."""

    side_length: int
    temperature: float
    exact_energy: float
    simulated_energy: float
    std_error: float
    sweeps: int
    passed: bool


def run_series_detailed(params: ModelParams) -> SimulationRecord:
    """Execute one run and keep per-sweep audit/release diagnostics."""
    lattice = SpinLattice.all_honest(params.side_length)
    spins = lattice.spins
    countdown = np.zeros((params.side_length, params.side_length), dtype=np.int32)
    probs = flip_probability_table(params)
    state = kernels.new_state(params.seed)
    if params.enforcement_active:
        evaders, caught, released = kernels.model_run(
            spins,
            countdown,
            probs,
            params.audit_probability,
            params.punishment_length,
            True,
            params.sweeps,
            state,
        )
    else:
        evaders = kernels.baseline_run(spins, probs, params.sweeps, state)
        caught = np.zeros(params.sweeps, dtype=np.int64)
        released = np.zeros(params.sweeps, dtype=np.int64)
    return SimulationRecord(
        evader_counts=evaders,
        caught=caught,
        released=released,
        final_spins=spins,
        final_countdown=countdown,
        final_rng_state=int(state[0]),
        params=params,
    )


def run_series(params: ModelParams) -> TimeSeries:
    """Evasion-fraction time series of a single run, one entry per sweep."""
    return run_series_detailed(params).time_series()


def run_baseline_series(params: ModelParams) -> TimeSeries:
    """Plain-Ising run through the enforcement-free code path."""
    if params.enforcement_active:
        raise ConfigurationError(
            "baseline run requires audit probability or punishment length of zero"
        )
    lattice = SpinLattice.all_honest(params.side_length)
    spins = lattice.spins
    probs = flip_probability_table(params)
    state = kernels.new_state(params.seed)
    evaders = kernels.baseline_run(spins, probs, params.sweeps, state)
    n_sites = params.side_length ** 2
    return TimeSeries(
        evasion=evaders / n_sites,
        magnetization=n_sites - 2 * evaders,
        params=params,
    )


def _map_ordered(fn, items, threads: int):
    if threads <= 1:
        return [fn(item) for item in items]
    kernels.warm_up()  # compile before fanning out
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, items))


def run_grid(base_params: ModelParams, threads: int = 1) -> SweepGrid:
    """101 independent runs with the audit probability swept 0.00 to 1.00.

    Row i uses p_a = i/100 and seed derive_seed(base seed, i); the output is
    identical for any thread count.
    """
    seeds = np.array(
        [derive_seed(base_params.seed, i) for i in range(GRID_STEPS)], dtype=np.uint64
    )
    probabilities = np.array([i / 100.0 for i in range(GRID_STEPS)])

    def row(i: int) -> np.ndarray:
        p = replace(
            base_params, audit_probability=probabilities[i], seed=int(seeds[i])
        )
        return run_series(p).evasion

    rows = _map_ordered(row, range(GRID_STEPS), threads)
    return SweepGrid(
        audit_probabilities=probabilities,
        evasion=np.stack(rows),
        seeds=seeds,
        base_params=base_params,
    )


def estimate_equilibrium(
    params: ModelParams,
    burn_in: int,
    measure: int,
    n_seeds: int,
    threads: int = 1,
) -> EquilibriumEstimate:
    """Long-run evasion level averaged over independent seed replicates.

    Replicate j runs with seed derive_seed(params.seed, j); each replicate
    contributes the mean evasion over its measurement window, and the
    standard error is taken across replicates.
    """
    if burn_in < 0 or measure < 1:
        raise ConfigurationError(
            f"need burn_in >= 0 and measure >= 1, got {burn_in}, {measure}"
        )
    if burn_in + measure > params.sweeps:
        raise ConfigurationError(
            f"burn_in + measure = {burn_in + measure} exceeds sweeps = {params.sweeps}"
        )
    if n_seeds < 1:
        raise ConfigurationError(f"need at least one seed, got {n_seeds}")

    def replicate(j: int) -> float:
        p = replace(params, seed=derive_seed(params.seed, j))
        series = run_series(p)
        return float(series.evasion[burn_in : burn_in + measure].mean())

    means = _map_ordered(replicate, range(n_seeds), threads)
    std_error = (
        float(np.std(means, ddof=1) / math.sqrt(n_seeds)) if n_seeds > 1 else math.nan
    )
    return EquilibriumEstimate(
        mean_evasion=float(np.mean(means)),
        std_error=std_error,
        burn_in_sweeps=burn_in,
        measure_sweeps=measure,
        seeds_used=n_seeds,
        replicate_means=tuple(means),
    )


def exact_boltzmann_stats(side_length: int, temperature: float):
    """Exact Boltzmann expectations by enumerating all 2^(L^2) configurations.

    Returns (expected energy, expected |magnetization|) for the periodic
    lattice, with the same bond convention as the simulation (each site
    bonded to its east and south neighbour; for L=2 the wrapped bonds
    double up).  Refuses side lengths above 4.
    """
    if side_length < 2 or side_length > MAX_ENUMERATION_SIDE:
        raise ConfigurationError(
            f"enumeration is limited to side lengths 2..{MAX_ENUMERATION_SIDE}, "
            f"got {side_length}"
        )
    if not temperature > 0:
        raise ConfigurationError(
            f"temperature must be positive, got {temperature}"
        )
    L = side_length
    n = L * L
    codes = np.arange(2 ** n, dtype=np.int64)
    spins = 2 * ((codes[:, None] >> np.arange(n)) & 1) - 1  # (2^n, n) in {-1, +1}

    energy = np.zeros(2 ** n, dtype=np.float64)
    for i in range(L):
        for j in range(L):
            a = i * L + j
            east = i * L + (j + 1) % L
            south = ((i + 1) % L) * L + j
            energy -= spins[:, a] * (spins[:, east] + spins[:, south])

    weights = np.exp(-(energy - energy.min()) / temperature)
    weights /= weights.sum()
    abs_mag = np.abs(spins.sum(axis=1))
    return float(weights @ energy), float(weights @ abs_mag)


def onsager_spontaneous_magnetization(temperature: float) -> float:
    """Spontaneous magnetization per site of the infinite square lattice.

    (1 - sinh(2/T)^-4)^(1/8) below the critical temperature, zero above it
    (coupling 1, zero field).
    """
    if not temperature > 0:
        raise ConfigurationError(
            f"temperature must be positive, got {temperature}"
        )
    if temperature >= CRITICAL_TEMPERATURE:
        return 0.0
    return (1.0 - math.sinh(2.0 / temperature) ** -4) ** 0.125


def verify_against_enumeration(
    side_length: int,
    temperature: float,
    sweeps: int = 1_000_000,
    burn_in: int = 10_000,
    seed: int = 0,
    batches: int = 100,
) -> VerificationReport:
    """Compare a long baseline run's mean energy with the exact oracle.

    The run's standard error comes from batch means (``batches`` equal
    blocks of the post-burn-in series); the check passes when the exact and
    simulated energies agree within three standard errors.
    """
    exact_energy, _ = exact_boltzmann_stats(side_length, temperature)
    if sweeps < batches:
        raise ConfigurationError(
            f"need at least {batches} measurement sweeps, got {sweeps}"
        )
    params = ModelParams(
        temperature=temperature,
        side_length=side_length,
        sweeps=1,
        seed=seed,
    )
    probs = flip_probability_table(params)
    spins = SpinLattice.all_honest(side_length).spins
    state = kernels.new_state(params.seed)
    if burn_in > 0:
        kernels.baseline_run(spins, probs, burn_in, state)
    energies = kernels.baseline_energy_run(spins, probs, params.coupling, sweeps, state)

    usable = (sweeps // batches) * batches
    batch_means = energies[:usable].reshape(batches, -1).mean(axis=1)
    std_error = float(batch_means.std(ddof=1) / math.sqrt(batches))
    simulated = float(energies.mean())
    return VerificationReport(
        side_length=side_length,
        temperature=temperature,
        exact_energy=exact_energy,
        simulated_energy=simulated,
        std_error=std_error,
        sweeps=sweeps,
        passed=abs(simulated - exact_energy) <= 3.0 * std_error,
    )
