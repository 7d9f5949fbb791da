"""Compiled sweep kernels (numba).

These replicate the reference dynamics in ``dynamics.py`` site for site and
draw for draw, with the splitmix64 generator from ``rng.py`` inlined.  The
RNG state is threaded through a one-element uint64 array: keeping the state
inside an array pins its numba type to uint64, so the right-shifts in the
mixer stay logical (a bare integer round-trip would re-enter as int64 and
corrupt the stream).

``baseline_run`` is a separate code path with no enforcement state at all;
it is the reference for the reduction property (p_a = 0 or k = 0 must be
bit-identical to plain Ising dynamics).
"""

import numpy as np
from numba import njit

_GOLDEN = np.uint64(0x9E3779B97F4A7C15)
_MIX_A = np.uint64(0xBF58476D1CE4E5B9)
_MIX_B = np.uint64(0x94D049BB133111EB)
_S30 = np.uint64(30)
_S27 = np.uint64(27)
_S31 = np.uint64(31)
_S11 = np.uint64(11)
_INV_2_53 = 1.0 / 9007199254740992.0


@njit(inline="always")
def _next_uniform(state):
    state = state + _GOLDEN
    z = state
    z = (z ^ (z >> _S30)) * _MIX_A
    z = (z ^ (z >> _S27)) * _MIX_B
    z = z ^ (z >> _S31)
    return state, (z >> _S11) * _INV_2_53


@njit(cache=True, nogil=True)
def uniform_fill(state_arr, out):
    """Fill ``out`` with consecutive uniforms, advancing the stream state."""
    state = state_arr[0]
    for i in range(out.shape[0]):
        state, u = _next_uniform(state)
        out[i] = u
    state_arr[0] = state


@njit(cache=True, nogil=True)
def model_run(spins, countdown, probs, audit_prob, punishment, active, n_sweeps, state_arr):
    """Run ``n_sweeps`` full sweeps of the enforcement model in place.

    Returns (evader_count, caught, released), one entry per sweep, recorded
    after the end-of-sweep countdown decrement.
    """
    L = spins.shape[0]
    evasion = np.empty(n_sweeps, np.int64)
    caught_counts = np.empty(n_sweeps, np.int64)
    released_counts = np.empty(n_sweeps, np.int64)
    state = state_arr[0]

    evaders = 0
    for i in range(L):
        for j in range(L):
            if spins[i, j] == -1:
                evaders += 1

    for t in range(n_sweeps):
        caught = 0
        for i in range(L):
            iu = i - 1 if i > 0 else L - 1
            idn = i + 1 if i < L - 1 else 0
            for j in range(L):
                if countdown[i, j] > 0:
                    continue
                s = spins[i, j]
                if active and s == -1:
                    state, u = _next_uniform(state)
                    if u < audit_prob:
                        spins[i, j] = 1
                        countdown[i, j] = punishment
                        evaders -= 1
                        caught += 1
                        continue
                jl = j - 1 if j > 0 else L - 1
                jr = j + 1 if j < L - 1 else 0
                nsum = spins[iu, j] + spins[idn, j] + spins[i, jl] + spins[i, jr]
                state, u = _next_uniform(state)
                if u < probs[0 if s == 1 else 1, (s * nsum + 4) >> 1]:
                    s = -s
                    spins[i, j] = s
                    if s == -1:
                        evaders += 1
                    else:
                        evaders -= 1
        released = 0
        for i in range(L):
            for j in range(L):
                c = countdown[i, j]
                if c > 0:
                    c -= 1
                    countdown[i, j] = c
                    if c == 0:
                        released += 1
        evasion[t] = evaders
        caught_counts[t] = caught
        released_counts[t] = released

    state_arr[0] = state
    return evasion, caught_counts, released_counts


@njit(cache=True, nogil=True)
def baseline_run(spins, probs, n_sweeps, state_arr):
    """Plain heat-bath Ising sweeps: no audits, no countdowns anywhere."""
    L = spins.shape[0]
    evasion = np.empty(n_sweeps, np.int64)
    state = state_arr[0]

    evaders = 0
    for i in range(L):
        for j in range(L):
            if spins[i, j] == -1:
                evaders += 1

    for t in range(n_sweeps):
        for i in range(L):
            iu = i - 1 if i > 0 else L - 1
            idn = i + 1 if i < L - 1 else 0
            for j in range(L):
                s = spins[i, j]
                jl = j - 1 if j > 0 else L - 1
                jr = j + 1 if j < L - 1 else 0
                nsum = spins[iu, j] + spins[idn, j] + spins[i, jl] + spins[i, jr]
                state, u = _next_uniform(state)
                if u < probs[0 if s == 1 else 1, (s * nsum + 4) >> 1]:
                    spins[i, j] = -s
                    if s == 1:
                        evaders += 1
                    else:
                        evaders -= 1
        evasion[t] = evaders

    state_arr[0] = state
    return evasion


@njit(cache=True, nogil=True)
def baseline_energy_run(spins, probs, coupling, n_sweeps, state_arr):
    """Baseline sweeps recording total energy (each bond once) per sweep."""
    L = spins.shape[0]
    energy = np.empty(n_sweeps, np.float64)
    state = state_arr[0]

    for t in range(n_sweeps):
        for i in range(L):
            iu = i - 1 if i > 0 else L - 1
            idn = i + 1 if i < L - 1 else 0
            for j in range(L):
                s = spins[i, j]
                jl = j - 1 if j > 0 else L - 1
                jr = j + 1 if j < L - 1 else 0
                nsum = spins[iu, j] + spins[idn, j] + spins[i, jl] + spins[i, jr]
                state, u = _next_uniform(state)
                if u < probs[0 if s == 1 else 1, (s * nsum + 4) >> 1]:
                    spins[i, j] = -s
        bond_sum = 0
        for i in range(L):
            idn = i + 1 if i < L - 1 else 0
            for j in range(L):
                jr = j + 1 if j < L - 1 else 0
                bond_sum += spins[i, j] * (spins[i, jr] + spins[idn, j])
        energy[t] = -coupling * bond_sum

    state_arr[0] = state
    return energy


def new_state(seed: int) -> np.ndarray:
    """One-element uint64 array holding the stream state for the kernels."""
    return np.array([seed], dtype=np.uint64)


def warm_up() -> None:
    """Trigger JIT compilation of all kernels on tiny inputs."""
    spins = np.ones((2, 2), np.int8)
    countdown = np.zeros((2, 2), np.int32)
    probs = np.full((2, 5), 0.5)
    model_run(spins, countdown, probs, 0.5, 1, True, 1, new_state(0))
    baseline_run(spins, probs, 1, new_state(0))
    baseline_energy_run(spins, probs, 1.0, 1, new_state(0))
    uniform_fill(new_state(0), np.empty(1))
