"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

Run with `pytest tests/test_acceptance.py -v -s` to see the per-criterion
report lines.  The heavy criteria (long equilibrium runs at side 256) take
a couple of minutes in total on two cores.
"""

import io
import time

import numpy as np
import pytest
from scipy.signal import find_peaks

from taxising import (
    ModelParams,
    estimate_equilibrium,
    flip_probability,
    run_baseline_series,
    run_grid,
    run_series,
    verify_against_enumeration,
)
from taxising import kernels
from taxising.output import write_grid_csv, write_series_csv

THREADS = 2

# Independently recomputed (1 - sinh(1)^-4)^(1/8) at 30-digit precision.
ONSAGER_M_AT_T2 = 0.911319377877496


def report(number, description, passed, detail):
    verdict = "PASS" if passed else "FAIL"
    print(f"ACCEPTANCE {number} {verdict}: {description} ({detail})")
    assert passed, f"criterion {number} failed: {description} ({detail})"


def series_csv_bytes(series) -> bytes:
    buf = io.StringIO()
    write_series_csv(buf, series)
    return buf.getvalue().encode()


def test_criterion_1_flip_probability_table():
    expected = {
        0.25: {-4: 1.0, -2: 1.0, 0: 0.5, 2: 0.0, 4: 0.0},
        2.0: {-4: 0.982014, -2: 0.880797, 0: 0.5, 2: 0.119203, 4: 0.017986},
        2.5: {-4: 0.960835, -2: 0.832019, 0: 0.5, 2: 0.1679815, 4: 0.0391655},
        3.0: {-4: 0.935031, -2: 0.791392, 0: 0.5, 2: 0.208608, 4: 0.064969},
        25.0: {-4: 0.579325, -2: 0.539915, 0: 0.5, 2: 0.460085, 4: 0.420676},
    }
    worst = 0.0
    for temperature, column in expected.items():
        for ie, value in column.items():
            worst = max(worst, abs(flip_probability(ie, temperature) - value))
    report(
        1,
        "all 25 published flip probabilities reproduced to 1e-6",
        worst <= 1e-6,
        f"max abs error {worst:.2e}",
    )


def test_criterion_2_baseline_high_temperature():
    params = ModelParams(temperature=25.0, side_length=256, sweeps=300, seed=20)
    mean = run_series(params).evasion[200:300].mean()
    report(
        2,
        "T=25 baseline evasion over sweeps 200-300 in [0.48, 0.52]",
        0.48 <= mean <= 0.52,
        f"mean {mean:.4f}",
    )


def test_criterion_3_baseline_low_temperature_matches_onsager():
    target = (1.0 - ONSAGER_M_AT_T2) / 2.0
    params = ModelParams(temperature=2.0, side_length=256, sweeps=2000, seed=30)
    mean = run_series(params).evasion[-500:].mean()
    report(
        3,
        "T=2 baseline evasion matches (1-m)/2 from the exact magnetization",
        abs(mean - target) <= 0.02,
        f"mean {mean:.4f} vs target {target:.4f}",
    )


def test_criterion_4_boltzmann_oracle_equivalence():
    details = []
    all_passed = True
    for temperature in (2.0, 2.5, 25.0):
        result = verify_against_enumeration(
            3, temperature, sweeps=1_000_000, burn_in=10_000, seed=14
        )
        sigmas = abs(result.simulated_energy - result.exact_energy) / result.std_error
        all_passed &= result.passed
        details.append(f"T={temperature}: {sigmas:.2f} sigma")
    report(
        4,
        "3x3 kernel energy matches 512-state enumeration within 3 standard errors",
        all_passed,
        "; ".join(details),
    )


def test_criterion_5_equilibrium_levels():
    cases = [
        (50, 0.90, 0.02, 0.01),
        (10, 0.90, 0.09, 0.02),
        (50, 0.05, 0.21, 0.03),
        (10, 0.05, 0.39, 0.03),
    ]
    details = []
    all_passed = True
    for punishment, audit_prob, target, tolerance in cases:
        params = ModelParams(
            temperature=25.0,
            audit_probability=audit_prob,
            punishment_length=punishment,
            side_length=256,
            sweeps=10_000,
            seed=500,
        )
        estimate = estimate_equilibrium(
            params, burn_in=8000, measure=2000, n_seeds=3, threads=THREADS
        )
        ok = abs(estimate.mean_evasion - target) <= tolerance
        all_passed &= ok
        details.append(
            f"k={punishment} p_a={audit_prob}: {estimate.mean_evasion:.4f} "
            f"(target {target}+-{tolerance})"
        )
    report(5, "long-run equilibrium evasion levels", all_passed, "; ".join(details))


def test_criterion_6_short_run_full_compliance_and_echo_peaks():
    punishment = 50
    params = ModelParams(
        temperature=25.0,
        audit_probability=0.9,
        punishment_length=punishment,
        side_length=256,
        sweeps=300,
        seed=42,
    )
    evasion = run_series(params).evasion
    zeros = np.nonzero(evasion == 0.0)[0]
    reaches_zero = len(zeros) > 0
    spacing_ok = False
    spacing = None
    if reaches_zero:
        tail = evasion[zeros[0]:]
        peaks, _ = find_peaks(tail, height=0.01, distance=20)
        if len(peaks) >= 2:
            spacing = int(peaks[1] - peaks[0])
            spacing_ok = abs(spacing - punishment) <= 10
    report(
        6,
        "evasion hits zero, then echo peaks recur about k sweeps apart",
        reaches_zero and spacing_ok,
        f"first zero at sweep {zeros[0] + 1 if reaches_zero else 'never'}, "
        f"peak spacing {spacing}",
    )


def test_criterion_7_reduction_to_plain_ising_is_bit_identical():
    cases = [
        {"audit_probability": 0.0, "punishment_length": 50},
        {"audit_probability": 0.9, "punishment_length": 0},
    ]
    identical = True
    for kwargs in cases:
        params = ModelParams(
            temperature=25.0, side_length=256, sweeps=300, seed=70, **kwargs
        )
        identical &= series_csv_bytes(run_series(params)) == series_csv_bytes(
            run_baseline_series(params)
        )
    report(
        7,
        "p_a=0 or k=0 output is byte-identical to the enforcement-free path",
        identical,
        f"{len(cases)} configurations compared",
    )


def test_criterion_8_enforcement_monotonicity():
    def level(audit_prob, punishment):
        params = ModelParams(
            temperature=25.0,
            audit_probability=audit_prob,
            punishment_length=punishment,
            side_length=128,
            sweeps=6000,
            seed=800,
        )
        return estimate_equilibrium(
            params, burn_in=4000, measure=2000, n_seeds=5, threads=THREADS
        ).mean_evasion

    configs = ((0.05, 0), (0.05, 10), (0.05, 50), (0.5, 10), (0.9, 10))
    levels = {c: level(*c) for c in configs}
    along_audit = [levels[(p, 10)] for p in (0.05, 0.5, 0.9)]
    along_punishment = [levels[(0.05, k)] for k in (0, 10, 50)]

    audit_ok = all(a >= b for a, b in zip(along_audit, along_audit[1:]))
    punish_ok = all(a >= b for a, b in zip(along_punishment, along_punishment[1:]))
    report(
        8,
        "equilibrium evasion non-increasing in p_a and in k",
        audit_ok and punish_ok,
        f"p_a ladder {[round(v, 3) for v in along_audit]}, "
        f"k ladder {[round(v, 3) for v in along_punishment]}",
    )


def test_criterion_9_determinism_and_throughput():
    # byte-identical grids for any thread count
    grid_params = ModelParams(
        temperature=25.0, punishment_length=10, side_length=64, sweeps=50, seed=90
    )
    buffers = []
    for threads in (1, 2):
        buf = io.StringIO()
        write_grid_csv(buf, run_grid(grid_params, threads=threads))
        buffers.append(buf.getvalue())
    deterministic = buffers[0] == buffers[1]

    # single-thread throughput on the enforcement-active workload
    kernels.warm_up()
    bench = ModelParams(
        temperature=25.0, audit_probability=0.9, punishment_length=50,
        side_length=256, sweeps=300, seed=91,
    )
    start = time.perf_counter()
    run_series(bench)
    elapsed = time.perf_counter() - start
    updates_per_second = bench.sweeps * bench.side_length ** 2 / elapsed

    # the full production-scale grid must finish well under a minute
    fig_params = ModelParams(
        temperature=25.0, punishment_length=50, side_length=256, sweeps=300, seed=92
    )
    start = time.perf_counter()
    run_grid(fig_params, threads=THREADS)
    grid_elapsed = time.perf_counter() - start

    passed = deterministic and updates_per_second >= 2e7 and grid_elapsed < 60.0
    report(
        9,
        "byte-identical output across thread counts; >= 2e7 site updates/s",
        passed,
        f"identical={deterministic}, {updates_per_second:.2e} updates/s, "
        f"101-run grid in {grid_elapsed:.1f}s",
    )
