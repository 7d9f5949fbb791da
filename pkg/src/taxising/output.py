"""Deterministic text output: CSV series/grids, surface matrices, manifests.

All files are UTF-8 with LF line endings and a mandatory header row.
Fractions are written with fixed six decimals so identical runs produce
byte-identical files.
"""

import io
from dataclasses import dataclass, field

from .dynamics import ModelParams
from .experiment import EquilibriumEstimate, SweepGrid, TimeSeries, VerificationReport

FRACTION_FORMAT = "%.6f"


@dataclass
class RunManifest:
    """Provenance sidecar: everything needed to reproduce an output file."""

    command: str
    version: str
    params: ModelParams
    duration_seconds: float
    site_updates_per_second: float
    extra: dict = field(default_factory=dict)

    def lines(self):
        p = self.params
        entries = [
            ("format", "taxising-manifest-1"),
            ("command", self.command),
            ("version", self.version),
            ("temperature", repr(p.temperature)),
            ("coupling", repr(p.coupling)),
            ("external_field", repr(p.external_field)),
            ("audit_probability", repr(p.audit_probability)),
            ("punishment_length", str(p.punishment_length)),
            ("side_length", str(p.side_length)),
            ("sweeps", str(p.sweeps)),
            ("base_seed", str(p.seed)),
            ("rng", "splitmix64"),
            ("seed_derivation", "run i uses mix64(base_seed + (i+1)*0x9E3779B97F4A7C15)"),
        ]
        entries += sorted(self.extra.items())
        entries += [
            ("duration_seconds", "%.3f" % self.duration_seconds),
            ("site_updates_per_second", "%.3e" % self.site_updates_per_second),
        ]
        return [f"{key} = {value}" for key, value in entries]


def write_manifest(stream: io.TextIOBase, manifest: RunManifest) -> None:
    for line in manifest.lines():
        stream.write(line + "\n")


def write_series_csv(stream: io.TextIOBase, series: TimeSeries) -> None:
    """Rows `sweep,evasion_fraction,magnetization`, sweep numbered from 1."""
    stream.write("sweep,evasion_fraction,magnetization\n")
    for t, (f, m) in enumerate(zip(series.evasion, series.magnetization), start=1):
        stream.write("%d,%s,%d\n" % (t, FRACTION_FORMAT % f, m))


def write_grid_csv(stream: io.TextIOBase, grid: SweepGrid) -> None:
    """Long-form rows `p_a,sweep,evasion_fraction`, p_a ascending then sweep."""
    stream.write("p_a,sweep,evasion_fraction\n")
    for p, row in zip(grid.audit_probabilities, grid.evasion):
        for t, f in enumerate(row, start=1):
            stream.write("%.2f,%d,%s\n" % (p, t, FRACTION_FORMAT % f))


def write_grid_matrix(stream: io.TextIOBase, grid: SweepGrid) -> None:
    """Plain matrix (rows = audit probability steps, columns = sweeps).

    Loads directly into gnuplot (`splot 'file' matrix`) or numpy.loadtxt.
    """
    n_rows, n_sweeps = grid.evasion.shape
    stream.write("# evasion fraction; %d rows: p_a = 0.00 .. 1.00 in 0.01 steps\n" % n_rows)
    stream.write("# %d columns: sweep = 1 .. %d\n" % (n_sweeps, n_sweeps))
    for row in grid.evasion:
        stream.write(" ".join(FRACTION_FORMAT % f for f in row) + "\n")


def write_table(stream: io.TextIOBase, temperatures, table) -> None:
    """Flip-probability matrix, interaction-energy rows by temperature columns."""
    header = ["I_e"] + ["T=%g" % t for t in temperatures]
    widths = [max(10, len(h) + 2) for h in header]
    stream.write("".join(h.ljust(w) for h, w in zip(header, widths)) + "\n")
    for ie, row in zip((-4, -2, 0, 2, 4), table):
        cells = ["%d" % ie] + [FRACTION_FORMAT % p for p in row]
        stream.write("".join(c.ljust(w) for c, w in zip(cells, widths)) + "\n")


def write_equilibrium_report(stream: io.TextIOBase, est: EquilibriumEstimate) -> None:
    stream.write("mean_evasion = %.6f\n" % est.mean_evasion)
    stream.write("std_error = %.6f\n" % est.std_error)
    stream.write("burn_in_sweeps = %d\n" % est.burn_in_sweeps)
    stream.write("measure_sweeps = %d\n" % est.measure_sweeps)
    stream.write("seeds_used = %d\n" % est.seeds_used)
    for j, m in enumerate(est.replicate_means):
        stream.write("replicate_%d = %.6f\n" % (j, m))


def write_verification_report(stream: io.TextIOBase, report: VerificationReport) -> None:
    stream.write("side_length = %d\n" % report.side_length)
    stream.write("temperature = %r\n" % report.temperature)
    stream.write("exact_energy = %.6f\n" % report.exact_energy)
    stream.write("simulated_energy = %.6f\n" % report.simulated_energy)
    stream.write("difference = %.6f\n" % (report.simulated_energy - report.exact_energy))
    stream.write("std_error = %.6f\n" % report.std_error)
    stream.write("sweeps = %d\n" % report.sweeps)
    stream.write("verdict = %s\n" % ("PASS" if report.passed else "FAIL"))
