"""Command-line entry point: ``set-thermo <subcommand> [flags]``.

Subcommands write their tables next to the ``--out`` stem, e.g.
``--out d3.csv`` for ``diagram`` produces ``d3_curves.csv``, ``d3_cloud.csv``
and ``d3_psa.csv``. Exit codes: 0 success, 1 invalid flags, 2 invalid input
file, 3 internal numerical failure.
"""

from __future__ import annotations

import argparse
import math
import sys
from dataclasses import dataclass, fields, replace
from pathlib import Path

import numpy as np

from . import diagrams, ergotropy, heisenberg, sampling
from .errors import NumericalError, ValidationError
from .export import json_text, write_json, write_table
from .spectra import summarize_spectrum
from .states import load_density_matrix, rel_entropy_coherence

EXIT_OK, EXIT_USAGE, EXIT_INPUT, EXIT_NUMERICAL = 0, 1, 2, 3
SUBCOMMANDS = ("diagram", "heisenberg", "ergotropy", "thirdlaw", "summary")
PSA_ZETA_MAX = 20.0


class UsageError(Exception):
    pass


def _parse_omega(text):
    try:
        return tuple(float(x) for x in str(text).split(",") if x.strip())
    except ValueError as exc:
        raise UsageError(f"--omega must be comma-separated numbers: {exc}") from exc


@dataclass(frozen=True)
class RunConfig:
    subcommand: str
    dim: int = 3
    samples: int = 10_000
    seed: int = 0
    out: str | None = None
    format: str = "csv"
    tmin: float = 1e-4
    tmax: float = 100.0
    points: int = 256
    length: int = 3
    omega: tuple | None = None
    tau_max: float = diagrams.DEFAULT_TAU_MAX
    resolution: int = diagrams.DEFAULT_RESOLUTION
    input: str | None = None

    def validate(self):
        if self.subcommand not in SUBCOMMANDS:
            raise UsageError(f"unknown subcommand {self.subcommand!r}")
        if self.dim < 2:
            raise UsageError("--dim must be >= 2")
        if self.samples < 1:
            raise UsageError("--samples must be >= 1")
        if not 0 <= self.seed < 2 ** 64:
            raise UsageError("--seed must be a non-negative 64-bit integer")
        if self.format not in ("csv", "json"):
            raise UsageError("--format must be csv or json")
        if not (0 < self.tmin < self.tmax) or not math.isfinite(self.tmax):
            raise UsageError("need 0 < --tmin < --tmax < inf")
        if self.points < 2:
            raise UsageError("--points must be >= 2")
        if not heisenberg.MIN_LENGTH <= self.length <= heisenberg.MAX_LENGTH:
            raise UsageError(f"--length must be in [{heisenberg.MIN_LENGTH}, {heisenberg.MAX_LENGTH}]")
        if not self.tau_max > 0:
            raise UsageError("--tau-max must be positive")
        if self.resolution < 2:
            raise UsageError("--resolution must be >= 2")
        if self.omega is not None:
            if len(self.omega) < 2 or not all(math.isfinite(x) for x in self.omega):
                raise UsageError("--omega needs at least two finite energy levels")
            if len(set(self.omega)) != len(self.omega):
                raise UsageError("--omega levels must be distinct")
        if self.subcommand == "summary" and self.input is None:
            raise UsageError("summary needs --input")
        return self

    def stem(self):
        if self.out is None:
            return Path(self.subcommand)
        p = Path(self.out)
        return p.with_suffix("") if p.suffix in (".csv", ".json") else p

    def path(self, tag):
        s = self.stem()
        return s.with_name(f"{s.name}_{tag}.{self.format}")


_CONVERTERS = {
    "dim": int, "samples": int, "seed": int, "points": int, "length": int,
    "resolution": int, "tmin": float, "tmax": float, "tau_max": float,
    "omega": _parse_omega, "out": str, "format": str, "input": str,
}


def read_config(path):
    """Parse a ``key = value`` file (``#`` comments, dashes or underscores)."""
    values = {}
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise UsageError(f"cannot read config {path}: {exc}") from exc
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise UsageError(f"{path}:{lineno}: expected key = value")
        key, value = (x.strip() for x in line.split("=", 1))
        key = key.lstrip("-").replace("-", "_")
        if key not in _CONVERTERS:
            raise UsageError(f"{path}:{lineno}: unknown key {key!r}")
        try:
            values[key] = _CONVERTERS[key](value)
        except ValueError as exc:
            raise UsageError(f"{path}:{lineno}: bad value for {key}: {exc}") from exc
    return values


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def build_parser():
    common = _Parser(add_help=False)
    # defaults stay None so config-file values can fill the gaps
    common.add_argument("--dim", type=int)
    common.add_argument("--samples", type=int)
    common.add_argument("--seed", type=int)
    common.add_argument("--out")
    common.add_argument("--format", choices=("csv", "json"))
    common.add_argument("--tmin", type=float)
    common.add_argument("--tmax", type=float)
    common.add_argument("--points", type=int)
    common.add_argument("--length", type=int)
    common.add_argument("--omega", type=_parse_omega, help="comma-separated energy levels")
    common.add_argument("--tau-max", dest="tau_max", type=float)
    common.add_argument("--resolution", type=int, help="points per boundary curve")
    common.add_argument("--input", help="JSON density matrix for 'summary'")
    common.add_argument("--config", help="key = value file; explicit flags win")

    parser = _Parser(prog="set-thermo", description="Spectral temperature and entropy diagrams.")
    sub = parser.add_subparsers(dest="subcommand", required=True, parser_class=_Parser)
    helps = {
        "diagram": "boundary curves, IP-sphere cloud and PSA path",
        "heisenberg": "tau versus T for an open Heisenberg chain, plus diagnostics",
        "ergotropy": "random-state ergotropy scatter and the structured-state bound",
        "thirdlaw": "inverse SET across index-of-purity configurations",
        "summary": "spectral summary of one density matrix",
    }
    for name in SUBCOMMANDS:
        sub.add_parser(name, parents=[common], help=helps[name])
    return parser


def parse_config(argv):
    ns = build_parser().parse_args(argv)
    merged = read_config(ns.config) if ns.config else {}
    for f in fields(RunConfig):
        value = getattr(ns, f.name, None)
        if value is not None:
            merged[f.name] = value
    merged["subcommand"] = ns.subcommand
    return RunConfig(**merged).validate()


# -- subcommands -----------------------------------------------------------

def _temperature_grid(cfg):
    return np.geomspace(cfg.tmin, cfg.tmax, cfg.points)


def _run_diagram(cfg, out):
    d = cfg.dim
    curve_rows = []
    for c in diagrams.boundary_curves(d, cfg.resolution, tau_max=cfg.tau_max):
        curve_rows.extend((c.name, t, tau, s) for t, tau, s in zip(c.t, c.tau, c.entropy))
    write_table(cfg.path("curves"), ["curve_label", "t", "tau", "entropy"], curve_rows, cfg.format)

    ips = sampling.sample_ips(sampling.SamplerConfig(d, cfg.samples, cfg.seed))
    tau, s = diagrams.ips_tau_entropy(ips)
    header = ["tau", "entropy"] + [f"P{k}" for k in range(1, d)]
    write_table(cfg.path("cloud"), header, np.column_stack([tau, s, ips]), cfg.format)

    zeta = np.linspace(0.0, PSA_ZETA_MAX, cfg.points)
    psa = sampling.psa_curve(sampling.PsaParams.default(d), zeta)
    psa[:, 1] = np.minimum(psa[:, 1], cfg.tau_max)
    write_table(cfg.path("psa"), ["zeta", "tau", "entropy"], psa, cfg.format)

    inside = diagrams.envelope_contains(d, tau, s)
    out.write(f"curves: {d * (d - 1) // 2}, cusps: {max(d - 2, 0)}, "
              f"cloud inside envelope: {int(np.sum(inside))}/{len(inside)}\n")


def _run_heisenberg(cfg, out):
    rows = heisenberg.tau_vs_temperature(cfg.length, _temperature_grid(cfg))
    write_table(cfg.path("thermal"), ["T", "tau", "entropy"], rows, cfg.format)
    diag = heisenberg.diagnostics(cfg.length).as_dict()
    diag["slope_printed_formula"] = heisenberg.slope_printed_formula(cfg.length)
    write_json(cfg.stem().with_name(cfg.stem().name + "_diagnostics.json"), diag)
    out.write(json_text(diag))


def _energies(cfg):
    if cfg.omega is not None:
        return np.asarray(cfg.omega, dtype=float)
    if cfg.dim == 2:
        return np.asarray(ergotropy.FIG5_QUBIT_ENERGIES)
    if cfg.dim == 4:
        return np.asarray(ergotropy.FIG5_QUARTIT_ENERGIES)
    raise UsageError("ergotropy needs --omega unless --dim is 2 or 4")


def _run_ergotropy(cfg, out):
    from .states import Hamiltonian

    e = _energies(cfg)
    d = e.size
    eps_top = float(e.max() - e.min())
    sc = ergotropy.ergotropy_scatter(Hamiltonian.from_energies(e), cfg.samples, cfg.seed)
    header = ["lambda_max", "work", "entropy", "tau", "coherence"]
    rows = zip(sc.lambda_max, sc.work, sc.entropy, sc.tau, sc.coherence)
    write_table(cfg.path("scatter"), header, rows, cfg.format)
    curve = ergotropy.structured_curve(d, eps_top, cfg.points)
    curve[:, 3] = np.minimum(curve[:, 3], cfg.tau_max)
    write_table(cfg.path("bound"), ["lambda1", "work", "entropy", "tau"], curve, cfg.format)
    above_s = ergotropy.above_structured_bound(sc, d, eps_top, match="entropy")
    above_t = ergotropy.above_structured_bound(sc, d, eps_top, match="tau")
    out.write(f"samples: {len(sc)}, above bound at equal entropy: {above_s.mean():.6f}, "
              f"at equal tau: {above_t.mean():.6f}\n")


def _run_thirdlaw(cfg, out):
    d = cfg.dim
    sweep = diagrams.third_law_sweep(d, np.linspace(0.0, 1.0, cfg.points))
    header = [f"P{k}" for k in range(1, d)] + ["p_d", "beta", "diverging"]
    rows = (list(ips) + [p, b, bool(dv)] for ips, p, b, dv in
            zip(sweep.ips, sweep.p_d, sweep.beta, sweep.diverging))
    write_table(cfg.path("sweep"), header, rows, cfg.format)
    approach = diagrams.approach_to_purity()
    rows = ((k, p, b) for k, (p, b) in enumerate(approach, 1))
    write_table(cfg.path("approach"), ["k", "p_d", "beta"], rows, cfg.format)
    out.write(f"configurations: {len(sweep.p_d)}, diverging: {int(sweep.diverging.sum())}\n")


def _run_summary(cfg, out):
    try:
        rho = load_density_matrix(cfg.input)
    except ValidationError as exc:
        raise _InputError(str(exc)) from exc
    result = summarize_spectrum(rho.spectrum().values).as_dict()
    result["d"] = rho.d
    result["spectrum"] = rho.spectrum().values.tolist()
    result["coherence"] = rel_entropy_coherence(rho)
    text = json_text(result)
    if cfg.out is not None:
        if cfg.format == "json":
            write_json(cfg.path("summary"), result)
        else:
            keys = sorted(k for k in result if k != "spectrum")
            write_table(cfg.path("summary"), ["key", "value"],
                        [(k, result[k]) for k in keys], "csv")
    out.write(text)


class _InputError(Exception):
    pass


_DISPATCH = {
    "diagram": _run_diagram,
    "heisenberg": _run_heisenberg,
    "ergotropy": _run_ergotropy,
    "thirdlaw": _run_thirdlaw,
    "summary": _run_summary,
}


def run(argv=None, *, stdout=None, stderr=None):
    """Run one CLI invocation and return its exit code."""
    stdout = sys.stdout if stdout is None else stdout
    stderr = sys.stderr if stderr is None else stderr
    try:
        cfg = parse_config(sys.argv[1:] if argv is None else list(argv))
    except UsageError as exc:
        stderr.write(f"set-thermo: error: {exc}\n")
        return EXIT_USAGE
    except SystemExit as exc:  # --help
        return EXIT_OK if not exc.code else EXIT_USAGE
    try:
        _DISPATCH[cfg.subcommand](cfg, stdout)
    except UsageError as exc:
        stderr.write(f"set-thermo: error: {exc}\n")
        return EXIT_USAGE
    except (_InputError, OSError) as exc:
        stderr.write(f"set-thermo: invalid input: {exc}\n")
        return EXIT_INPUT
    except (NumericalError, ValidationError, FloatingPointError, np.linalg.LinAlgError) as exc:
        stderr.write(f"set-thermo: numerical failure in {cfg.subcommand}: "
                     f"{type(exc).__name__}: {exc}\n")
        stderr.write(f"set-thermo: config: {replace(cfg)}\n")
        return EXIT_NUMERICAL
    return EXIT_OK


def main():
    sys.exit(run())
