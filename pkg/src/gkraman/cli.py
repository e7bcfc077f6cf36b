"""Command-line front end.

Subcommands::

    gkraman state       --config FILE [--out FILE]   dump a coherent-state amplitude table
    gkraman protocol    --config FILE [--out FILE]   run the atom-injection scheme
    gkraman equivalence --config FILE [--out FILE]   interaction vs effective propagator sweep
    gkraman verify      [--config FILE] [--verbose]  run the invariant suites

Configs are flat ``key = value`` text files ('#' starts a comment); lists are
comma-separated.  Exit codes: 0 success, 1 verification failure, 2 config
error, 3 divergent state expansion, 4 improbable postselection.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass
from pathlib import Path

from . import deformation, verify
from .deformation import DeformationSpec
from .errors import DetectionImprobable, DivergentSeries, NonPhysicalSpectrum
from .evolution import equivalence_csv_lines, equivalence_experiment
from .fockspace import DEFAULT_TAIL_TOL, choose_truncation
from .hamiltonian import RamanParams
from .protocol import (DEFAULT_DETECTION_FLOOR, ProtocolConfig,
                       protocol_report_lines, run_protocol)
from .states import GKLabel, gkcs, nonlinear_cs

_FMT = "{:.15g}".format


class ConfigError(ValueError):
    """A scenario file violates the documented schema."""


# ---------------------------------------------------------------------------
# Scenario files
# ---------------------------------------------------------------------------

def _as_float(text: str) -> float:
    return float(text)


def _as_int(text: str) -> int:
    return int(text)


def _as_complex(text: str) -> complex:
    return complex(text.replace(" ", ""))


def _as_floats(text: str) -> tuple[float, ...]:
    return tuple(float(part) for part in text.split(",") if part.strip())


def _as_complexes(text: str) -> tuple[complex, ...]:
    return tuple(_as_complex(part) for part in text.split(",") if part.strip())


def _as_choice(*choices: str):
    def convert(text: str) -> str:
        if text not in choices:
            raise ValueError(f"expected one of {', '.join(choices)}")
        return text
    return convert


_SCHEMA = {
    "spectrum": _as_choice(*sorted(deformation.REGISTRY)),
    "spectrum_table": str,
    "kappa": _as_float,
    "z_re": _as_float,
    "z_im": _as_float,
    "alpha": _as_float,
    "family": _as_choice("nonlinear", "gk"),
    "g1": _as_float,
    "g2": _as_float,
    "delta": _as_float,
    "tau": _as_float,
    "epsilons": _as_complexes,
    "n_trunc": _as_int,
    "tail_tol": _as_float,
    "detection_floor": _as_float,
    "deltas": _as_floats,
    "times": _as_floats,
    "atom_g": _as_complex,
    "atom_e": _as_complex,
    "out": str,
}


@dataclass
class ScenarioConfig:
    """Parsed scenario file; every command reads the subset it needs."""

    spectrum: str = "harmonic"
    spectrum_table: str | None = None
    kappa: float = 1.0
    z_re: float = 0.0
    z_im: float = 0.0
    alpha: float = 0.0
    family: str | None = None
    g1: float | None = None
    g2: float | None = None
    delta: float | None = None
    tau: float | None = None
    epsilons: tuple[complex, ...] = ()
    n_trunc: int | None = None
    tail_tol: float = DEFAULT_TAIL_TOL
    detection_floor: float = DEFAULT_DETECTION_FLOOR
    deltas: tuple[float, ...] = ()
    times: tuple[float, ...] = ()
    atom_g: complex = 2.0 ** -0.5
    atom_e: complex = 2.0 ** -0.5
    out: str | None = None

    @property
    def z(self) -> complex:
        return complex(self.z_re, self.z_im)

    def require(self, *names: str):
        missing = [name for name in names if getattr(self, name) is None]
        if missing:
            raise ConfigError(f"missing required key(s): {', '.join(missing)}")


def load_scenario(path) -> ScenarioConfig:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from None
    values = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{lineno}: expected 'key = value', got {line!r}")
        key, _, value = line.partition("=")
        key, value = key.strip(), value.strip()
        if key not in _SCHEMA:
            raise ConfigError(f"{path}:{lineno}: unknown key {key!r}")
        if key in values:
            raise ConfigError(f"{path}:{lineno}: duplicate key {key!r}")
        try:
            values[key] = _SCHEMA[key](value)
        except ValueError as exc:
            raise ConfigError(f"{path}:{lineno}: bad value for {key!r}: {exc}") from None
    return ScenarioConfig(**values)


def build_spec(config: ScenarioConfig) -> DeformationSpec:
    try:
        if config.spectrum_table is not None:
            return deformation.load_spectrum_table(config.spectrum_table)
        return deformation.get_spec(config.spectrum, kappa=config.kappa)
    except (NonPhysicalSpectrum, OSError, ValueError) as exc:
        raise ConfigError(f"invalid spectrum: {exc}") from None


def _write(lines: list[str], out_path: str | None):
    text = "\n".join(lines) + "\n"
    if out_path is None or out_path == "-":
        sys.stdout.write(text)
    else:
        Path(out_path).write_text(text)


# ---------------------------------------------------------------------------
# Subcommands
# ---------------------------------------------------------------------------

def cmd_state(config: ScenarioConfig, out_path: str | None) -> int:
    """Dump the requested coherent-state amplitudes as CSV rows (n, Re, Im)."""
    spec = build_spec(config)
    family = config.family or ("gk" if config.alpha != 0.0 else "nonlinear")
    n_trunc = config.n_trunc or choose_truncation(config.z, spec, config.tail_tol)
    if family == "gk":
        state = gkcs(GKLabel(config.z, config.alpha), spec, n_trunc)
    else:
        state = nonlinear_cs(config.z, spec, n_trunc)
    lines = ["n,amplitude_re,amplitude_im"]
    for n, amp in enumerate(state.amplitudes):
        lines.append(f"{n},{_FMT(amp.real)},{_FMT(amp.imag)}")
    _write(lines, out_path)
    return 0


def cmd_protocol(config: ScenarioConfig, out_path: str | None) -> int:
    """Run the injection scheme and emit the per-atom / decomposition report."""
    spec = build_spec(config)
    config.require("g1", "g2", "delta", "tau")
    try:
        protocol_config = ProtocolConfig(
            z=config.z, spec=spec,
            params=RamanParams(config.g1, config.g2, config.delta),
            tau=config.tau, epsilons=config.epsilons,
            n_trunc=config.n_trunc, tail_tol=config.tail_tol,
            detection_floor=config.detection_floor)
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
    result = run_protocol(protocol_config)
    _write(protocol_report_lines(result), out_path)
    return 0


def cmd_equivalence(config: ScenarioConfig, out_path: str | None) -> int:
    """Sweep the detuning grid and emit the infidelity CSV."""
    spec = build_spec(config)
    config.require("g1", "g2")
    if not config.deltas or not config.times:
        raise ConfigError("equivalence needs non-empty 'deltas' and 'times' lists")
    n_trunc = config.n_trunc or choose_truncation(config.z, spec, config.tail_tol)
    field = nonlinear_cs(config.z, spec, n_trunc)
    rows = equivalence_experiment(config.deltas, config.g1, config.g2, spec, field,
                                  (config.atom_g, config.atom_e), config.times)
    _write(equivalence_csv_lines(rows), out_path)
    return 0


def cmd_verify(config: ScenarioConfig | None, verbose: bool) -> int:
    """Run the invariant suites; exit 0 only when every check passes."""
    extra_specs = []
    results = []
    if config is not None and (config.spectrum_table is not None or config.spectrum):
        try:
            extra_specs.append(build_spec(config))
        except ConfigError as exc:
            results.append(verify.CheckResult("spectrum", f"configured spectrum: {exc}",
                                              1.0, 0.5))
    results += verify.run_all_suites(extra_specs)

    width = max(len(r.check) for r in results) + 2
    by_suite: dict[str, list[verify.CheckResult]] = {}
    for r in results:
        by_suite.setdefault(r.suite, []).append(r)
    all_passed = True
    for suite, rows in by_suite.items():
        suite_ok = all(r.passed for r in rows)
        all_passed &= suite_ok
        print(f"[{'PASS' if suite_ok else 'FAIL'}] {suite} ({len(rows)} checks)")
        for r in rows:
            if verbose or not r.passed:
                status = "ok" if r.passed else "FAIL"
                print(f"    {r.check:<{width}} residual {r.residual:.3e} "
                      f"(tol {r.tolerance:.1e}) {status}")
    print(f"verify: {'all suites passed' if all_passed else 'FAILURES detected'}")
    return 0 if all_passed else 1


# ---------------------------------------------------------------------------
# Entry point
# ---------------------------------------------------------------------------

def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="gkraman",
        description="Truncated-Fock-space simulator for Gazeau-Klauder state "
                    "generation via intensity-dependent Raman interaction.")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, needs_config in (("state", True), ("protocol", True),
                               ("equivalence", True), ("verify", False)):
        p = sub.add_parser(name)
        p.add_argument("--config", required=needs_config, help="scenario file")
        p.add_argument("--out", default=None, help="output path ('-' = stdout)")
        p.add_argument("--verbose", action="store_true")
    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        if args.command == "verify":
            config = load_scenario(args.config) if args.config else None
            return cmd_verify(config, args.verbose)
        config = load_scenario(args.config)
        out_path = args.out if args.out is not None else config.out
        handler = {"state": cmd_state, "protocol": cmd_protocol,
                   "equivalence": cmd_equivalence}[args.command]
        return handler(config, out_path)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except DivergentSeries as exc:
        print(f"divergent series: {exc}", file=sys.stderr)
        return 3
    except DetectionImprobable as exc:
        print(f"detection improbable: {exc}", file=sys.stderr)
        return 4


if __name__ == "__main__":  # pragma: no cover
    raise SystemExit(main())
