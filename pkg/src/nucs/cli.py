"""Command-line front end: ``nucs {spectrum,verify,wavefunction,trace}``.

Exit codes: 0 ok, 1 compute error, 2 usage error, 3 verification tolerance
failure.  Data goes to standard output and diagnostics to standard error.
Floats are written with ``repr`` (shortest round-trip form), so identical
arguments give byte-identical output.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
import warnings
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from . import nu
from .errors import NucsError
from .oracle import GridSpec, radial_eigen
from .systems import (
    CASE_I,
    CASE_II,
    SYSTEM_KINDS,
    ABMonopole,
    CoulombRing,
    Hartmann,
    QuantumNumbers,
    RingOscillator,
    SpectrumEntry,
    SystemParams,
    UnitSystem,
    angular_form,
    angular_reduction,
    bound_state,
    effective_l,
    energy_closed_form,
    energy_nu_rootfind,
    params_to_dict,
    radial_form,
    spectrum_table,
)

EXIT_OK = 0
EXIT_COMPUTE = 1
EXIT_USAGE = 2
EXIT_TOLERANCE = 3

SPECTRUM_COLUMNS = ("system", "n", "ntilde", "m", "l_eff", "energy", "method", "single_valued")
VERIFY_COLUMNS = (
    "system", "n", "ntilde", "m", "l_eff", "closed_form", "nu_rootfind", "fd_oracle", "abs_dev", "rel_dev", "passed",
)
WAVEFUNCTION_COLUMNS = ("r", "theta", "phi", "radial_value", "angular_value", "modulus", "phase")
TRACE_COLUMNS = ("k_index", "sign", "k", "pi_c0", "pi_c1", "tau_c0", "tau_c1", "tau_slope", "lambda", "selected")


class UsageError(Exception):
    """Bad command line; the message names the offending flag."""

    def __init__(self, flag: str, constraint: str):
        super().__init__(f"{flag}: {constraint}")
        self.flag = flag


class ComputeError(Exception):
    """A library error raised while executing an otherwise valid command."""


@dataclass
class Command:
    subcommand: str
    params: SystemParams
    units: UnitSystem
    fmt: str = "json"
    n: tuple[int, ...] = (0,)
    ntilde: tuple[int, ...] = (0,)
    m: tuple[int, ...] = (0,)
    angular_case: str = CASE_II
    tol: float = 1e-3
    grid: Optional[GridSpec] = None
    extra: dict = field(default_factory=dict)


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError("usage", message)


def _int_range(text: str, flag: str) -> tuple[int, ...]:
    """``"3"`` or ``"a..b"`` (inclusive) or a comma list."""
    try:
        if ".." in text:
            lo, hi = (int(part) for part in text.split("..", 1))
            if hi < lo:
                raise UsageError(flag, f"empty range {text!r}")
            return tuple(range(lo, hi + 1))
        return tuple(int(part) for part in text.split(","))
    except ValueError:
        raise UsageError(flag, f"expected an integer, a list or a range a..b, got {text!r}") from None


def _float_values(text: str, flag: str, samples: int) -> tuple[float, ...]:
    """``"x"``, a comma list, or ``"a..b"`` sampled at ``samples`` points."""
    try:
        if ".." in text:
            lo, hi = (float(part) for part in text.split("..", 1))
            return tuple(float(v) for v in np.linspace(lo, hi, samples))
        return tuple(float(part) for part in text.split(","))
    except ValueError:
        raise UsageError(flag, f"expected numbers or a range a..b, got {text!r}") from None


def _build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--system", required=True, choices=sorted(SYSTEM_KINDS))
    for flag in ("--Z", "--B", "--C", "--eta", "--sigma", "--flux", "--g", "--q", "--m-tilde", "--A"):
        common.add_argument(flag, type=float)
    common.add_argument("--hbar", type=float, default=1.0)
    common.add_argument("--mu", type=float, default=1.0)
    common.add_argument("--e", type=float, default=1.0, dest="e_charge")
    common.add_argument("--format", choices=("json", "csv"), default="json", dest="fmt")
    common.add_argument("--case", choices=(CASE_I, CASE_II), default=CASE_II)

    quantum = argparse.ArgumentParser(add_help=False)
    quantum.add_argument("--n", default="0")
    quantum.add_argument("--ntilde", default="0")
    quantum.add_argument("--m", default="0")

    parser = _Parser(prog="nucs", description="Nikiforov-Uvarov bound states of separable non-central potentials.")
    sub = parser.add_subparsers(dest="subcommand", required=True, parser_class=_Parser)
    sub.add_parser("spectrum", parents=[common, quantum], help="closed-form energies")
    verify = sub.add_parser("verify", parents=[common, quantum], help="closed form vs NU root-finding vs oracle")
    verify.add_argument("--tol", type=float, default=1e-3)
    verify.add_argument("--points", type=int)
    verify.add_argument("--r-max", type=float)
    wave = sub.add_parser("wavefunction", parents=[common, quantum], help="sample a normalised eigenfunction")
    wave.add_argument("--r", default="0..10")
    wave.add_argument("--theta", default=repr(math.pi / 2))
    wave.add_argument("--phi", type=float, default=0.0)
    wave.add_argument("--samples", type=int, default=11)
    trace = sub.add_parser("trace", parents=[common], help="dump the NU branch table")
    trace.add_argument("--part", choices=("radial", "angular"), default="radial")
    trace.add_argument("--l", type=float)
    trace.add_argument("--E", type=float)
    trace.add_argument("--m", type=int, default=0)
    trace.add_argument("--ntilde", type=int, default=0)
    return parser


def _require(ns, attr: str, flag: str) -> float:
    value = getattr(ns, attr)
    if value is None:
        raise UsageError(flag, f"required for --system {ns.system}")
    return value


def _positive(value: float, flag: str) -> float:
    if not value > 0.0:
        raise UsageError(flag, f"must be positive, got {value!r}")
    return value


def _non_negative(value: float, flag: str) -> float:
    if value < 0.0:
        raise UsageError(flag, f"must be non-negative, got {value!r}")
    return value


def _build_params(ns, units: UnitSystem, m_values: Sequence[int]) -> SystemParams:
    kind = ns.system
    if kind == "coulomb-ring":
        Z = _positive(_require(ns, "Z", "--Z"), "--Z")
        B = _non_negative(ns.B or 0.0, "--B")
        C = ns.C or 0.0
        for m in m_values:
            if (m * m + B) ** 2 < C * C:
                raise UsageError("--C", f"(m^2+B)^2 >= C^2 violated for m={m} (B={B!r}, C={C!r})")
        return CoulombRing(Z, B, C)
    if kind == "hartmann":
        return Hartmann(_positive(_require(ns, "eta", "--eta"), "--eta"), _positive(_require(ns, "sigma", "--sigma"), "--sigma"))
    if kind == "ab-monopole":
        Z = _positive(_require(ns, "Z", "--Z"), "--Z")
        if ns.q is not None or ns.m_tilde is not None:
            if ns.flux is not None or ns.g is not None:
                raise UsageError("--q", "give either --q/--m-tilde or --flux/--g, not both")
            if len(m_values) != 1:
                raise UsageError("--m-tilde", "the effective form needs a single --m value")
            q = _require(ns, "q", "--q")
            mt = _require(ns, "m_tilde", "--m-tilde")
            return ABMonopole.from_effective(Z, q, mt, m_values[0], units)
        return ABMonopole(Z, _require(ns, "flux", "--flux"), _require(ns, "g", "--g"))
    A = _positive(_require(ns, "A", "--A"), "--A")
    return RingOscillator(A, _non_negative(ns.B or 0.0, "--B"))


def parse(argv: Sequence[str]) -> Command:
    """Parse and validate ``argv``; raises :class:`UsageError` on bad input."""
    ns = _build_parser().parse_args(list(argv))
    try:
        units = UnitSystem(ns.hbar, ns.mu, ns.e_charge)
    except ValueError as exc:
        raise UsageError("--hbar/--mu/--e", str(exc)) from None
    if ns.subcommand == "trace":
        m_values = (ns.m,)
        n_values, nt_values = (0,), (ns.ntilde,)
    else:
        n_values = _int_range(ns.n, "--n")
        nt_values = _int_range(ns.ntilde, "--ntilde")
        m_values = _int_range(ns.m, "--m")
        if min(n_values) < 0:
            raise UsageError("--n", "must be non-negative")
        if min(nt_values) < 0:
            raise UsageError("--ntilde", "must be non-negative")
    if ns.subcommand == "trace" and ns.ntilde < 0:
        raise UsageError("--ntilde", "must be non-negative")
    params = _build_params(ns, units, m_values)
    cmd = Command(ns.subcommand, params, units, ns.fmt, n_values, nt_values, m_values, ns.case)

    if ns.subcommand == "verify":
        cmd.tol = _positive(ns.tol, "--tol")
        if ns.points is not None or ns.r_max is not None:
            try:
                cmd.grid = GridSpec(ns.points or GridSpec().n_points, ns.r_max)
            except ValueError as exc:
                raise UsageError("--points/--r-max", str(exc)) from None
    elif ns.subcommand == "wavefunction":
        if ns.samples < 1:
            raise UsageError("--samples", "must be at least 1")
        if len(n_values) != 1 or len(nt_values) != 1 or len(m_values) != 1:
            raise UsageError("--n", "wavefunction takes a single (n, ntilde, m)")
        r = _float_values(ns.r, "--r", ns.samples)
        if min(r) < 0.0:
            raise UsageError("--r", "radii must be non-negative")
        theta = _float_values(ns.theta, "--theta", ns.samples)
        if not all(0.0 < t < math.pi for t in theta):
            raise UsageError("--theta", "angles must lie strictly inside (0, pi)")
        cmd.extra = {"r": r, "theta": theta, "phi": ns.phi}
    elif ns.subcommand == "trace":
        if ns.part == "radial" and ns.E is None:
            raise UsageError("--E", "required for --part radial")
        cmd.extra = {"part": ns.part, "l": ns.l, "E": ns.E}
    return cmd


def _units_dict(units: UnitSystem) -> dict:
    return {"hbar": units.hbar, "mu": units.mu, "e_charge": units.e_charge}


def _emit_json(payload: dict, out) -> None:
    json.dump(payload, out, indent=2)
    out.write("\n")


def _csv_cell(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, (float, np.floating)):
        return repr(float(value))
    if value is None:
        return ""
    return str(value)


def _emit_csv(columns: Sequence[str], rows: list[dict], out) -> None:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([_csv_cell(row[c]) for c in columns])
    out.write(buf.getvalue())


def _quantum_grid(cmd: Command) -> list[QuantumNumbers]:
    return [
        QuantumNumbers(n, nt, m, cmd.angular_case)
        for n in cmd.n
        for nt in cmd.ntilde
        for m in cmd.m
    ]


def _spectrum(cmd: Command, out) -> int:
    wanted = set(_quantum_grid(cmd))
    table = spectrum_table(cmd.params, max(cmd.n), max(cmd.ntilde), sorted(set(cmd.m)), cmd.units, cmd.angular_case)
    entries = [e for e in table if e.qn in wanted]
    if cmd.fmt == "csv":
        _emit_csv(SPECTRUM_COLUMNS, [e.to_dict() for e in entries], out)
    else:
        _emit_json(
            {"system": params_to_dict(cmd.params), "units": _units_dict(cmd.units), "entries": [e.to_dict() for e in entries]},
            out,
        )
    return EXIT_OK


def _oracle_energy(cmd: Command, qn: QuantumNumbers, l_eff: float) -> float:
    result = radial_eigen(cmd.params, l_eff, qn.n + 1, cmd.grid, cmd.units, tol=cmd.tol)
    return float(result.best[qn.n])


def verify_rows(cmd: Command) -> list[dict]:
    rows = []
    for qn in _quantum_grid(cmd):
        closed = energy_closed_form(cmd.params, qn, cmd.units)
        found = energy_nu_rootfind(cmd.params, qn, cmd.units).energy
        oracle = _oracle_energy(cmd, qn, closed.l_eff)
        dev = max(abs(found - closed.energy), abs(oracle - closed.energy))
        rel = dev / abs(closed.energy)
        rows.append(
            {
                "system": cmd.params.kind,
                "n": qn.n,
                "ntilde": qn.ntilde,
                "m": qn.m,
                "l_eff": closed.l_eff,
                "closed_form": closed.energy,
                "nu_rootfind": found,
                "fd_oracle": oracle,
                "abs_dev": dev,
                "rel_dev": rel,
                "passed": rel <= cmd.tol,
            }
        )
    return rows


def _verify(cmd: Command, out) -> int:
    rows = verify_rows(cmd)
    ok = all(row["passed"] for row in rows)
    if cmd.fmt == "csv":
        _emit_csv(VERIFY_COLUMNS, rows, out)
    else:
        _emit_json(
            {
                "system": params_to_dict(cmd.params),
                "units": _units_dict(cmd.units),
                "tolerance": cmd.tol,
                "passed": ok,
                "rows": rows,
            },
            out,
        )
    if not ok:
        print(f"verification failed: some relative deviation exceeds {cmd.tol!r}", file=sys.stderr)
    return EXIT_OK if ok else EXIT_TOLERANCE


def _wavefunction(cmd: Command, out) -> int:
    qn = _quantum_grid(cmd)[0]
    state = bound_state(cmd.params, qn, cmd.units)
    rows = []
    for r in cmd.extra["r"]:
        for theta in cmd.extra["theta"]:
            sample = state.sample(r, theta, cmd.extra["phi"])
            rows.append({c: getattr(sample, c) for c in WAVEFUNCTION_COLUMNS})
    if cmd.fmt == "csv":
        _emit_csv(WAVEFUNCTION_COLUMNS, rows, out)
    else:
        _emit_json(
            {
                "system": params_to_dict(cmd.params),
                "units": _units_dict(cmd.units),
                "state": {"n": qn.n, "ntilde": qn.ntilde, "m": qn.m, "l_eff": state.l_eff, "energy": state.energy},
                "normalization": {"radial": state.radial_norm, "angular": state.angular_norm},
                "samples": rows,
            },
            out,
        )
    return EXIT_OK


def trace_form(cmd: Command) -> nu.HypergeometricForm:
    part, l_eff, m = cmd.extra["part"], cmd.extra["l"], cmd.m[0]
    if l_eff is None:
        l_eff = effective_l(cmd.params, cmd.ntilde[0], m, cmd.angular_case, cmd.units)
    if part == "radial":
        return radial_form(cmd.params, l_eff, cmd.extra["E"], cmd.units)
    angular_reduction(cmd.params, m, cmd.units)
    return angular_form(cmd.params, l_eff, m, cmd.units)


def trace_rows(eq: nu.HypergeometricForm) -> tuple[list[float], list[dict]]:
    """k candidates and one row per ``(k, sign)`` branch, the selected one flagged."""
    ks = nu.k_candidates(eq)
    rows = [br for i, k in enumerate(ks, start=1) for br in nu.branches(eq, k, i)]
    chosen = nu.select_physical(rows, eq)
    table = [
        {
            "k_index": br.k_index,
            "sign": "+" if br.sign > 0 else "-",
            "k": br.k,
            "pi_c0": br.pi.c0,
            "pi_c1": br.pi.c1,
            "tau_c0": br.tau.c0,
            "tau_c1": br.tau.c1,
            "tau_slope": br.tau_slope,
            "lambda": br.lam,
            "selected": br == chosen,
        }
        for br in rows
    ]
    return ks, table


def _trace(cmd: Command, out) -> int:
    eq = trace_form(cmd)
    ks, table = trace_rows(eq)
    if cmd.fmt == "csv":
        _emit_csv(TRACE_COLUMNS, table, out)
        return EXIT_OK
    selected = next(row for row in table if row["selected"])
    _emit_json(
        {
            "system": params_to_dict(cmd.params),
            "units": _units_dict(cmd.units),
            "part": cmd.extra["part"],
            "form": {
                "sigma": list(eq.sigma.coeffs),
                "sigma_tilde": list(eq.sigma_tilde.coeffs),
                "tau_tilde": list(eq.tau_tilde.coeffs),
                "domain": [eq.domain[0], eq.domain[1] if math.isfinite(eq.domain[1]) else "inf"],
            },
            "k_candidates": ks,
            "branches": table,
            "selected": selected,
        },
        out,
    )
    return EXIT_OK


_DISPATCH = {"spectrum": _spectrum, "verify": _verify, "wavefunction": _wavefunction, "trace": _trace}


def execute(cmd: Command, out=None) -> int:
    """Run ``cmd`` and write its output; returns the exit code."""
    out = out or sys.stdout
    buf = io.StringIO()
    try:
        with warnings.catch_warnings():
            warnings.simplefilter("always")
            code = _DISPATCH[cmd.subcommand](cmd, buf)
    except (NucsError, ValueError) as exc:
        raise ComputeError(f"{type(exc).__name__}: {exc}") from exc
    out.write(buf.getvalue())
    return code


def main(argv: Optional[Sequence[str]] = None) -> int:
    argv = sys.argv[1:] if argv is None else argv
    try:
        cmd = parse(argv)
    except UsageError as exc:
        print(f"nucs: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    try:
        return execute(cmd)
    except ComputeError as exc:
        print(f"nucs: compute error: {exc}", file=sys.stderr)
        return EXIT_COMPUTE


if __name__ == "__main__":
    sys.exit(main())
