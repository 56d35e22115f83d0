"""Command-line front end: scans, validation runs and serialized outputs.

Subcommands: ``critical``, ``steady``, ``spectrum``, ``asymmetry-map``,
``validate``.  Numeric output uses 17 significant digits so files
round-trip exactly, and every data file is accompanied by (or embeds) the
fully resolved configuration so the output is self-describing.  Files are
written atomically (temporary file in the same directory, then rename).

Exit codes: 0 success, 2 argument/validation error, 3 unstable regime,
4 numerical failure, 5 validation-suite failure.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import tempfile

import numpy as np

from .errors import (
    ConsistencyError,
    NumericalError,
    ParameterError,
    RegimeError,
    SolverError,
)
from .linear import build_fluctuation_system, intracavity_spectra, output_spectra_values
from .model import SystemParams, critical_pump, solve_steady_state
from .steering import asymmetry_map, frequency_scan
from .stochastic import IntegrationConfig
from .validation import run_validation

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_UNSTABLE = 3
EXIT_NUMERICAL = 4
EXIT_VALIDATION = 5


def _fmt(x) -> str:
    """17-significant-digit decimal rendering, round-trip exact for floats."""
    return "%.17g" % float(x)


def _atomic_write(path: str, text: str):
    directory = os.path.dirname(os.path.abspath(path)) or "."
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp-", text=True)
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _write_json(obj, out: list, indent: str):
    """Minimal JSON writer so floats always serialize via %.17g.

    json.dumps hardwires float.__repr__, which would make JSON and CSV
    disagree on trailing digits.
    """
    pad = indent + "  "
    if obj is None or obj is True or obj is False:
        out.append(json.dumps(obj))
    elif isinstance(obj, str):
        out.append(json.dumps(obj))
    elif isinstance(obj, (int, np.integer)):
        out.append(str(int(obj)))
    elif isinstance(obj, (float, np.floating)):
        out.append(_fmt(obj))
    elif isinstance(obj, complex):
        _write_json({"re": obj.real, "im": obj.imag}, out, indent)
    elif isinstance(obj, np.ndarray):
        _write_json(obj.tolist(), out, indent)
    elif isinstance(obj, dict):
        if not obj:
            out.append("{}")
            return
        out.append("{")
        for i, (key, value) in enumerate(obj.items()):
            out.append(("," if i else "") + "\n" + pad + json.dumps(str(key)) + ": ")
            _write_json(value, out, pad)
        out.append("\n" + indent + "}")
    elif isinstance(obj, (list, tuple)):
        if not obj:
            out.append("[]")
            return
        out.append("[")
        for i, value in enumerate(obj):
            out.append(("," if i else "") + "\n" + pad)
            _write_json(value, out, pad)
        out.append("\n" + indent + "]")
    else:
        out.append(json.dumps(str(obj)))


def dump_json(obj) -> str:
    parts: list = []
    _write_json(obj, parts, "")
    return "".join(parts) + "\n"


def _add_common_params(p: argparse.ArgumentParser):
    p.add_argument("--config", default=argparse.SUPPRESS,
                   help="JSON file of option values; explicit flags override it")
    p.add_argument("--gamma-a", type=float, default=argparse.SUPPRESS,
                   help="fundamental loss rate (default 1)")
    p.add_argument("--gamma-b", type=float, default=argparse.SUPPRESS,
                   help="harmonic loss rate (default 1)")
    p.add_argument("--kappa", type=float, default=argparse.SUPPRESS,
                   help="nonlinear coupling rate (default 0.01)")
    p.add_argument("--pump-frac", type=float, default=argparse.SUPPRESS,
                   help="pump as a fraction of the critical pump")
    p.add_argument("--epsilon", type=float, default=argparse.SUPPRESS,
                   help="absolute pump amplitude (overrides --pump-frac)")


def _add_scan_flags(p: argparse.ArgumentParser):
    p.add_argument("--omega-min", type=float, default=argparse.SUPPRESS,
                   help="scan start (default -20)")
    p.add_argument("--omega-max", type=float, default=argparse.SUPPRESS,
                   help="scan end (default 20)")
    p.add_argument("--omega-points", type=int, default=argparse.SUPPRESS,
                   help="scan points (default 1001)")


def _add_output_flags(p: argparse.ArgumentParser, out_required: bool):
    p.add_argument("--out", required=out_required, default=argparse.SUPPRESS,
                   help="output file path")
    p.add_argument("--format", choices=("csv", "json"),
                   default=argparse.SUPPRESS, help="output format (default csv)")


_DEFAULTS = {
    "gamma_a": 1.0, "gamma_b": 1.0, "kappa": 0.01,
    "pump_frac": None, "epsilon": None,
    "omega_min": -20.0, "omega_max": 20.0, "omega_points": 1001,
    "format": "csv", "out": None, "seed": 0,
    "ratio_min": 0.05, "ratio_max": 2.0, "ratio_step": 0.05,
    "frac_min": 0.05, "frac_max": 0.95, "frac_step": 0.05,
    "dt": 1e-3, "t_transient": 20.0, "t_sample": 200.0,
    "n_trajectories": 10_000,
}


def _resolve(args: argparse.Namespace) -> dict:
    """Merge defaults, optional JSON config file, then explicit flags."""
    explicit = vars(args)
    resolved = dict(_DEFAULTS)
    config_path = explicit.get("config")
    if config_path is not None:
        try:
            with open(config_path) as fh:
                file_values = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise ParameterError(f"cannot read config file {config_path!r}: {exc}")
        if not isinstance(file_values, dict):
            raise ParameterError("config file must hold a JSON object")
        for key, value in file_values.items():
            norm = key.replace("-", "_")
            if norm not in resolved:
                raise ParameterError(f"unknown config key {key!r}")
            resolved[norm] = value
    for key, value in explicit.items():
        if key in ("config", "func", "command"):
            continue
        resolved[key] = value
    return resolved


def _params_from(resolved: dict) -> SystemParams:
    base = SystemParams(gamma_a=resolved["gamma_a"], gamma_b=resolved["gamma_b"],
                        kappa=resolved["kappa"], epsilon=0.0)
    if resolved.get("epsilon") is not None:
        eps = float(resolved["epsilon"])
    elif resolved.get("pump_frac") is not None:
        eps = float(resolved["pump_frac"]) * critical_pump(base)
    else:
        eps = 0.0
    return SystemParams(gamma_a=base.gamma_a, gamma_b=base.gamma_b,
                        kappa=base.kappa, epsilon=eps)


def _omega_grid(resolved: dict) -> np.ndarray:
    n = int(resolved["omega_points"])
    if n < 1:
        raise ParameterError(f"omega_points must be >= 1, got {n}")
    lo, hi = float(resolved["omega_min"]), float(resolved["omega_max"])
    if n > 1 and not hi > lo:
        raise ParameterError("omega_max must exceed omega_min")
    return np.linspace(lo, hi, n)


def _params_dict(params: SystemParams) -> dict:
    return {"gamma_a": params.gamma_a, "gamma_b": params.gamma_b,
            "kappa": params.kappa, "epsilon": params.epsilon}


def cmd_critical(args) -> int:
    resolved = _resolve(args)
    params = SystemParams(gamma_a=resolved["gamma_a"], gamma_b=resolved["gamma_b"],
                          kappa=resolved["kappa"], epsilon=0.0)
    print(f"gamma_a = {_fmt(params.gamma_a)}")
    print(f"gamma_b = {_fmt(params.gamma_b)}")
    print(f"kappa   = {_fmt(params.kappa)}")
    print(f"critical_pump = {_fmt(critical_pump(params))}")
    return EXIT_OK


def cmd_steady(args) -> int:
    resolved = _resolve(args)
    params = _params_from(resolved)
    ss = solve_steady_state(params)
    print(f"epsilon  = {_fmt(params.epsilon)}")
    print(f"pump_fraction = {_fmt(params.pump_fraction)}")
    print(f"alpha_ss = {_fmt(ss.alpha_ss)}")
    print(f"beta_ss  = {_fmt(ss.beta_ss)}")
    print(f"residual = {_fmt(ss.residual)}")
    return EXIT_OK


def _spectrum_rows(params: SystemParams, omegas: np.ndarray):
    from .linear import XA, XB, YA, YB

    ss = solve_steady_state(params)
    sys = build_fluctuation_system(params, ss)
    values = output_spectra_values(sys, intracavity_spectra(sys, omegas))
    scan = frequency_scan(params, omegas)
    rows = []
    for i, p in enumerate(scan.points):
        v = values[i]
        rows.append({
            "omega": p.omega,
            "v_xa": v[XA, XA], "v_ya": v[YA, YA],
            "v_xb": v[XB, XB], "v_yb": v[YB, YB],
            "v_xaxb": v[XA, XB], "v_yayb": v[YA, YB],
            "vinf_xa": p.vinf_xa, "vinf_ya": p.vinf_ya,
            "vinf_xb": p.vinf_xb, "vinf_yb": p.vinf_yb,
            "epr_b_given_a": p.epr_b_given_a,
            "epr_a_given_b": p.epr_a_given_b,
            "classification": p.classification.value,
        })
    return ss, sys, scan, rows


SPECTRUM_COLUMNS = ("omega", "v_xa", "v_ya", "v_xb", "v_yb", "v_xaxb", "v_yayb",
                    "vinf_xa", "vinf_ya", "vinf_xb", "vinf_yb",
                    "epr_b_given_a", "epr_a_given_b", "classification")


def _rows_to_csv(columns, rows) -> str:
    lines = [",".join(columns)]
    for row in rows:
        cells = []
        for col in columns:
            value = row[col]
            cells.append(value if isinstance(value, str) else _fmt(value))
        lines.append(",".join(cells))
    return "\n".join(lines) + "\n"


def cmd_spectrum(args) -> int:
    resolved = _resolve(args)
    params = _params_from(resolved)
    omegas = _omega_grid(resolved)

    ss, sys_, scan, rows = _spectrum_rows(params, omegas)

    if resolved["format"] == "csv":
        body = _rows_to_csv(SPECTRUM_COLUMNS, rows)
    else:
        body = dump_json(rows)
    _atomic_write(resolved["out"], body)

    from .linear import stability_eigenvalues
    eigvals, stable = stability_eigenvalues(sys_)
    i_b = int(np.argmin([p.epr_b_given_a for p in scan.points]))
    i_a = int(np.argmin([p.epr_a_given_b for p in scan.points]))
    summary = {
        "params": _params_dict(params),
        "critical_pump": critical_pump(params),
        "pump_fraction": params.pump_fraction,
        "steady_state": {"alpha_ss": ss.alpha_ss, "beta_ss": ss.beta_ss,
                         "residual": ss.residual},
        "eigenvalues": [{"re": v.real, "im": v.imag} for v in eigvals],
        "stable": stable,
        "omega_grid": {"min": float(omegas[0]), "max": float(omegas[-1]),
                       "points": len(omegas)},
        "min_epr_b_given_a": {"value": scan.points[i_b].epr_b_given_a,
                              "omega": scan.points[i_b].omega},
        "min_epr_a_given_b": {"value": scan.points[i_a].epr_a_given_b,
                              "omega": scan.points[i_a].omega},
        "resolved_config": {k: v for k, v in sorted(resolved.items())},
    }
    _atomic_write(resolved["out"] + ".summary.json", dump_json(summary))
    print(f"wrote {resolved['out']} ({len(rows)} rows) and "
          f"{resolved['out']}.summary.json")
    return EXIT_OK


def _grid_from(resolved, lo_key, hi_key, step_key) -> np.ndarray:
    lo = float(resolved[lo_key])
    hi = float(resolved[hi_key])
    step = float(resolved[step_key])
    if step <= 0 or hi < lo:
        raise ParameterError(f"invalid grid [{lo}, {hi}] step {step}")
    n = int(round((hi - lo) / step)) + 1
    return np.round(lo + step * np.arange(n), 12)


def cmd_asymmetry_map(args) -> int:
    resolved = _resolve(args)
    ratios = _grid_from(resolved, "ratio_min", "ratio_max", "ratio_step")
    fracs = _grid_from(resolved, "frac_min", "frac_max", "frac_step")
    omegas = _omega_grid(resolved)

    cells = asymmetry_map(ratios, fracs, omegas,
                          gamma_a=resolved["gamma_a"], kappa=resolved["kappa"])
    rows = [{
        "gamma_ratio": c.gamma_ratio,
        "pump_fraction": c.pump_fraction,
        "indicator": c.indicator,
        "min_epr_b_given_a": c.min_epr_b_given_a,
        "min_epr_a_given_b": c.min_epr_a_given_b,
    } for c in cells]
    columns = ("gamma_ratio", "pump_fraction", "indicator",
               "min_epr_b_given_a", "min_epr_a_given_b")
    if resolved["format"] == "csv":
        body = _rows_to_csv(columns, [
            {**r, "indicator": str(r["indicator"])} for r in rows])
    else:
        body = dump_json(rows)
    _atomic_write(resolved["out"], body)

    failures = [{"gamma_ratio": c.gamma_ratio, "pump_fraction": c.pump_fraction,
                 "reason": c.error} for c in cells if c.indicator == -1]
    summary = {
        "gamma_a": resolved["gamma_a"],
        "kappa": resolved["kappa"],
        "omega_grid": {"min": float(omegas[0]), "max": float(omegas[-1]),
                       "points": len(omegas)},
        "gamma_ratios": list(ratios),
        "pump_fractions": list(fracs),
        "n_cells": len(cells),
        "n_failed_cells": len(failures),
        "failed_cells": failures,
        "resolved_config": {k: v for k, v in sorted(resolved.items())},
    }
    _atomic_write(resolved["out"] + ".summary.json", dump_json(summary))
    print(f"wrote {resolved['out']} ({len(rows)} cells) and "
          f"{resolved['out']}.summary.json")
    if all(c.indicator == -1 for c in cells):
        print("every cell failed", file=sys.stderr)
        return EXIT_NUMERICAL
    return EXIT_OK


def cmd_validate(args) -> int:
    resolved = _resolve(args)
    params = _params_from(resolved)
    cfg = IntegrationConfig(dt=float(resolved["dt"]),
                            t_transient=float(resolved["t_transient"]),
                            t_sample=float(resolved["t_sample"]),
                            n_trajectories=int(resolved["n_trajectories"]),
                            seed=int(resolved["seed"]))
    report = run_validation(params, cfg)
    for check in report.checks:
        status = "PASS" if check.passed else "FAIL"
        print(f"[{status}] {check.name}: {check.detail}")
    if report.passed:
        print("validation passed")
        return EXIT_OK
    print("validation FAILED", file=sys.stderr)
    return EXIT_VALIDATION


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="shgsteer",
        description="Spectral EPR/steering analysis of intracavity "
                    "second harmonic generation")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("critical", help="print the critical pump amplitude")
    _add_common_params(p)
    p.set_defaults(func=cmd_critical)

    p = sub.add_parser("steady", help="solve and print the classical steady state")
    _add_common_params(p)
    p.set_defaults(func=cmd_steady)

    p = sub.add_parser("spectrum",
                       help="frequency scan of output spectra and steering products")
    _add_common_params(p)
    _add_scan_flags(p)
    _add_output_flags(p, out_required=True)
    p.set_defaults(func=cmd_spectrum)

    p = sub.add_parser("asymmetry-map",
                       help="symmetric-steering indicator over a parameter grid")
    _add_common_params(p)
    _add_scan_flags(p)
    _add_output_flags(p, out_required=True)
    for flag, help_text in (("--ratio-min", "smallest gamma_b/gamma_a (default 0.05)"),
                            ("--ratio-max", "largest gamma_b/gamma_a (default 2.0)"),
                            ("--ratio-step", "ratio grid step (default 0.05)"),
                            ("--frac-min", "smallest pump fraction (default 0.05)"),
                            ("--frac-max", "largest pump fraction (default 0.95)"),
                            ("--frac-step", "pump grid step (default 0.05)")):
        p.add_argument(flag, type=float, default=argparse.SUPPRESS, help=help_text)
    p.set_defaults(func=cmd_asymmetry_map)

    p = sub.add_parser("validate",
                       help="run the stochastic/analytic agreement checks")
    _add_common_params(p)
    p.add_argument("--seed", type=int, default=argparse.SUPPRESS,
                   help="master seed (default 0)")
    p.add_argument("--dt", type=float, default=argparse.SUPPRESS,
                   help="integration step (default 1e-3)")
    p.add_argument("--t-transient", type=float, default=argparse.SUPPRESS,
                   help="discarded transient window (default 20)")
    p.add_argument("--t-sample", type=float, default=argparse.SUPPRESS,
                   help="sampling window (default 200)")
    p.add_argument("--n-trajectories", type=int, default=argparse.SUPPRESS,
                   help="ensemble size (default 10000)")
    p.set_defaults(func=cmd_validate)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else 0
    try:
        return args.func(args)
    except ParameterError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except RegimeError as exc:
        print(f"error: above Hopf threshold — {exc}", file=sys.stderr)
        return EXIT_UNSTABLE
    except (SolverError, NumericalError, ConsistencyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())
