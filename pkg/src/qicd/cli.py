"""Command-line front end: figure CSVs, configurable sweeps, self-tests.

Exit codes: 0 on success, 1 on validation/usage errors, 2 when a
numerical routine reports non-convergence.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .figures import FIGURES, run_figure
from .photon_stats import Fixed, Rayleigh, ScenarioParams
from .selftest import SUITES, run_selftest
from .sweeps import NonConvergenceError, SweepSpec, ValidationError, run_sweep

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_NONCONVERGENCE = 2


def _load_config(path: str | None) -> dict:
    if path is None:
        return {}
    try:
        with open(path, "r", encoding="utf-8") as fh:
            cfg = json.load(fh)
    except OSError as exc:
        raise ValidationError(f"cannot read config {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ValidationError(f"config {path} is not valid JSON: {exc}") from exc
    if not isinstance(cfg, dict):
        raise ValidationError(f"config {path} must hold a JSON object")
    return cfg


def _parse_set_overrides(pairs: list[str]) -> dict:
    out = {}
    for pair in pairs:
        if "=" not in pair:
            raise ValidationError(f"--set expects key=value, got {pair!r}")
        key, value = pair.split("=", 1)
        out[key.strip()] = value
    return out


def _scenario_from_config(cfg: dict) -> ScenarioParams:
    try:
        n_s = float(cfg["n_s"])
        n_e = float(cfg["n_e"])
    except KeyError as exc:
        raise ValidationError(f"config missing required field {exc.args[0]!r}")
    model = cfg.get("model", "fixed")
    if model == "fixed":
        if "kappa" not in cfg:
            raise ValidationError("fixed model requires a 'kappa' field")
        refl = Fixed(float(cfg["kappa"]))
    elif model == "rayleigh":
        if "kappa_bar" not in cfg:
            raise ValidationError("rayleigh model requires a 'kappa_bar' field")
        refl = Rayleigh(float(cfg["kappa_bar"]))
    else:
        raise ValidationError(f"unknown model {model!r}; valid: fixed, rayleigh")
    try:
        return ScenarioParams(n_s=n_s, n_e=n_e, reflectivity=refl, m=1)
    except ValueError as exc:
        raise ValidationError(str(exc)) from exc


def _m_grid_from_config(cfg: dict) -> tuple[int, ...]:
    grid = cfg.get("m_grid")
    if isinstance(grid, list):
        return tuple(int(m) for m in grid)
    if isinstance(grid, dict):
        try:
            lo, hi, n = float(grid["min"]), float(grid["max"]), int(grid["points"])
        except KeyError as exc:
            raise ValidationError(f"m_grid object missing field {exc.args[0]!r}")
        import numpy as np

        return tuple(int(m) for m in np.unique(np.round(np.geomspace(lo, hi, n)).astype(int)))
    raise ValidationError("config requires 'm_grid': a list of M values or {min, max, points}")


def _sweep_spec_from_config(cfg: dict, overrides: dict) -> SweepSpec:
    merged = dict(cfg)
    merged.update(overrides)
    quantities = merged.get("quantities")
    if not isinstance(quantities, list):
        raise ValidationError("config requires 'quantities': a list of quantity names")
    output = merged.get("output", "sweep.csv")
    return SweepSpec(
        scenario=_scenario_from_config(merged),
        m_grid=_m_grid_from_config(merged),
        quantities=tuple(quantities),
        output_path=str(output),
    )


def _cmd_figure(args: argparse.Namespace) -> int:
    cfg = _load_config(args.config)
    overrides = dict(cfg)
    overrides.update(_parse_set_overrides(args.set or []))
    if args.figure_id not in FIGURES:
        raise ValidationError(
            f"unknown figure {args.figure_id!r}; valid: {' '.join(sorted(FIGURES))}"
        )
    out_dir = Path(args.out) if args.out else Path(overrides.pop("out", "."))
    paths = run_figure(args.figure_id, out_dir, overrides)
    for path in paths:
        print(path)
    return EXIT_OK


def _cmd_sweep(args: argparse.Namespace) -> int:
    cfg = _load_config(args.config)
    spec = _sweep_spec_from_config(cfg, _parse_set_overrides(args.set or []))
    path = run_sweep(spec, linear=args.linear or bool(cfg.get("linear", False)))
    print(path)
    return EXIT_OK


def _cmd_selftest(args: argparse.Namespace) -> int:
    if args.inject_failure is not None and args.inject_failure not in SUITES:
        raise ValidationError(
            f"unknown suite {args.inject_failure!r}; valid: {' '.join(SUITES)}"
        )
    ok, report = run_selftest(inject_failure=args.inject_failure)
    print(report)
    return EXIT_OK if ok else EXIT_VALIDATION


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qi-cd-eval",
        description="Error-probability sweeps for the conversion-module receiver.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    fig = sub.add_parser("figure", help="emit the CSV data behind one reference figure")
    fig.add_argument("figure_id", help=f"one of: {' '.join(sorted(FIGURES))}")
    fig.add_argument("--config", help="JSON config with parameter overrides")
    fig.add_argument("--out", help="output directory (default: current directory)")
    fig.add_argument(
        "--set",
        action="append",
        metavar="KEY=VALUE",
        help="override a single parameter; wins over --config",
    )

    swp = sub.add_parser("sweep", help="run a sweep described by a JSON config")
    swp.add_argument("--config", required=True, help="JSON sweep description")
    swp.add_argument(
        "--set",
        action="append",
        metavar="KEY=VALUE",
        help="override a single config field; wins over --config",
    )
    swp.add_argument("--linear", action="store_true", help="also emit linear-probability columns")

    slf = sub.add_parser("selftest", help="run the reduced invariant suites")
    slf.add_argument("--inject-failure", metavar="SUITE", help=argparse.SUPPRESS)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    handlers = {"figure": _cmd_figure, "sweep": _cmd_sweep, "selftest": _cmd_selftest}
    try:
        return handlers[args.command](args)
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except NonConvergenceError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NONCONVERGENCE


if __name__ == "__main__":
    sys.exit(main())
