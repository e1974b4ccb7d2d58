"""Command-line front end.

Subcommands
-----------
build       construct a model, print a one-line summary, optionally emit the
            plot-ready CSV table (x, v_minus, v_plus, w, w1, psi0, psi1)
verify      run the numerical verification battery, print the JSON report
spectrum    tabulate numeric levels against the analytically known ones
crosscheck  build the same phi-seeded model through both routes and compare

Exit codes: 0 success / verification passed, 1 verification failed,
2 usage or validation error.

Floats in the CSV table are printed with 17 significant digits so re-parsing
reproduces them bit for bit; JSON uses Python's shortest round-trip form.
"""

from __future__ import annotations

import argparse
import csv
import dataclasses
import json
import sys
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .construct import build_from_phi, build_from_wplus, cross_check_constructions
from .errors import (BrokenSusyError, ConfigError, ExpressionError,
                     GeneratorAdmissibilityError, InadmissibleModelError,
                     NonFiniteIntegrandError, ParameterError, PhiNotMonotoneError)
from .expressions import parse_generator
from .families import FAMILIES, PolyPhiParams, ces_epsilon, ces_exact_spectrum, poly_phi_generator
from .verify import Grid, Tolerances, auto_grid, eigensolve, verify_model

__all__ = ["main", "entry", "build_parser"]

CROSSCHECK_BUDGET = 1e-8
MAX_SPECTRUM_DEPTH = 8
_PARAM_FLAGS = ("a", "b", "epsilon", "A", "alpha", "x0")


def _fmt(v) -> str:
    return format(float(v), ".17g")


@dataclass
class ModelConfig:
    """Effective configuration after merging config file and flags."""

    family: str = "poly-wplus"
    params: dict = field(default_factory=dict)
    expr: Optional[str] = None
    scale_hint: float = 1.0
    grid: dict = field(default_factory=dict)
    tolerances: dict = field(default_factory=dict)
    output: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return dataclasses.asdict(self)


def _load_config_file(path: str) -> ModelConfig:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            raw = json.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config file {path} is not valid JSON: {exc}") from exc
    if not isinstance(raw, dict):
        raise ConfigError(f"config file {path} must contain a JSON object")
    cfg = ModelConfig()
    known = {f.name for f in dataclasses.fields(ModelConfig)}
    for key, value in raw.items():
        if key not in known:
            raise ConfigError(f"unknown config key {key!r} (expected one of {sorted(known)})")
        setattr(cfg, key, value)
    cfg.params = dict(cfg.params or {})
    cfg.grid = dict(cfg.grid or {})
    cfg.tolerances = dict(cfg.tolerances or {})
    cfg.output = dict(cfg.output or {})
    return cfg


def _resolve_config(args) -> ModelConfig:
    cfg = _load_config_file(args.config) if args.config else ModelConfig()
    if args.family:
        cfg.family = args.family
    for name in _PARAM_FLAGS:
        value = getattr(args, name)
        if value is not None:
            cfg.params[name] = value
    if args.expr is not None:
        cfg.expr = args.expr
    if args.scale_hint is not None:
        cfg.scale_hint = args.scale_hint
    if args.grid_l is not None:
        cfg.grid["L"] = args.grid_l
    if args.grid_n is not None:
        cfg.grid["N"] = args.grid_n
    if args.tol_e is not None:
        cfg.tolerances["energy"] = args.tol_e
    out_flag = getattr(args, "out", None) or getattr(args, "emit", None)
    if out_flag:
        cfg.output["path"] = out_flag
    return cfg


def _check_family_params(cfg: ModelConfig):
    spec = FAMILIES.get(cfg.family)
    if cfg.family != "custom" and spec is None:
        raise ConfigError(
            f"unknown family {cfg.family!r} (choose from {sorted(FAMILIES)} or custom)")
    if spec is not None:
        for key in cfg.params:
            if key not in spec.required:
                raise ConfigError(
                    f"parameter {key!r} is not used by family {cfg.family!r} "
                    f"(expected {list(spec.required)})")


def make_model(cfg: ModelConfig):
    if cfg.family == "custom":
        if not cfg.expr:
            raise ConfigError("custom family requires --expr")
        gen = parse_generator(cfg.expr, scale_hint=cfg.scale_hint)
        eps = cfg.params.get("epsilon")
        if eps is not None:
            return build_from_phi(gen, float(eps))
        return build_from_wplus(gen)
    _check_family_params(cfg)
    spec = FAMILIES[cfg.family]
    params = dict(spec.defaults)
    params.update(cfg.params)
    return spec.build(params)


def _resolve_grid(cfg: ModelConfig, model) -> Grid:
    n = int(cfg.grid.get("N", 4001))
    if "L" in cfg.grid:
        return Grid(float(cfg.grid["L"]), n)
    return auto_grid(model, n_points=n)


def _resolve_tolerances(cfg: ModelConfig) -> Tolerances:
    known = {f.name for f in dataclasses.fields(Tolerances)}
    overrides = {}
    for key, value in cfg.tolerances.items():
        if key not in known:
            raise ConfigError(f"unknown tolerance {key!r} (expected one of {sorted(known)})")
        overrides[key] = float(value)
    return Tolerances(**overrides)


def _sweep_values(spec: str):
    try:
        key, rng = spec.split("=", 1)
        start, stop, steps = rng.split(":")
        values = np.linspace(float(start), float(stop), int(steps))
    except ValueError as exc:
        raise ConfigError(f"bad --sweep {spec!r}: expected KEY=START:STOP:STEPS") from exc
    if len(values) < 1:
        raise ConfigError("sweep needs at least one step")
    return key.strip(), sorted(float(v) for v in values)


def _summary_line(cfg: ModelConfig, model) -> str:
    parts = [f"family={cfg.family}"]
    merged = {}
    family_spec = FAMILIES.get(cfg.family)
    if family_spec is not None:
        merged = dict(family_spec.defaults)
        merged.update(cfg.params)
        parts += [f"{k}={_fmt(v)}" for k, v in merged.items()]
    elif cfg.expr:
        parts.append(f"expr={cfg.expr!r}")
    if "epsilon" not in merged:
        parts.append(f"epsilon={_fmt(model.epsilon)}")
    if "x0" not in merged:
        parts.append(f"x0={_fmt(model.x0)}")
    parts += ["E0=0", f"E1={_fmt(model.epsilon)}"]
    return " ".join(parts)


def _emit_table(model, grid: Grid, path: str):
    x = grid.points()
    columns = [
        x,
        np.asarray(model.potentials.v_minus(x), dtype=float),
        np.asarray(model.potentials.v_plus(x), dtype=float),
        np.asarray(model.W.w(x), dtype=float),
        np.asarray(model.W1.w(x), dtype=float),
        np.asarray(model.psi0.psi(x), dtype=float),
        np.asarray(model.psi1.psi(x), dtype=float),
    ]
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["x", "v_minus", "v_plus", "w", "w1", "psi0", "psi1"])
        for row in zip(*columns):
            writer.writerow([_fmt(v) for v in row])


def cmd_build(args) -> int:
    cfg = _resolve_config(args)
    sweep = getattr(args, "sweep", None)
    if sweep:
        key, values = _sweep_values(sweep)
        for value in values:
            sub = dataclasses.replace(cfg, params=dict(cfg.params, **{key: value}),
                                      output=dict(cfg.output))
            model = make_model(sub)
            print(_summary_line(sub, model))
            if sub.output.get("path"):
                stem = sub.output["path"]
                _emit_table(model, _resolve_grid(sub, model), f"{stem}.{key}={_fmt(value)}.csv")
        return 0
    model = make_model(cfg)
    print(_summary_line(cfg, model))
    if cfg.output.get("path"):
        _emit_table(model, _resolve_grid(cfg, model), cfg.output["path"])
    return 0


def cmd_verify(args) -> int:
    cfg = _resolve_config(args)
    sweep = getattr(args, "sweep", None)
    if sweep:
        key, values = _sweep_values(sweep)
        payloads = []
        all_passed = True
        for value in values:
            sub = dataclasses.replace(cfg, params=dict(cfg.params, **{key: value}))
            model = make_model(sub)
            report = verify_model(model, _resolve_grid(sub, model), _resolve_tolerances(sub))
            all_passed &= report.passed
            payloads.append({"config": sub.to_dict(), **report.to_dict()})
        _write_json(payloads, cfg.output.get("path"))
        return 0 if all_passed else 1
    model = make_model(cfg)
    report = verify_model(model, _resolve_grid(cfg, model), _resolve_tolerances(cfg))
    _write_json({"config": cfg.to_dict(), **report.to_dict()}, cfg.output.get("path"))
    return 0 if report.passed else 1


def _write_json(payload, path: Optional[str]):
    text = json.dumps(payload, indent=2)
    if path:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    else:
        print(text)


def cmd_spectrum(args) -> int:
    cfg = _resolve_config(args)
    if getattr(args, "sweep", None):
        raise ConfigError("--sweep is supported for build and verify only")
    n_max = args.n_max
    if n_max < 0:
        raise ConfigError("n-max must be >= 0")
    if n_max > MAX_SPECTRUM_DEPTH:
        raise ConfigError(
            f"n-max {n_max} exceeds the supported excited-state depth ({MAX_SPECTRUM_DEPTH})")
    model = make_model(cfg)
    grid = _resolve_grid(cfg, model)
    energies, _ = eigensolve(model.potentials.v_minus, grid, n_max + 1)

    if cfg.family == "poly-phi-ces":
        spec = FAMILIES[cfg.family]
        merged = dict(spec.defaults)
        merged.update(cfg.params)
        analytic = ces_exact_spectrum(merged["a"], merged["b"], n_max)
    else:
        analytic = [0.0, model.epsilon][: n_max + 1]

    print("n,E_analytic,E_numeric,abs_delta")
    for n, e_num in enumerate(energies):
        if n < len(analytic):
            e_ana = analytic[n]
            print(f"{n},{_fmt(e_ana)},{_fmt(e_num)},{_fmt(abs(e_num - e_ana))}")
        else:
            print(f"{n},-,{_fmt(e_num)},-")
    return 0


def cmd_crosscheck(args) -> int:
    cfg = _resolve_config(args)
    if getattr(args, "sweep", None):
        raise ConfigError("--sweep is supported for build and verify only")
    if cfg.family == "poly-phi":
        spec = FAMILIES[cfg.family]
        merged = dict(spec.defaults)
        merged.update(cfg.params)
        params = PolyPhiParams(merged["a"], merged["b"], merged["epsilon"])
        gen, eps = poly_phi_generator(params), params.epsilon
    elif cfg.family == "poly-phi-ces":
        spec = FAMILIES[cfg.family]
        merged = dict(spec.defaults)
        merged.update(cfg.params)
        eps = ces_epsilon(merged["a"], merged["b"])
        gen = poly_phi_generator(PolyPhiParams(merged["a"], merged["b"], eps))
    elif cfg.family == "custom" and cfg.expr and cfg.params.get("epsilon") is not None:
        gen, eps = parse_generator(cfg.expr, scale_hint=cfg.scale_hint), float(cfg.params["epsilon"])
    else:
        raise ConfigError(
            "crosscheck requires a phi-based family "
            "(poly-phi, poly-phi-ces, or custom --expr with --epsilon)")
    result = cross_check_constructions(gen, eps)
    ok = result.max_discrepancy < CROSSCHECK_BUDGET
    print(f"v_minus_sup={_fmt(result.v_minus_sup)} psi0_sup={_fmt(result.psi0_sup)} "
          f"psi1_sup={_fmt(result.psi1_sup)} budget={_fmt(CROSSCHECK_BUDGET)} "
          f"{'PASS' if ok else 'FAIL'}")
    return 0 if ok else 1


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    model = common.add_argument_group("model")
    model.add_argument("--family", choices=sorted(FAMILIES) + ["custom"],
                       help="built-in family or 'custom' with --expr")
    model.add_argument("--a", type=float, help="family parameter a")
    model.add_argument("--b", type=float, help="family parameter b")
    model.add_argument("--epsilon", type=float,
                       help="level gap (phi route); with custom --expr selects the phi route")
    model.add_argument("--A", type=float, help="sinh family amplitude")
    model.add_argument("--alpha", type=float, help="sinh family steepness")
    model.add_argument("--x0", type=float, help="sinh family node location")
    model.add_argument("--expr", help="inline expression for W+ (or phi when --epsilon is given)")
    model.add_argument("--scale-hint", dest="scale_hint", type=float,
                       help="characteristic length for custom expressions (default 1)")
    run = common.add_argument_group("grid and tolerances")
    run.add_argument("--grid-n", dest="grid_n", type=int, help="number of grid points (odd)")
    run.add_argument("--grid-l", dest="grid_l", type=float, help="half-width of the box")
    run.add_argument("--tol-e", dest="tol_e", type=float, help="absolute energy tolerance")
    run.add_argument("--config", help="JSON config file; flags override it")
    run.add_argument("--sweep", help="KEY=START:STOP:STEPS parameter sweep (build, verify)")

    parser = argparse.ArgumentParser(
        prog="qes",
        description="Construct and verify quasi-exactly solvable potentials "
                    "with two analytically known eigenstates.")
    sub = parser.add_subparsers(dest="command", metavar="command")

    p_build = sub.add_parser("build", parents=[common],
                             help="construct a model and optionally emit its table")
    p_build.add_argument("--emit", help="write the CSV table here")
    p_build.set_defaults(func=cmd_build)

    p_verify = sub.add_parser("verify", parents=[common],
                              help="run the verification battery, print JSON")
    p_verify.add_argument("--out", help="write the JSON report here instead of stdout")
    p_verify.set_defaults(func=cmd_verify)

    p_spec = sub.add_parser("spectrum", parents=[common],
                            help="tabulate numeric vs analytic levels")
    p_spec.add_argument("--n-max", dest="n_max", type=int, default=4,
                        help="highest level index (max 8)")
    p_spec.set_defaults(func=cmd_spectrum)

    p_cross = sub.add_parser("crosscheck", parents=[common],
                             help="compare the two construction routes")
    p_cross.set_defaults(func=cmd_crosscheck)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else 0
    if getattr(args, "func", None) is None:
        parser.print_help()
        return 2
    try:
        return args.func(args)
    except (ConfigError, ParameterError, ExpressionError, GeneratorAdmissibilityError,
            InadmissibleModelError, PhiNotMonotoneError, BrokenSusyError,
            NonFiniteIntegrandError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def entry():
    sys.exit(main())


if __name__ == "__main__":
    entry()
