"""Command-line front end.

Subcommands:
  run       integrate one Riemann problem and report its wave structure
  sweep     run a one-parameter sweep and write the kinetic-function CSV
  validate  fast self-checks (stencil exactness, scheme orders, identities)
  plot      emit a gnuplot script for a CSV table or a field dump
  regimes   scan the two-field system's upstream velocity across regimes

Configuration is a flat JSON file plus key=value overrides (values parsed
as JSON where possible).  Exit codes: 0 success, 1 configuration error,
2 numerical blow-up, 3 wave structure unresolved / no kinetic pair.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from pathlib import Path

import numpy as np

from .errors import (EXIT_BLOWUP, EXIT_CONFIG, EXIT_OK, EXIT_UNRESOLVED,
                     ConfigurationError, DegenerateShockError, DomainError,
                     NumericalBlowupError, UnresolvedWaveError)
from .psystem import PressureLaw, find_inflection_points, validate_piecewise_continuity
from .reporting import dump_field, emit_gnuplot, read_csv, write_csv
from .riemann import SweepConfig, build_setup, run_single, sweep_kinetic
from .stencils import validate_stencils
from .time_integration import builtin_tableau, verify_order
from .wave_analysis import (entropy_dissipation_cubic,
                            entropy_dissipation_thin_film, shock_speed_rh)
from .scalar_models import CUBIC_FLUX

_REGIME_BASE = {
    "model": "p_system", "law": "piecewise_linear",
    "tau_L": 0.9, "tau_R": 4.0, "u_R": 1.0,
    "eps": 0.001, "alpha": 0.0,
    # The stationary-shock branch of the scan is a discrete equilibrium that
    # only locks from a sharp jump centered between grid nodes; smeared or
    # node-centered data slide into the left-going traveling front instead.
    "n": 2000, "h": 0.0005, "x0": 0.50025, "w": 0.0001, "q": 6,
    "t_end": 0.12,
}
_REGIME_VALUES = (1.5, 1.0, -1.2, -1.6, -2.0)


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # map argparse failures onto exit code 1
        raise ConfigurationError(message)


def _load_config(path: str | None, overrides: list[str]) -> dict:
    conf: dict = {}
    if path:
        loaded = json.loads(Path(path).read_text())
        if not isinstance(loaded, dict):
            raise ConfigurationError(f"config file {path!r} must hold a JSON object")
        conf.update(loaded)
    for token in overrides:
        body = token.lstrip("-")
        if "=" not in body:
            raise ConfigurationError(f"override {token!r} is not key=value")
        key, raw = body.split("=", 1)
        try:
            conf[key] = json.loads(raw)
        except json.JSONDecodeError:
            conf[key] = raw
    return conf


def _cmd_run(args, overrides: list[str]) -> int:
    conf = _load_config(args.config, overrides)
    require = bool(conf.pop("require_kinetic", False)) or args.require_kinetic
    out_path = conf.pop("output", None) or args.output
    dump_path = conf.pop("dump", None) or args.dump
    setup = build_setup(conf)
    sink: list | None = [] if dump_path else None
    report, sample = run_single(
        setup.problem, q=setup.q, tableau=setup.tableau, runcfg=setup.runcfg,
        boundary=setup.boundary, tol_plateau=setup.tol_plateau,
        min_width=setup.min_width, tol_speed=setup.tol_speed,
        require_kinetic=require, field_sink=sink)
    print(f"structure: {report.structure}")
    print(f"plateaus: {[round(p.value, 10) for p in report.plateaus]}")
    if report.kinetic_pair is not None:
        u_minus, u_plus = report.kinetic_pair
        print(f"kinetic pair: u_minus={u_minus:.10g} u_plus={u_plus:.10g}")
        if math.isfinite(report.nc_speed):
            print(f"front speed: {report.nc_speed:.10g}")
        if report.dissipation is not None:
            print(f"entropy dissipation: {report.dissipation:.10g}")
    if report.note:
        print(f"note: {report.note}")
    if out_path:
        write_csv(out_path, [sample])
        print(f"wrote {out_path}")
    if dump_path:
        _, state = sink[-1]
        dump_field(dump_path, setup.problem.grid.nodes(), state)
        print(f"wrote {dump_path}")
    return EXIT_OK


def _cmd_sweep(args, overrides: list[str]) -> int:
    conf = _load_config(args.config, overrides)
    parameter = conf.pop("parameter", None)
    values = conf.pop("values", None)
    if parameter is None or values is None:
        raise ConfigurationError("sweep config needs 'parameter' and 'values'")
    q_list = conf.pop("q_list", None) or [conf.get("q", 6)]
    conf.pop("q", None)
    out_path = conf.pop("output", None) or args.output
    cfg = SweepConfig(parameter=str(parameter), values=tuple(values),
                      base=conf, q_list=tuple(q_list), output_path=out_path)
    samples, comments = sweep_kinetic(cfg)
    ok = [s for s in samples if s.status == "ok"]
    swept = [(v, q) for v in cfg.values for q in cfg.q_list]
    for (value, q), s in zip(swept, samples):
        tag = (f"pair=({s.u_minus:.8g}, {s.u_plus:.8g}) speed={s.speed:.8g}"
               if math.isfinite(s.u_minus) else s.status)
        print(f"{cfg.parameter}={value:g} q={q} {s.structure}: {tag}")
    for line in comments:
        print(line)
    if out_path:
        write_csv(out_path, samples, comments)
        print(f"wrote {out_path} ({len(ok)}/{len(samples)} rows resolved)")
    return EXIT_OK if ok else EXIT_UNRESOLVED


def _cmd_validate(args, overrides: list[str]) -> int:
    del overrides
    failures = 0

    def check(name: str, problems: list[str]) -> None:
        nonlocal failures
        if problems:
            failures += 1
            print(f"FAIL {name}: {problems[0]}" +
                  (f" (+{len(problems) - 1} more)" if len(problems) > 1 else ""))
        else:
            print(f"PASS {name}")

    check("stencil exactness (12 tables)", validate_stencils())

    order_problems = []
    for name, floor in (("rk4", 3.8), ("rk6", 5.8), ("rk8", 7.5)):
        measured = verify_order(builtin_tableau(name))
        if measured < floor:
            order_problems.append(f"{name} measured order {measured:.2f} < {floor}")
    check("time-scheme convergence orders", order_problems)

    rng = np.random.default_rng(20260815)
    pairs = rng.uniform(-3.0, 3.0, size=(10_000, 2))
    pairs = pairs[np.abs(pairs[:, 0] - pairs[:, 1]) > 1e-6]
    diss_problems = []
    for um, up in pairs:
        phi = entropy_dissipation_cubic(um, up)
        s = shock_speed_rh(um, up, CUBIC_FLUX)
        du2 = 0.5 * (up * up - um * um)
        df = 0.75 * (up ** 4 - um ** 4)
        if abs(phi - 4.0 * (-s * du2 + df)) > 1e-12 * max(1.0, abs(phi)):
            diss_problems.append(f"pair ({um}, {up})")
    check("cubic dissipation identity (10^4 pairs)", diss_problems)

    root_problems = []
    for u in np.linspace(0.01, 0.65, 100):
        d = entropy_dissipation_thin_film(u, 2.0 / 3.0 - u)
        if abs(d) > 1e-12:
            root_problems.append(f"D({u:.4f}, 2/3-u) = {d:.3e}")
    check("lubrication zero-dissipation root (100 points)", root_problems)

    law = PressureLaw(kind="piecewise_linear")
    check("piecewise pressure continuity", validate_piecewise_continuity(law))
    infl = find_inflection_points(PressureLaw(kind="vdw_rt"))
    infl_problems = []
    if len(infl) != 2 or abs(infl[0] - 1.00996) > 1e-3 or abs(infl[1] - 1.8515) > 1e-3:
        infl_problems.append(f"got {infl}")
    check("van der Waals inflection points", infl_problems)

    return EXIT_CONFIG if failures else EXIT_OK


def _cmd_plot(args, overrides: list[str]) -> int:
    del overrides
    data_path = args.data_path or args.input
    samples = [] if args.kind == "wave_structure" else read_csv(args.input)
    script = emit_gnuplot(samples, args.kind, data_path=data_path)
    if args.output:
        Path(args.output).write_text(script)
        print(f"wrote {args.output}")
    else:
        sys.stdout.write(script)
    return EXIT_OK


def _cmd_regimes(args, overrides: list[str]) -> int:
    conf = dict(_REGIME_BASE)
    conf.update(_load_config(args.config, overrides))
    values = conf.pop("values", None) or list(_REGIME_VALUES)
    out_path = conf.pop("output", None) or args.output
    q_list = (conf.pop("q"),) if "q" in conf else (6,)
    cfg = SweepConfig(parameter="u_L", values=tuple(values), base=conf,
                      q_list=q_list, output_path=out_path)
    samples, comments = sweep_kinetic(cfg)
    for value, s in zip(cfg.values, samples):
        if math.isfinite(s.u_minus):
            detail = (f"pair=({s.u_minus:.8g}, {s.u_plus:.8g}) "
                      f"speed={s.speed:.8g}")
        else:
            detail = s.status
        print(f"u_L={value:g}: {s.structure} {detail}")
    if out_path:
        write_csv(out_path, samples, comments)
        print(f"wrote {out_path}")
    return EXIT_OK if any(s.status == "ok" for s in samples) else EXIT_UNRESOLVED


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="shock-kinetics", allow_abbrev=False,
                     description="Nonclassical-shock kinetic-function experiments")
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", allow_abbrev=False,
                           help="integrate one Riemann problem")
    p_run.add_argument("--config", help="JSON config file")
    p_run.add_argument("--output", help="write the result row as CSV")
    p_run.add_argument("--dump", help="write the final field for plotting")
    p_run.add_argument("--require-kinetic", action="store_true",
                       help="fail (exit 3) unless a nonclassical pair is found")
    p_run.add_argument("overrides", nargs="*", help="key=value overrides")
    p_run.set_defaults(handler=_cmd_run)

    p_sweep = sub.add_parser("sweep", allow_abbrev=False,
                             help="one-parameter sweep")
    p_sweep.add_argument("--config", help="JSON config file with parameter/values")
    p_sweep.add_argument("--output", help="CSV output path")
    p_sweep.add_argument("overrides", nargs="*", help="key=value overrides")
    p_sweep.set_defaults(handler=_cmd_sweep)

    p_val = sub.add_parser("validate", allow_abbrev=False,
                           help="fast numerical self-checks")
    p_val.set_defaults(handler=_cmd_validate)

    p_plot = sub.add_parser("plot", allow_abbrev=False,
                            help="emit a gnuplot script")
    p_plot.add_argument("--input", required=True,
                        help="CSV table (or field dump for wave_structure)")
    p_plot.add_argument("--kind", required=True,
                        choices=("kinetic", "dissipation_vs_speed", "wave_structure"))
    p_plot.add_argument("--data-path", dest="data_path",
                        help="path written into the script (defaults to --input)")
    p_plot.add_argument("--output", help="script file (default: stdout)")
    p_plot.set_defaults(handler=_cmd_plot)

    p_reg = sub.add_parser("regimes", allow_abbrev=False,
                           help="two-field upstream-velocity regime scan")
    p_reg.add_argument("--config", help="JSON config overriding the scan defaults")
    p_reg.add_argument("--output", help="CSV output path")
    p_reg.add_argument("overrides", nargs="*", help="key=value overrides")
    p_reg.set_defaults(handler=_cmd_regimes)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args, extra = parser.parse_known_args(argv)
        overrides = list(getattr(args, "overrides", [])) + list(extra)
        return args.handler(args, overrides)
    except (ConfigurationError, DomainError, DegenerateShockError,
            FileNotFoundError, json.JSONDecodeError) as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except NumericalBlowupError as exc:
        print(f"numerical blow-up: {exc}", file=sys.stderr)
        return EXIT_BLOWUP
    except UnresolvedWaveError as exc:
        print(f"unresolved wave structure: {exc}", file=sys.stderr)
        return EXIT_UNRESOLVED


if __name__ == "__main__":
    raise SystemExit(main())
