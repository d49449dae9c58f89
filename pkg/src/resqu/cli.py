"""Command-line interface.

Exit codes: 0 success, 1 flag or parameter error, 2 model-file validation
error, 3 degenerate entropy, 4 degenerate Monte Carlo sample. Nothing is
written to stdout unless the command succeeds.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import __version__
from .aided_decision import REFERENCE_P_T, REFERENCE_V_RATIO, ScenarioParams, build_tables, responsibility
from .errors import ModelValidationError, ResquError, ValidationError
from .flowmodel import check, general_responsibility, load_model
from .simulate import SimConfig, simulate_aws
from .sweep import PRESETS, Axis, GridSpec, grid_sweep, preset_spec


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # argparse exits with 2 on bad flags; 2 is reserved for model files here
    def error(self, message):
        raise UsageError(f"{self.prog}: error: {message}")


def _dump(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=False) + "\n"


def _add_scenario_flags(p: argparse.ArgumentParser, require_d: bool = True) -> None:
    g = p.add_argument_group("scenario")
    g.add_argument("--pt", type=float, default=REFERENCE_P_T, help="target prevalence in (0, 1) [0.2]")
    g.add_argument("--dh", type=float, required=require_d, help="human sensitivity d' in (0, 50]")
    g.add_argument("--da", type=float, required=require_d, help="automation sensitivity d' in (0, 50]")
    g.add_argument("--vratio-h", type=float, default=REFERENCE_V_RATIO, help="human payoff ratio [2/3]")
    g.add_argument("--vratio-a", type=float, default=REFERENCE_V_RATIO, help="automation payoff ratio [2/3]")
    g.add_argument("--beta-h", type=float, help="human unaided criterion (overrides --vratio-h)")
    g.add_argument("--beta-a", type=float, help="automation criterion (overrides the optimal one)")
    g.add_argument(
        "--loop-mode", choices=("in", "on"), default="in",
        help="human in or on the loop; recorded only, results are identical",
    )


def _scenario(args) -> ScenarioParams:
    return ScenarioParams(
        p_t=args.pt,
        d_human=args.dh,
        d_automation=args.da,
        v_ratio_automation=args.vratio_a,
        v_ratio_human=args.vratio_h,
        beta_automation_override=args.beta_a,
        beta_human_base_override=args.beta_h,
        loop_mode=args.loop_mode,
    )


def _self_check(params: ScenarioParams, report) -> dict:
    tables = build_tables(params)
    cells = tables.joint_xy.cells
    row_err = float(abs(cells.sum(axis=1) - tables.dist_y.probs).max())
    col_err = float(abs(cells.sum(axis=0) - tables.dist_x.probs).max())
    chain_err = abs(report.h_x_given_y - (report.h_xy - report.h_y))
    ok = row_err <= 1e-12 and col_err <= 1e-12 and chain_err <= 1e-9
    return {
        "passed": ok,
        "row_marginal_max_error": row_err,
        "col_marginal_max_error": col_err,
        "chain_rule_error": chain_err,
    }


def run_compute(args) -> str:
    params = _scenario(args)
    report = responsibility(params)
    out = report.to_dict()
    if args.self_check:
        out["self_check"] = _self_check(params, report)
        if not out["self_check"]["passed"]:
            raise ResquError(f"self-check failed: {out['self_check']}")
    return _dump(out)


def _parse_axis(text: str) -> Axis:
    """``name=start:stop:step`` or ``name=v1,v2,...``."""
    name, sep, spec = text.partition("=")
    if not sep or not spec.strip():
        raise ValidationError(f"axis {text!r} is empty; use name=start:stop:step or name=v1,v2")
    try:
        if ":" in spec:
            start, stop, step = (float(x) for x in spec.split(":"))
            return Axis.from_range(name, start, stop, step)
        return Axis(name, [float(x) for x in spec.split(",") if x.strip()])
    except ValueError as exc:
        if isinstance(exc, ValidationError):
            raise
        raise ValidationError(f"cannot parse axis {text!r}: {exc}") from exc


def run_sweep(args) -> str:
    if args.preset and args.axis:
        raise ValidationError("use either --preset or --axis, not both")
    if args.preset:
        spec = preset_spec(args.preset)
    elif args.axis:
        fixed = {"p_t": args.pt, "v_ratio_automation": args.vratio_a, "v_ratio_human": args.vratio_h}
        for flag, key in (("dh", "d_human"), ("da", "d_automation"), ("beta_a", "beta_automation_override"),
                          ("beta_h", "beta_human_base_override")):
            if getattr(args, flag) is not None:
                fixed[key] = getattr(args, flag)
        spec = GridSpec([_parse_axis(a) for a in args.axis], fixed)
    else:
        raise ValidationError("sweep needs --preset or at least one --axis")
    result = grid_sweep(spec)
    if result.errors:
        print(result.error_summary(), file=sys.stderr)
    if not result.rows:
        raise ValidationError("no grid point could be evaluated")
    text = result.to_csv()
    if args.out:
        Path(args.out).write_bytes(text.encode("utf-8"))
        return ""
    return text


def run_simulate(args) -> str:
    params = _scenario(args)
    result = simulate_aws(params, SimConfig(args.trials, args.seed))
    out = result.to_dict()
    out["params"] = params.to_dict()
    return _dump(out)


def run_model(args) -> str:
    model = check(load_model(args.file))
    if args.validate_only:
        return _dump({"valid": True, "variables": model.names, "output": model.output})
    return _dump(general_responsibility(model).to_dict())


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="resqu", description="Quantify comparative human responsibility.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("compute", help="responsibility for one aided-decision scenario")
    _add_scenario_flags(p)
    p.add_argument("--self-check", action="store_true", help="verify table marginals and the chain rule")
    p.set_defaults(func=run_compute)

    p = sub.add_parser("sweep", help="CSV sweep over one or two parameters")
    p.add_argument("--preset", choices=PRESETS)
    p.add_argument("--axis", action="append", default=[], metavar="NAME=START:STOP:STEP")
    p.add_argument("--out", help="write CSV here instead of stdout")
    _add_scenario_flags(p, require_d=False)
    p.set_defaults(func=run_sweep)

    p = sub.add_parser("simulate", help="Monte Carlo cross-check of the closed form")
    _add_scenario_flags(p)
    p.add_argument("--trials", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.set_defaults(func=run_simulate)

    p = sub.add_parser("model", help="responsibility of a JSON flow model")
    p.add_argument("--file", required=True, help="path to the model JSON")
    p.add_argument("--validate-only", action="store_true")
    p.set_defaults(func=run_model)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        text = args.func(args)
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return 1
    except ModelValidationError as exc:
        print("model validation failed:", file=sys.stderr)
        for d in exc.diagnostics:
            print(f"  {d}", file=sys.stderr)
        return exc.exit_code
    except ResquError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.exit_code
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    sys.stdout.write(text)
    return 0


if __name__ == "__main__":
    sys.exit(main())
