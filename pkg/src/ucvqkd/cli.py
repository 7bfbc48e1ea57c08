"""Command-line interface.

Subcommands: asymptotic, region, composable, optimize, simulate-pe,
reproduce. A JSON config file (flat keys mirroring the long flag names,
dashes replaced by underscores) can supply defaults; explicit flags win.
Exit codes: 0 success, 1 computation-domain error, 2 usage error.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import sys
from pathlib import Path

from . import __version__
from .asymptotic import key_rate_ucvqkd, key_rate_ucvqkd_symmetric
from .composable import (
    ComposableParams,
    EpsilonBudget,
    composable_rate,
    epsilon_budget,
    simulate_pe_statistics,
)
from .gaussian import ChannelParams, DomainError
from .optimize import distance_to_eta, optimal_modulation_variance
from .output import write_csv, write_json
from .presets import FIGURE_IDS, REGION_PRESETS, build_figure, build_region
from .region import RegionContext, find_extremal_rates, scan_region


def _positive(kind):
    def parse(text):
        value = kind(text)
        if value <= 0:
            raise argparse.ArgumentTypeError(f"must be > 0, got {text}")
        return value

    return parse


def _nonnegative(text):
    value = float(text)
    if value < 0:
        raise argparse.ArgumentTypeError(f"must be >= 0, got {text}")
    return value


def _unit_interval(text):
    value = float(text)
    if not 0 < value <= 1:
        raise argparse.ArgumentTypeError(f"must be in (0, 1], got {text}")
    return value


def _grid(text):
    try:
        nx, ny = text.lower().split("x")
        return int(nx), int(ny)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected <nx>x<ny>, got {text}") from exc


def _add_channel_flags(p, need_vm=True):
    if need_vm:
        p.add_argument("--vm", type=_nonnegative, help="modulation variance")
    p.add_argument("--beta", type=_unit_interval, default=0.95)
    p.add_argument("--eps", type=_nonnegative, help="symmetric excess noise")
    p.add_argument("--eps-x", type=_nonnegative, help="x-quadrature excess noise")
    p.add_argument("--eps-p", type=_nonnegative, help="p-quadrature excess noise")
    p.add_argument("--eta-x", type=_unit_interval, help="x-quadrature transmittance")
    p.add_argument("--eta-p", type=_unit_interval, help="p-quadrature transmittance")
    p.add_argument("--loss-db", type=_nonnegative, help="channel loss in dB")
    p.add_argument("--distance-km", type=_nonnegative, help="fiber length, 0.2 dB/km")


def _add_output_flags(p):
    p.add_argument("--out", type=Path, help="output file (directory for reproduce)")
    p.add_argument("--format", choices=("csv", "json"), default="json")


def build_parser():
    parser = argparse.ArgumentParser(
        prog="ucvqkd",
        description="Security analysis of single-quadrature CVQKD.",
    )
    parser.add_argument("--version", action="version", version=__version__)
    parser.add_argument("--config", type=Path, help="JSON config with flag defaults")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("asymptotic", help="asymptotic key rate at one point")
    _add_channel_flags(p)
    _add_output_flags(p)

    p = sub.add_parser("region", help="scan the unmodulated-quadrature plane")
    _add_channel_flags(p)
    p.add_argument("--preset", choices=sorted(REGION_PRESETS))
    p.add_argument("--grid", type=_grid, default=(200, 200))
    _add_output_flags(p)
    p.set_defaults(format="csv")

    p = sub.add_parser("composable", help="finite-size composable key rate")
    _add_channel_flags(p)
    p.add_argument("--lambda", dest="lam", type=_unit_interval, required=True,
                   help="probability of measuring the modulated quadrature")
    p.add_argument("--d", type=_positive(int), default=5, help="discretization bits")
    p.add_argument("--two-n", type=_positive(float), required=True,
                   help="total exchanged pulses (2n)")
    p.add_argument("--eps-budget", type=Path, help="JSON epsilon budget file")
    p.add_argument("--mu3-mode", choices=("covariance", "conditional", "literal"),
                   default="covariance")
    p.add_argument("--per-exchanged", action="store_true",
                   help="report the rate per exchanged pulse (2n basis)")
    _add_output_flags(p)

    p = sub.add_parser("optimize", help="optimal modulation variance at one point")
    _add_channel_flags(p, need_vm=False)
    _add_output_flags(p)

    p = sub.add_parser("simulate-pe", help="Monte-Carlo parameter-estimation check")
    _add_channel_flags(p)
    p.add_argument("--lambda", dest="lam", type=_unit_interval, required=True)
    p.add_argument("--d", type=_positive(int), default=5)
    p.add_argument("--two-n", type=_positive(float), required=True)
    p.add_argument("--eps-budget", type=Path)
    p.add_argument("--trials", type=_positive(int), default=1000)
    p.add_argument("--seed", type=int, default=0)
    _add_output_flags(p)

    p = sub.add_parser("reproduce", help="emit a figure's underlying data")
    p.add_argument("figure", choices=FIGURE_IDS)
    p.add_argument("--grid", type=_grid)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", type=Path, default=Path("."))
    p.add_argument("--check-golden", type=Path, metavar="DIR",
                   help="compare the CSV against DIR/<figure>.csv")

    # accepted on subcommands too; consumed by the pre-scan in _apply_config
    for subparser in sub.choices.values():
        subparser.add_argument("--config", type=Path, help=argparse.SUPPRESS)
    return parser


def _resolve_channel(args):
    """Combine the channel flags into ChannelParams; symmetric by default."""
    if args.loss_db is not None and args.distance_km is not None:
        raise DomainError("give either --loss-db or --distance-km, not both")
    eta = None
    if args.loss_db is not None:
        eta = 10.0 ** (-args.loss_db / 10.0)
    elif args.distance_km is not None:
        eta = distance_to_eta(args.distance_km)
    eta_x = args.eta_x if args.eta_x is not None else eta
    eta_p = args.eta_p if args.eta_p is not None else eta_x
    if eta_x is None:
        raise DomainError("channel transmittance missing: --eta-x/--loss-db/--distance-km")
    eps_x = args.eps_x if args.eps_x is not None else args.eps
    eps_p = args.eps_p if args.eps_p is not None else eps_x
    if eps_x is None:
        eps_x = eps_p = 0.0
    return ChannelParams(eta_x=eta_x, eps_x=eps_x, eta_p=eta_p, eps_p=eps_p)


def _load_budget(path):
    if path is None:
        return EpsilonBudget.default()
    raw = json.loads(Path(path).read_text())
    return EpsilonBudget(**raw)


def _effective_config(args, skip=("command", "out", "format", "config")):
    cfg = {}
    for key, value in sorted(vars(args).items()):
        if key in skip or value is None:
            continue
        cfg[key] = str(value) if isinstance(value, (Path, tuple)) else value
    return cfg


def _emit(args, payload, metadata, csv_columns=None, csv_rows=None):
    if args.out is None:
        print(json.dumps({"metadata": metadata, "data": payload}, indent=2,
                         sort_keys=True, default=str))
        return
    if args.format == "csv":
        if csv_rows is None:
            csv_columns = tuple(payload)
            csv_rows = [tuple(payload.values())]
        write_csv(args.out, csv_columns, csv_rows, metadata)
    else:
        write_json(args.out, payload, metadata)


def _cmd_asymptotic(args):
    if args.vm is None:
        raise DomainError("--vm is required")
    ch = _resolve_channel(args)
    res = key_rate_ucvqkd(args.vm, args.beta, ch)
    payload = {
        "key_rate_bits": res.key_rate_bits,
        "mutual_information_bits": res.mutual_information_bits,
        "holevo_bits": res.holevo_bits,
        "nu1": res.symplectic[0],
        "nu2": res.symplectic[1],
        "nu3": res.symplectic[2],
        "eta_x": ch.eta_x,
        "eta_p": ch.eta_p,
        "eps_x": ch.eps_x,
        "eps_p": ch.eps_p,
    }
    _emit(args, payload, _effective_config(args))
    return 0


def _cmd_region(args):
    if args.preset:
        columns, rows, metadata = build_region(args.preset, *args.grid)
        grid = None
    else:
        if args.vm is None or args.eta_x is None or args.eps_x is None:
            raise DomainError("region needs --preset or --vm/--eta-x/--eps-x")
        ctx = RegionContext(vm=args.vm, beta=args.beta,
                            eta_x=args.eta_x, eps_x=args.eps_x)
        grid = scan_region(ctx, nx=args.grid[0], ny=args.grid[1])
        columns = ("eta_p", "eps_p", "class", "rate")
        rows = [(c.eta_p, c.eps_p, c.cls.value, c.rate) for c in grid.cells]
        metadata = _effective_config(args)
    if args.format == "csv" or args.out is None:
        if args.out is None:
            ext = find_extremal_rates(grid) if grid else None
            print(json.dumps({"metadata": metadata,
                              "cells": len(rows),
                              "extremal": dataclasses.asdict(ext) if ext else None},
                             indent=2, sort_keys=True, default=str))
        else:
            write_csv(args.out, columns, rows, metadata)
    else:
        write_json(args.out, {"columns": columns, "rows": rows}, metadata)
    return 0


def _cmd_composable(args):
    if args.vm is None:
        raise DomainError("--vm is required")
    ch = _resolve_channel(args)
    budget = _load_budget(args.eps_budget)
    params = ComposableParams(two_n=args.two_n, lam=args.lam, d=args.d,
                              beta=args.beta, vm=args.vm, ch=ch)
    res = composable_rate(params, budget, args.mu3_mode)
    report = epsilon_budget(budget)
    payload = {
        "rate_bits": (res.rate_bits_per_exchanged if args.per_exchanged
                      else res.rate_bits),
        "rate_basis": ("per exchanged pulse (2n)" if args.per_exchanged
                       else "per correctly-measured pulse (2*lambda*n)"),
        "key_length_bits": res.key_length_bits,
        "abort": res.abort,
        "s_ec_bits": res.s_ec_bits,
        "f_bits": res.f_bits,
        "delta_aep": res.delta_aep,
        "delta_ent": res.delta_ent,
        "thresholds": dataclasses.asdict(res.thresholds),
        "epsilon_budget": dataclasses.asdict(budget),
        "epsilon_budget_ok": report.passes,
        "mu3_mode": res.mu3_mode,
    }
    _emit(args, payload, _effective_config(args))
    return 0


def _cmd_optimize(args):
    ch = _resolve_channel(args)
    if ch.eta_x != ch.eta_p or ch.eps_x != ch.eps_p:
        raise DomainError("optimize assumes a symmetric channel")
    opt = optimal_modulation_variance(
        lambda vm: key_rate_ucvqkd_symmetric(vm, args.beta, ch.eta_x, ch.eps_x)
    )
    payload = {
        "vm_opt": opt.vm,
        "rate_bits": opt.rate,
        "at_bracket_edge": opt.at_bracket_edge,
        "unimodal": opt.unimodal,
    }
    _emit(args, payload, _effective_config(args))
    return 0


def _cmd_simulate_pe(args):
    if args.vm is None:
        raise DomainError("--vm is required")
    ch = _resolve_channel(args)
    budget = _load_budget(args.eps_budget)
    params = ComposableParams(two_n=args.two_n, lam=args.lam, d=args.d,
                              beta=args.beta, vm=args.vm, ch=ch)
    rep = simulate_pe_statistics(params, budget.eps_pe, args.trials, args.seed)
    payload = dataclasses.asdict(rep)
    _emit(args, payload, _effective_config(args))
    return 0


def _cmd_reproduce(args):
    args.out.mkdir(parents=True, exist_ok=True)
    columns, rows, metadata = build_figure(args.figure, seed=args.seed,
                                           grid=args.grid)
    metadata["seed"] = args.seed
    csv_path = args.out / f"{args.figure}.csv"
    write_csv(csv_path, columns, rows, metadata)
    write_json(args.out / f"{args.figure}.meta.json",
               {"columns": list(columns), "rows": len(rows)}, metadata)
    if args.check_golden is not None:
        golden = args.check_golden / f"{args.figure}.csv"
        if not golden.exists():
            print(f"no golden for {args.figure} in {args.check_golden}",
                  file=sys.stderr)
            return 1
        if golden.read_bytes() != csv_path.read_bytes():
            print(f"golden mismatch: {csv_path} differs from {golden}",
                  file=sys.stderr)
            return 1
        print(f"golden match: {golden}")
    return 0


_COMMANDS = {
    "asymptotic": _cmd_asymptotic,
    "region": _cmd_region,
    "composable": _cmd_composable,
    "optimize": _cmd_optimize,
    "simulate-pe": _cmd_simulate_pe,
    "reproduce": _cmd_reproduce,
}


def _apply_config(parser, argv):
    """Pre-scan for --config and fold its keys in as parser defaults."""
    if "--config" not in argv:
        return argv
    idx = argv.index("--config")
    try:
        path = argv[idx + 1]
    except IndexError:
        parser.error("--config needs a path")
    raw = json.loads(Path(path).read_text())
    for subparser in parser._subparsers._group_actions[0].choices.values():
        known = {a.dest for a in subparser._actions}
        subparser.set_defaults(**{k: v for k, v in raw.items() if k in known})
        for action in subparser._actions:
            if action.required and action.dest in raw:
                action.required = False
    return argv


def run(argv=None):
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    argv = _apply_config(parser, argv)
    args = parser.parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except DomainError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
