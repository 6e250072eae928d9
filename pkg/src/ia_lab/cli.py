"""Command-line front end binding the modules into reproducible experiments.

Every subcommand echoes its effective configuration as a JSON line on
stderr; together with the seed that echo fully determines the outputs.
Exit codes: 0 success, 1 verification failure, 2 usage error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import asdict, dataclass

import numpy as np

from .channels import extend_channel, generate_channels, load_channels, save_channels
from .designed import DelayMatrix, check_delay_parity, simulate_delay_schedule
from .errors import IaLabError
from .evaluation import (SchemeConfig, cognitive_dof, decompose_dof_point,
                         estimate_dof, estimate_o1_gap, in_dof_region, snr_sweep)
from .mimo import build_mimo_even, build_mimo_odd, mimo_extension
from .receiver import check_alignment
from .schemes import save_scheme
from .siso import build_precoders_general, build_precoders_k3, guarded_extension_general
from .verification import demonstrate_diagonal_infeasibility


@dataclass(frozen=True)
class RunConfig:
    """Echoed configuration of one CLI invocation."""

    command: str
    options: dict

    def echo(self) -> None:
        print(json.dumps({"config": asdict(self)}, sort_keys=True), file=sys.stderr)


def _float_list(text: str):
    try:
        values = [float(tok) for tok in text.split(",") if tok.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}")
    if not values:
        raise argparse.ArgumentTypeError("expected at least one number")
    return values


def _threads() -> int:
    raw = os.environ.get("IA_LAB_THREADS", "1")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def _add_scheme_options(parser, families=("siso-k3", "siso-general", "mimo", "designed")):
    parser.add_argument("--scheme", required=True, choices=families)
    parser.add_argument("--k", type=int, default=3, help="user count")
    parser.add_argument("--m", type=int, default=None,
                        help="antennas per node (mimo defaults to 2)")
    parser.add_argument("--n", type=int, default=1, help="alignment order")
    parser.add_argument("--a-min", type=float, default=0.5)
    parser.add_argument("--a-max", type=float, default=2.0)
    parser.add_argument("--seed", type=int, default=0)


def _scheme_config(args) -> SchemeConfig:
    k = args.k
    if args.scheme == "siso-k3":
        k, m = 3, 1
    elif args.scheme == "siso-general":
        m = 1
    elif args.scheme == "mimo":
        k, m = 3, args.m if args.m is not None else 2
    else:
        m = 1
    return SchemeConfig(family=args.scheme, K=k, M=m, n=args.n,
                        a_min=args.a_min, a_max=args.a_max)


def _build_from_args(args):
    """Build (scheme, ext) either from a channel file or from the seed."""
    channels_path = getattr(args, "channels", None)
    if channels_path is None or args.scheme == "designed":
        return _scheme_config(args).build(args.seed)
    ch = load_channels(channels_path)
    if args.scheme == "siso-k3":
        ext = extend_channel(ch, 2 * args.n + 1)
        return build_precoders_k3(ext, args.n), ext
    if args.scheme == "siso-general":
        ext = extend_channel(ch, guarded_extension_general(ch.K, args.n))
        return build_precoders_general(ext, args.n), ext
    scheme = build_mimo_even(ch) if ch.M % 2 == 0 else build_mimo_odd(ch)
    return scheme, mimo_extension(ch, scheme)


def cmd_gen(args) -> int:
    ch = generate_channels(args.k, args.m, args.f, args.a_min, args.a_max, args.seed)
    save_channels(ch, args.out)
    print(json.dumps({"written": str(args.out), "K": ch.K, "M": ch.M, "F": ch.F,
                      "seed": ch.seed}))
    return 0


def cmd_precode(args) -> int:
    scheme, _ = _build_from_args(args)
    if args.out:
        save_scheme(scheme, args.out)
    print(json.dumps({"family": scheme.family, "K": scheme.K, "L": scheme.L,
                      "stream_counts": list(scheme.stream_counts),
                      "claimed_dof": float(scheme.claimed_dof),
                      "written": str(args.out) if args.out else None}))
    return 0


def cmd_verify(args) -> int:
    scheme, ext = _build_from_args(args)
    report = check_alignment(scheme, ext)
    print(report.to_json())
    return 0 if report.passed else 1


def cmd_sweep(args) -> int:
    config = _scheme_config(args)
    table = snr_sweep(config, args.snr, args.trials, args.seed, threads=_threads())
    table.write_csv(args.out)
    print(json.dumps({"written": str(args.out), "rows": len(table.records),
                      "failures": len(table.failures())}))
    return 0


def cmd_dof(args) -> int:
    config = _scheme_config(args)
    table = snr_sweep(config, args.snr, args.trials, args.seed, threads=_threads())
    estimate = estimate_dof(table)
    summary = {
        "scheme": config.family,
        "claimed_dof": float(config.claimed_dof),
        "slope": estimate.slope,
        "half_width": estimate.half_width,
        "trials_used": estimate.trials_used,
        "snr_db": list(estimate.snr_db),
    }
    if table.snr_db[-1] - table.snr_db[0] >= 40.0 - 1e-9:
        summary["gap_oscillation"] = estimate_o1_gap(
            table, float(config.claimed_dof)).oscillation
    if args.out:
        with open(args.out, "w") as fh:
            json.dump(summary, fh, indent=1)
            fh.write("\n")
    print(json.dumps(summary))
    return 0


def cmd_region(args) -> int:
    point = args.point
    if len(point) != 3:
        print("a degrees-of-freedom point needs exactly 3 components", file=sys.stderr)
        return 2
    if not in_dof_region(point):
        print(json.dumps({"point": point, "in_region": False,
                          "reason": "a pairwise sum exceeds 1 or a component is negative"}))
        return 1
    weights = decompose_dof_point(point)
    print(json.dumps({"point": point, "in_region": True,
                      "weights": [float(w) for w in weights]}))
    return 0


def cmd_cognitive(args) -> int:
    print(cognitive_dof(args.case))
    return 0


def cmd_delay(args) -> int:
    matrix = DelayMatrix.from_csv(args.delays)
    if not check_delay_parity(matrix):
        print(json.dumps({"parity_valid": False}))
        return 1
    slots = args.slots
    if slots is None:
        slots = max(100, 2 * int(np.max(matrix.delays)))
        slots += slots % 2
    fractions = simulate_delay_schedule(matrix, slots)
    print(json.dumps({"parity_valid": True, "slots": slots,
                      "interference_free_fraction": [float(x) for x in fractions]}))
    return 0


def cmd_infeasible(args) -> int:
    deficient = 0
    control_full = 0
    for i in range(args.seeds):
        seed = args.seed + i
        diag_report = demonstrate_diagonal_infeasibility(args.m, seed)
        dense_report = demonstrate_diagonal_infeasibility(args.m, seed, dense=True)
        deficient += int(diag_report.receivers[0].joint_rank < args.m)
        control_full += int(dense_report.receivers[0].joint_rank == args.m)
    print(json.dumps({"M": args.m, "seeds": args.seeds,
                      "diagonal_rank_deficient": deficient,
                      "dense_control_full_rank": control_full}))
    ok = deficient == args.seeds and control_full == args.seeds
    return 0 if ok else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ia-lab",
        description="Interference-alignment precoding experiments at desk scale")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", help="generate and write a channel file")
    p.add_argument("--k", type=int, default=3)
    p.add_argument("--m", type=int, default=1)
    p.add_argument("--f", type=int, default=3, help="frequency slots")
    p.add_argument("--a-min", type=float, default=0.5)
    p.add_argument("--a-max", type=float, default=2.0)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("precode", help="build a scheme and export it as JSON")
    _add_scheme_options(p)
    p.add_argument("--channels", default=None, help="channel file to build against")
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_precode)

    p = sub.add_parser("verify", help="alignment report for one realization")
    _add_scheme_options(p)
    p.add_argument("--channels", default=None, help="channel file to verify against")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("sweep", help="Monte-Carlo SNR sweep to a rates CSV")
    _add_scheme_options(p)
    p.add_argument("--snr", type=_float_list, required=True,
                   help="comma-separated grid in dB")
    p.add_argument("--trials", type=int, default=20)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("dof", help="sweep and estimate the sum-rate slope")
    _add_scheme_options(p)
    p.add_argument("--snr", type=_float_list, default=[60.0, 70.0, 80.0])
    p.add_argument("--trials", type=int, default=20)
    p.add_argument("--out", default=None, help="also write the summary JSON here")
    p.set_defaults(func=cmd_dof)

    p = sub.add_parser("region", help="decompose a DoF point over the corners")
    p.add_argument("--point", type=_float_list, required=True)
    p.set_defaults(func=cmd_region)

    p = sub.add_parser("cognitive", help="DoF under a cognitive-sharing case")
    p.add_argument("--case", type=int, required=True, choices=[1, 2, 3, 4])
    p.set_defaults(func=cmd_cognitive)

    p = sub.add_parser("delay", help="delay parity check and schedule simulation")
    p.add_argument("--delays", required=True, help="CSV with K rows of K integers")
    p.add_argument("--slots", type=int, default=None)
    p.set_defaults(func=cmd_delay)

    p = sub.add_parser("infeasible", help="diagonal-channel rank-collapse demo")
    p.add_argument("--m", type=int, default=2)
    p.add_argument("--seeds", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_infeasible)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    options = {key: value for key, value in vars(args).items()
               if key not in ("func", "command") and value is not None}
    RunConfig(command=args.command, options=options).echo()
    try:
        return args.func(args)
    except IaLabError as err:
        print(f"error: {err}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    raise SystemExit(main())
