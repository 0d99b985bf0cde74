"""Command-line front end: `stegid detect` and `stegid simulate`.

All randomness flows from --seed; reports contain no timestamps or other
run-dependent values, so a repeated invocation writes byte-identical files.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .bagging import detect_bagged
from .corpus import normalize
from .detector import detect_single
from .distance import Kernel
from .feature_io import (
    bagged_to_json,
    curves_csv_text,
    dump_json,
    ranking_to_json,
    read_features,
)
from .harness import SyntheticConfig, run_trials
from .lof import LofParams


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="stegid",
        description=(
            "Rank actors by suspicion of steganography from per-image "
            "feature vectors, via MMD distances, LOF anomaly scores, and "
            "optional feature-bagging ensembles."
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    detect = sub.add_parser(
        "detect", help="rank the actors found in a feature CSV"
    )
    detect.add_argument("--features", required=True, help="feature CSV path")
    _add_run_flags(detect)
    detect.add_argument(
        "--out", default=None, help="directory to write report.json into"
    )

    simulate = sub.add_parser(
        "simulate", help="run the seeded synthetic guilty-actor experiment"
    )
    simulate.add_argument("--n", type=int, default=50, help="actors")
    simulate.add_argument("--m", type=int, default=100, help="vectors per actor")
    simulate.add_argument("--H", type=int, default=274, help="feature dimension")
    simulate.add_argument(
        "--delta", type=float, default=0.0, help="guilty mean shift"
    )
    simulate.add_argument(
        "--delta-sweep",
        default=None,
        help="comma-separated list of shifts (overrides --delta)",
    )
    simulate.add_argument(
        "--rho", type=float, default=1.0,
        help="fraction of components carrying the shift",
    )
    simulate.add_argument("--trials", type=int, default=100)
    _add_run_flags(simulate)
    simulate.add_argument(
        "--out", default=".", help="directory for report.json and curves.csv"
    )
    return parser


def _add_run_flags(cmd: argparse.ArgumentParser) -> None:
    cmd.add_argument(
        "--mode", choices=["single", "bagged", "compare"], default="compare"
    )
    cmd.add_argument("--p", type=int, default=1, help="points per actor")
    cmd.add_argument("--k", type=int, default=10, help="LOF neighborhood size")
    cmd.add_argument("--T", type=int, default=16, help="number of sub-models")
    cmd.add_argument("--kernel", choices=["linear", "gaussian"], default="linear")
    cmd.add_argument(
        "--gamma", type=float, default=None,
        help="gaussian kernel bandwidth (default: 1/dimension)",
    )
    cmd.add_argument("--seed", type=int, default=0)


def _kernel_from_args(args) -> Kernel:
    if args.kernel == "linear" and args.gamma is not None:
        raise ValueError("--gamma requires --kernel gaussian")
    return Kernel(args.kernel, args.gamma)


def _common_config(args) -> dict:
    return {
        "mode": args.mode,
        "p": args.p,
        "k": args.k,
        "T": args.T,
        "kernel": args.kernel,
        "gamma": args.gamma,
        "seed": args.seed,
    }


def cmd_detect(args) -> int:
    if args.seed < 0:
        raise ValueError("--seed must be non-negative")
    kernel = _kernel_from_args(args)
    lof = LofParams(args.k)
    corpus, actor_ids = read_features(args.features)
    corpus = normalize(corpus)

    single = bagged = None
    if args.mode in ("single", "compare"):
        single = detect_single(corpus, args.p, kernel, lof)
    if args.mode in ("bagged", "compare"):
        bagged = detect_bagged(corpus, args.p, kernel, lof, args.T, args.seed)

    if single is not None:
        _print_ranking("single-model ranking", single, actor_ids)
    if bagged is not None:
        _print_ranking(
            f"feature-bagging ranking (T={args.T})", bagged.final, actor_ids
        )

    report = {
        "config": {"features": str(args.features), **_common_config(args)},
        "single": None if single is None else {
            "ranking": ranking_to_json(single, actor_ids)
        },
        "bagged": None if bagged is None else bagged_to_json(bagged, actor_ids),
    }
    if args.out is not None:
        out_dir = Path(args.out)
        out_dir.mkdir(parents=True, exist_ok=True)
        (out_dir / "report.json").write_text(dump_json(report), encoding="utf-8")
        print(f"wrote {out_dir / 'report.json'}")
    return 0


def _print_ranking(title: str, ranking, actor_ids) -> None:
    print(title)
    for pos, (actor, score) in enumerate(ranking.entries, start=1):
        print(f"{pos:4d}  {actor_ids[actor]}  {float(score):.6g}")


def cmd_simulate(args) -> int:
    if args.seed < 0:
        raise ValueError("--seed must be non-negative")
    kernel = _kernel_from_args(args)
    lof = LofParams(args.k)
    if args.delta_sweep is not None:
        try:
            deltas = [float(part) for part in args.delta_sweep.split(",") if part]
        except ValueError:
            raise ValueError(
                f"--delta-sweep must be comma-separated numbers, "
                f"got {args.delta_sweep!r}"
            ) from None
        if not deltas:
            raise ValueError("--delta-sweep is empty")
    else:
        deltas = [args.delta]
    run_single = args.mode in ("single", "compare")
    run_bagged = args.mode in ("bagged", "compare")

    trial_rows = []
    summary_rows = []
    for delta in deltas:
        config = SyntheticConfig(
            n=args.n, m=args.m, H=args.H, delta=delta, rho=args.rho,
            trials=args.trials, master_seed=args.seed,
        )
        report = run_trials(
            config, p=args.p, kernel=kernel, lof=lof, T=args.T,
            run_single=run_single, run_bagged=run_bagged,
        )
        for r in report.results:
            trial_rows.append({
                "delta": delta,
                "trial": r.trial,
                "guilty": r.guilty,
                "single_rank": r.single_rank,
                "bagged_rank": r.bagged_rank,
            })
        if run_single:
            summary_rows.append({
                "delta": delta, "method": "single",
                "average_rank": report.average_single,
                "stderr": report.stderr_single,
            })
        if run_bagged:
            summary_rows.append({
                "delta": delta, "method": "bagged",
                "average_rank": report.average_bagged,
                "stderr": report.stderr_bagged,
            })
        print(
            f"delta={delta:g}: "
            + ", ".join(
                f"{row['method']} avg rank {row['average_rank']:.3f} "
                f"(stderr {row['stderr']:.3f})"
                for row in summary_rows
                if row["delta"] == delta
            )
            + f"  [{report.wall_clock_seconds:.1f}s]",
            file=sys.stderr,
        )

    report_obj = {
        "config": {
            "n": args.n, "m": args.m, "H": args.H,
            "delta": deltas, "rho": args.rho,
            "noise_model": "iid-gaussian", "trials": args.trials,
            **_common_config(args),
        },
        "trials": trial_rows,
        "summary": summary_rows,
    }
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    (out_dir / "report.json").write_text(dump_json(report_obj), encoding="utf-8")
    (out_dir / "curves.csv").write_text(
        curves_csv_text(summary_rows), encoding="utf-8"
    )
    print(f"wrote {out_dir / 'report.json'} and {out_dir / 'curves.csv'}")
    return 0


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "detect":
            return cmd_detect(args)
        return cmd_simulate(args)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    raise SystemExit(main())
