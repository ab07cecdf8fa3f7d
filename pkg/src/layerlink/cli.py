"""Command line entry points."""

from __future__ import annotations

import argparse
import dataclasses
import sys
from pathlib import Path

from .data import DatasetSpec, generate_dataset, save_records, save_truth
from .experiment import (
    RunConfig,
    load_config,
    run_baseline,
    run_link,
    run_matrix,
    run_privacy_report,
)


def _common_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--seed", type=int, default=None, help="override config seed")
    parser.add_argument(
        "--config", type=Path, default=None, help="JSON or TOML config file"
    )
    parser.add_argument(
        "--out-dir", type=Path, default=Path("out"), help="artifact directory"
    )


def _resolve_config(args: argparse.Namespace) -> RunConfig:
    if args.config is not None:
        return load_config(args.config, seed=args.seed)
    return RunConfig(seed=args.seed if args.seed is not None else 0)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="layerlink",
        description="Privacy-preserving record linkage with layered escalation.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    generate = sub.add_parser("generate", help="write a synthetic dataset pair")
    _common_flags(generate)
    generate.add_argument("--size", type=int, default=5000)
    generate.add_argument("--overlap", type=float, default=0.2)
    generate.add_argument("--min-corruptions", type=int, default=1, choices=(1, 2))

    link = sub.add_parser("link", help="run the full protocol once")
    _common_flags(link)
    link.add_argument(
        "--dump-candidates",
        action="store_true",
        help="also write per-pair final classifications",
    )

    matrix = sub.add_parser("matrix", help="threshold-offset robustness grid")
    _common_flags(matrix)
    matrix.add_argument("--quiet", action="store_true")

    privacy = sub.add_parser(
        "privacy-report", help="encoder flatness and reviewer re-identification risk"
    )
    _common_flags(privacy)

    baseline = sub.add_parser(
        "baseline-abf", help="shared-key attribute encoding baseline"
    )
    _common_flags(baseline)

    serve = sub.add_parser("serve", help="HTTP review service with a live protocol run")
    _common_flags(serve)
    serve.add_argument("--host", default="127.0.0.1")
    serve.add_argument("--port", type=int, default=8000)
    serve.add_argument("--ui-dir", type=Path, default=None)

    return parser


def _cmd_generate(args: argparse.Namespace) -> int:
    if args.config is not None:
        config = _resolve_config(args)
        spec = config.generate
        if spec is None:
            print("config does not define a generated dataset", file=sys.stderr)
            return 2
    else:
        spec = DatasetSpec(
            size=args.size,
            overlap=args.overlap,
            min_corruptions=args.min_corruptions,
            seed=args.seed if args.seed is not None else 0,
        )
    records_a, records_b, truth = generate_dataset(spec)
    out = args.out_dir
    out.mkdir(parents=True, exist_ok=True)
    save_records(out / "a.csv", records_a)
    save_records(out / "b.csv", records_b)
    save_truth(out / "truth.csv", truth)
    print(
        f"wrote {len(records_a)} + {len(records_b)} records,"
        f" {len(truth)} true pairs, to {out}"
    )
    return 0


def _cmd_link(args: argparse.Namespace) -> int:
    config = _resolve_config(args)
    if args.dump_candidates:
        config = dataclasses.replace(config, dump_candidates=True)
    result = run_link(config, args.out_dir)
    first, last = result.metrics[0], result.metrics[-1]
    print(f"run {result.run_id}: {len(result.metrics)} iterations")
    print(
        f"  initial f1 {first.f1:.4f}"
        f" (p {first.precision:.4f} / r {first.recall:.4f})"
        f" at threshold {first.threshold:.4f}"
    )
    print(
        f"  final   f1 {last.f1:.4f}"
        f" (p {last.precision:.4f} / r {last.recall:.4f})"
        f" at threshold {last.threshold:.4f}"
    )
    print(
        f"  clerical reviews {result.clerical_used},"
        f" attribute escalations {result.attribute_reviews}"
    )
    print(f"  artifacts in {args.out_dir}")
    return 0


def _cmd_matrix(args: argparse.Namespace) -> int:
    config = _resolve_config(args)
    matrix = run_matrix(config, args.out_dir, progress=not args.quiet)
    for budget in sorted({row.budget for row in matrix.rows}):
        for error_rate in sorted({row.error_rate for row in matrix.rows}):
            rows = matrix.select(budget=budget, error_rate=error_rate)
            if not rows:
                continue
            initial = matrix.micro_initial(budget=budget, error_rate=error_rate)
            final = matrix.micro_final(budget=budget, error_rate=error_rate)
            print(
                f"budget={budget} err={error_rate:.2f}: micro-f1"
                f" {initial.f1:.4f} -> {final.f1:.4f} over {len(rows)} runs"
            )
    print(f"artifacts in {args.out_dir}")
    return 0


def _cmd_privacy_report(args: argparse.Namespace) -> int:
    config = _resolve_config(args)
    payload = run_privacy_report(config, args.out_dir)
    for strategy, section in payload["clerical_by_strategy"].items():
        print(
            f"strategy {strategy}: kapr {section['kapr']:.4f}"
            f" over {section['n_records']} reviewed records"
        )
    print(f"artifacts in {args.out_dir}")
    return 0


def _cmd_baseline(args: argparse.Namespace) -> int:
    config = _resolve_config(args)
    result = run_baseline(config, args.out_dir)
    print(
        f"shared-key baseline: f1 {result.metrics.f1:.4f}"
        f" (p {result.metrics.precision:.4f} / r {result.metrics.recall:.4f})"
        f" at threshold {result.threshold:.4f}"
    )
    print(f"artifacts in {args.out_dir}")
    return 0


def _cmd_serve(args: argparse.Namespace) -> int:
    from .server import serve_run

    config = _resolve_config(args)
    serve_run(
        config,
        host=args.host,
        port=args.port,
        ui_dir=args.ui_dir,
        out_dir=args.out_dir,
    )
    return 0


_COMMANDS = {
    "generate": _cmd_generate,
    "link": _cmd_link,
    "matrix": _cmd_matrix,
    "privacy-report": _cmd_privacy_report,
    "baseline-abf": _cmd_baseline,
    "serve": _cmd_serve,
}


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    return _COMMANDS[args.command](args)


if __name__ == "__main__":
    raise SystemExit(main())
