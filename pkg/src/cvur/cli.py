"""Command-line entry point: ``cvur <experiment> [options]``."""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .errors import CvurError, InvariantBreachError
from .experiments import EXPERIMENTS, PLOTTABLE, ExperimentConfig, emit_plot_script, run_experiment, to_csv


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="cvur", description="Conditional-variance uncertainty experiments.")
    parser.add_argument("experiment", choices=EXPERIMENTS)
    parser.add_argument("--seed", type=int, default=7)
    parser.add_argument("--samples", type=int, default=1000, help="random states per batch")
    parser.add_argument("--grid", type=int, default=100, help="grid steps (steps + 1 points)")
    parser.add_argument("--obs", default=None, help="observable tokens, e.g. sx,sy or spin32x,spin32y")
    parser.add_argument("--variant", default=None)
    parser.add_argument("--out", default=None, help="CSV path; defaults to <experiment>.csv")
    parser.add_argument("--json", action="store_true", help="also write the per-row reports as a JSON array")
    parser.add_argument("--plot", action="store_true", help="also write a gnuplot script (sweep-schmidt and scatter-discord)")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    out = Path(args.out or f"{args.experiment}.csv")
    cfg = ExperimentConfig(
        experiment=args.experiment,
        seed=args.seed,
        samples=args.samples,
        grid_steps=args.grid,
        observables=args.obs,
        variant=args.variant,
        output_path=str(out),
    )
    try:
        result = run_experiment(cfg)
        out.write_text(to_csv(result))
        if args.json:
            reports = [r.to_dict() for r in result.reports]
            out.with_suffix(".json").write_text(json.dumps(reports, sort_keys=True, indent=1) + "\n")
        if args.plot:
            if args.experiment in PLOTTABLE:
                emit_plot_script(out, args.experiment)
            else:
                print(f"cvur: no plot defined for {args.experiment}; skipped", file=sys.stderr)
    except InvariantBreachError as exc:
        print(f"cvur: {exc}", file=sys.stderr)
        return 3
    except (CvurError, ValueError, OSError) as exc:
        print(f"cvur: error: {exc}", file=sys.stderr)
        return 2
    print(json.dumps({"experiment": args.experiment, "csv": str(out), **result.summary}, sort_keys=True))
    return 0


if __name__ == "__main__":
    sys.exit(main())
