"""Command line entry points.

  structprobe synth generate  --sentences N --alphas a1,a2,... --dim D --seed S --out DIR
  structprobe sweep run       --manifest M --train T --dev D --test E --out DIR
  structprobe report csv      --report R [--out F]
  structprobe report plot-data --report R [--out F]
"""

import argparse
import io
import json
import sys
from pathlib import Path

from .metrics import FILTER_ALL, FILTER_SPEARMAN_ONLY
from .probe import TrainConfig
from .sweep import SweepConfig, SweepReport, emit_csv, emit_plot_data, run_sweep
from .synth import generate_series


def _parse_alphas(text):
    try:
        alphas = [float(a) for a in text.split(",") if a.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad alpha list {text!r}") from None
    if not alphas:
        raise argparse.ArgumentTypeError("empty alpha list")
    return alphas


def build_parser():
    parser = argparse.ArgumentParser(prog="structprobe")
    sub = parser.add_subparsers(dest="command", required=True)

    synth = sub.add_parser("synth", help="synthetic data generation")
    synth_sub = synth.add_subparsers(dest="subcommand", required=True)
    gen = synth_sub.add_parser("generate", help="generate a synthetic checkpoint series")
    gen.add_argument("--sentences", type=int, required=True)
    gen.add_argument("--alphas", type=_parse_alphas, required=True,
                     help="comma-separated noise levels, one per checkpoint")
    gen.add_argument("--dim", type=int, default=32)
    gen.add_argument("--seed", type=int, default=0)
    gen.add_argument("--out", required=True)
    gen.add_argument("--model-seeds", type=int, default=1,
                     help="number of simulated fine-tuning seeds")
    gen.add_argument("--min-len", type=int, default=5)
    gen.add_argument("--max-len", type=int, default=20)
    gen.add_argument("--task", default="synthetic")

    sweep = sub.add_parser("sweep", help="checkpoint sweeps")
    sweep_sub = sweep.add_subparsers(dest="subcommand", required=True)
    run = sweep_sub.add_parser("run", help="train + evaluate probes over a manifest")
    run.add_argument("--manifest", required=True)
    run.add_argument("--train", required=True)
    run.add_argument("--dev", required=True)
    run.add_argument("--test", required=True)
    run.add_argument("--out", required=True)
    run.add_argument("--rank", type=int, default=128)
    run.add_argument("--learning-rate", type=float, default=1e-3)
    run.add_argument("--max-epochs", type=int, default=40)
    run.add_argument("--patience", type=int, default=5)
    run.add_argument("--filter-scope", choices=[FILTER_SPEARMAN_ONLY, FILTER_ALL],
                     default=FILTER_SPEARMAN_ONLY)
    run.add_argument("--seed", type=int, default=0)
    run.add_argument("--task", default=None)

    report = sub.add_parser("report", help="render a saved sweep report")
    report_sub = report.add_subparsers(dest="subcommand", required=True)
    for name in ("csv", "plot-data"):
        r = report_sub.add_parser(name)
        r.add_argument("--report", required=True, help="path to a SweepReport JSON")
        r.add_argument("--out", default=None, help="output path (default: stdout)")
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)

    if args.command == "synth":
        entries = generate_series(
            n_sentences=args.sentences,
            checkpoints=args.alphas,
            seed=args.seed,
            out_dir=args.out,
            n_seeds=args.model_seeds,
            dim=args.dim,
            min_len=args.min_len,
            max_len=args.max_len,
            task=args.task,
        )
        print(f"wrote {len(entries)} checkpoint files under {args.out}")
        return 0

    if args.command == "sweep":
        out_dir = Path(args.out)
        out_dir.mkdir(parents=True, exist_ok=True)
        config = SweepConfig(
            manifest=args.manifest,
            train=args.train,
            dev=args.dev,
            test=args.test,
            out_dir=str(out_dir),
            probe=TrainConfig(
                rank=args.rank,
                learning_rate=args.learning_rate,
                max_epochs=args.max_epochs,
                patience=args.patience,
            ),
            filter_scope=args.filter_scope,
            seed=args.seed,
            task=args.task,
        )
        report = run_sweep(config)
        report_path = out_dir / "sweep_report.json"
        report_path.write_text(report.to_json(), encoding="utf-8")
        with open(out_dir / "curves.csv", "w", encoding="utf-8", newline="") as f:
            emit_csv(report, f)
        print(f"wrote {report_path}")
        return 0

    if args.command == "report":
        report = SweepReport.from_json(
            Path(args.report).read_text(encoding="utf-8")
        )
        if args.subcommand == "csv":
            buf = io.StringIO()
            emit_csv(report, buf)
            text = buf.getvalue()
        else:
            text = json.dumps(emit_plot_data(report), indent=2) + "\n"
        if args.out:
            Path(args.out).write_text(text, encoding="utf-8")
        else:
            sys.stdout.write(text)
        return 0

    raise AssertionError(f"unhandled command {args.command}")


if __name__ == "__main__":
    sys.exit(main())
