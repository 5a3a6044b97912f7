"""Command-line entry point: export hidden states from one checkpoint."""

import argparse
import json
import logging
import sys
from pathlib import Path

from .export import ExportError, export


def build_parser():
    parser = argparse.ArgumentParser(
        prog="export",
        description="Dump per-token hidden states of a transformer layer to EMB1.",
    )
    parser.add_argument("--checkpoint", required=True, help="model checkpoint path")
    parser.add_argument("--conllu", required=True, help="source treebank (CoNLL-U)")
    parser.add_argument("--layer", type=int, default=7, help="hidden layer index")
    parser.add_argument("--out", required=True, help="EMB1 output file")
    parser.add_argument("--manifest", help="manifest JSON to append to")
    parser.add_argument("--task", default="unknown", help="fine-tuning task name")
    parser.add_argument("--seed", type=int, default=0, help="fine-tuning seed")
    parser.add_argument("--checkpoint-index", type=int, default=0)
    parser.add_argument("--epoch-fraction", type=float, default=0.0)
    return parser


def main(argv=None):
    logging.basicConfig(level=logging.INFO, format="%(levelname)s %(message)s")
    args = build_parser().parse_args(argv)
    try:
        result = export(
            checkpoint_path=args.checkpoint,
            conllu_path=args.conllu,
            layer=args.layer,
            out_path=args.out,
            manifest_path=args.manifest,
            task=args.task,
            seed=args.seed,
            checkpoint_index=args.checkpoint_index,
            epoch_fraction=args.epoch_fraction,
        )
    except ExportError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    if result.exceptions:
        report = Path(args.out).with_suffix(".exceptions.json")
        report.write_text(json.dumps(result.exceptions, indent=2) + "\n")
        logging.warning(
            "%d sentence(s) excluded; see %s", len(result.exceptions), report
        )
    print(
        f"exported {len(result.exported_ids)} sentences "
        f"(d={result.dim}, {result.bytes_written} bytes) to {args.out}"
    )
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
