"""Checkpoint/seed sweep: train probes per cell, evaluate, aggregate curves.

Each manifest entry is one (checkpoint, seed) cell. Both probes are trained
from scratch per cell on the train split with dev-based early stopping and
evaluated on the test split; per-checkpoint aggregation across seeds gives
mean and a min/max variability band. Per-seed reports are kept in the
serialized SweepReport so alternative bands can be recomputed.
"""

import json
from dataclasses import asdict, dataclass, field, replace
from pathlib import Path

from .embstore import align, load_manifest, read_embeddings_file
from .errors import AlignmentError, SweepError
from .metrics import FILTER_SPEARMAN_ONLY, evaluate
from .probe import DEPTH, DISTANCE, TrainConfig, train_probe
from .treebank import parse_conllu

METRIC_NAMES = ("dspr", "nspr", "root_acc", "uuas")


@dataclass(frozen=True)
class SweepConfig:
    manifest: str
    train: str
    dev: str
    test: str
    out_dir: str
    probe: TrainConfig = TrainConfig()
    filter_scope: str = FILTER_SPEARMAN_ONLY
    seed: int = 0
    task: str | None = None  # required when the manifest holds several tasks


@dataclass(frozen=True)
class CurvePoint:
    checkpoint_index: int
    epoch_fraction: float
    stats: dict  # metric -> {"mean","min","max"} (None when undefined everywhere)
    task_metric: float | None = None


@dataclass
class SweepReport:
    task: str
    points: list  # of CurvePoint, checkpoint indices strictly increasing
    cells: list  # of {"checkpoint_index","seed","report"}
    config: dict

    def to_json(self):
        payload = {
            "task": self.task,
            "points": [asdict(p) for p in self.points],
            "cells": self.cells,
            "config": self.config,
        }
        return json.dumps(payload, indent=2, sort_keys=True) + "\n"

    @classmethod
    def from_json(cls, text):
        payload = json.loads(text)
        points = [
            CurvePoint(
                checkpoint_index=p["checkpoint_index"],
                epoch_fraction=p["epoch_fraction"],
                stats=p["stats"],
                task_metric=p.get("task_metric"),
            )
            for p in payload["points"]
        ]
        return cls(
            task=payload["task"],
            points=points,
            cells=payload["cells"],
            config=payload["config"],
        )


def _load_split(path):
    return parse_conllu(Path(path).read_text(encoding="utf-8"))


def _aggregate(values):
    defined = [v for v in values if v is not None]
    if not defined:
        return {"mean": None, "min": None, "max": None}
    return {
        "mean": sum(defined) / len(defined),
        "min": min(defined),
        "max": max(defined),
    }


def run_sweep(config):
    """Execute the full sweep described by config; returns a SweepReport."""
    manifest_path = Path(config.manifest)
    entries = load_manifest(manifest_path)
    tasks = sorted({e.task for e in entries})
    if config.task is not None:
        entries = [e for e in entries if e.task == config.task]
        if not entries:
            raise SweepError(f"no manifest entries for task {config.task!r}")
        task = config.task
    elif len(tasks) == 1:
        task = tasks[0]
    else:
        raise SweepError(f"manifest holds several tasks {tasks}; pass a task filter")

    train_trees = _load_split(config.train)
    dev_trees = _load_split(config.dev)
    test_trees = _load_split(config.test)
    ids = [{t.id for t in split} for split in (train_trees, dev_trees, test_trees)]
    if ids[0] & ids[1] or ids[0] & ids[2] or ids[1] & ids[2]:
        raise SweepError("train/dev/test sentence ids overlap")

    entries = sorted(entries, key=lambda e: (e.checkpoint_index, e.seed))
    cells = []
    for entry in entries:
        emb_path = manifest_path.parent / entry.path
        if not emb_path.exists():
            raise SweepError(
                f"missing embedding file {emb_path} "
                f"(task={entry.task}, seed={entry.seed}, checkpoint={entry.checkpoint_index})"
            )
        embeddings = read_embeddings_file(emb_path)
        try:
            train_set = align(embeddings, train_trees)
            dev_set = align(embeddings, dev_trees)
            test_set = align(embeddings, test_trees)
        except AlignmentError as exc:
            raise SweepError(
                f"alignment failed for checkpoint {entry.checkpoint_index}, "
                f"seed {entry.seed}: {exc}"
            ) from exc
        probe_seed = config.seed ^ entry.seed ^ entry.checkpoint_index
        cell_config = replace(config.probe, seed=probe_seed)
        dist_probe, _ = train_probe(
            train_set.pairs, dev_set.pairs, DISTANCE, cell_config, layer=entry.layer
        )
        depth_probe, _ = train_probe(
            train_set.pairs, dev_set.pairs, DEPTH, cell_config, layer=entry.layer
        )
        report = evaluate(
            dist_probe, depth_probe, test_set, filter_scope=config.filter_scope
        )
        cells.append(
            {
                "checkpoint_index": entry.checkpoint_index,
                "seed": entry.seed,
                "epoch_fraction": entry.epoch_fraction,
                "task_metric": entry.task_metric,
                "report": report.to_dict(),
            }
        )

    points = []
    for ckpt in sorted({c["checkpoint_index"] for c in cells}):
        group = [c for c in cells if c["checkpoint_index"] == ckpt]
        fractions = {c["epoch_fraction"] for c in group}
        if len(fractions) != 1:
            raise SweepError(
                f"checkpoint {ckpt}: inconsistent epoch_fraction across seeds"
            )
        stats = {
            m: _aggregate([c["report"][m] for c in group]) for m in METRIC_NAMES
        }
        task_vals = [c["task_metric"] for c in group if c["task_metric"] is not None]
        points.append(
            CurvePoint(
                checkpoint_index=ckpt,
                epoch_fraction=fractions.pop(),
                stats=stats,
                task_metric=sum(task_vals) / len(task_vals) if task_vals else None,
            )
        )

    snapshot = {
        "manifest": str(config.manifest),
        "train": str(config.train),
        "dev": str(config.dev),
        "test": str(config.test),
        "out_dir": str(config.out_dir),
        "probe": asdict(config.probe),
        "filter_scope": config.filter_scope,
        "seed": config.seed,
        "task": task,
    }
    return SweepReport(task=task, points=points, cells=cells, config=snapshot)


def emit_csv(report, sink):
    """Curve rows as CSV, 6-decimal reals, ordered by checkpoint then metric name."""
    count = 0

    def put(line):
        nonlocal count
        data = line + "\n"
        sink.write(data)
        count += len(data.encode("utf-8"))

    def fmt(x):
        return "" if x is None else f"{x:.6f}"

    put("checkpoint,epoch_fraction,metric,mean,min,max,task_metric")
    for p in report.points:
        for m in METRIC_NAMES:
            s = p.stats[m]
            put(
                f"{p.checkpoint_index},{p.epoch_fraction:.6f},{m},"
                f"{fmt(s['mean'])},{fmt(s['min'])},{fmt(s['max'])},{fmt(p.task_metric)}"
            )
    return count


def emit_plot_data(report):
    """Per-metric x / y / y_lo / y_hi arrays ready for plotting."""
    doc = {"task": report.task, "metrics": {}}
    x = [p.epoch_fraction for p in report.points]
    checkpoints = [p.checkpoint_index for p in report.points]
    for m in METRIC_NAMES:
        doc["metrics"][m] = {
            "x": x,
            "checkpoints": checkpoints,
            "y": [p.stats[m]["mean"] for p in report.points],
            "y_lo": [p.stats[m]["min"] for p in report.points],
            "y_hi": [p.stats[m]["max"] for p in report.points],
        }
    if any(p.task_metric is not None for p in report.points):
        doc["task_metric"] = {
            "x": x,
            "y": [p.task_metric for p in report.points],
        }
    return doc
