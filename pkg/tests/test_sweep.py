import io
import json

import pytest

from structprobe.errors import SweepError
from structprobe.probe import TrainConfig
from structprobe.sweep import (
    METRIC_NAMES,
    SweepConfig,
    SweepReport,
    emit_csv,
    emit_plot_data,
    run_sweep,
)
from structprobe.synth import generate_series


def small_probe_config():
    return TrainConfig(rank=8, max_epochs=4, patience=4)


@pytest.fixture(scope="module")
def series_dir(tmp_path_factory):
    out = tmp_path_factory.mktemp("series")
    generate_series(
        n_sentences=20,
        checkpoints=[0.8, 0.3],
        seed=17,
        out_dir=out,
        n_seeds=2,
        dim=12,
        min_len=5,
        max_len=10,
    )
    return out


def sweep_config(series_dir, out_dir, **overrides):
    kwargs = dict(
        manifest=str(series_dir / "manifest.json"),
        train=str(series_dir / "train.conllu"),
        dev=str(series_dir / "dev.conllu"),
        test=str(series_dir / "test.conllu"),
        out_dir=str(out_dir),
        probe=small_probe_config(),
        seed=5,
    )
    kwargs.update(overrides)
    return SweepConfig(**kwargs)


@pytest.fixture(scope="module")
def report(series_dir, tmp_path_factory):
    return run_sweep(sweep_config(series_dir, tmp_path_factory.mktemp("out")))


def test_report_structure(report):
    assert report.task == "synthetic"
    idx = [p.checkpoint_index for p in report.points]
    assert idx == sorted(idx) and len(idx) == 2
    assert len(report.cells) == 4
    for p in report.points:
        for m in METRIC_NAMES:
            s = p.stats[m]
            assert s["min"] <= s["mean"] <= s["max"]


def test_aggregation_matches_cells(report):
    for p in report.points:
        group = [c for c in report.cells if c["checkpoint_index"] == p.checkpoint_index]
        for m in METRIC_NAMES:
            vals = [c["report"][m] for c in group if c["report"][m] is not None]
            assert abs(p.stats[m]["mean"] - sum(vals) / len(vals)) < 1e-12


def test_determinism_byte_identical(series_dir, tmp_path):
    r1 = run_sweep(sweep_config(series_dir, tmp_path / "a"))
    r2 = run_sweep(sweep_config(series_dir, tmp_path / "a"))
    assert r1.to_json() == r2.to_json()
    b1, b2 = io.StringIO(), io.StringIO()
    emit_csv(r1, b1)
    emit_csv(r2, b2)
    assert b1.getvalue() == b2.getvalue()


def test_single_cell_mean_equals_extremes(series_dir, tmp_path):
    import json as _json
    from structprobe.embstore import load_manifest, save_manifest

    entries = [
        e for e in load_manifest(series_dir / "manifest.json")
        if e.seed == 0 and e.checkpoint_index == 0
    ]
    save_manifest(entries, tmp_path / "manifest.json")
    for name in entries[0].path,:
        (tmp_path / name).write_bytes((series_dir / name).read_bytes())
    for split in ("train", "dev", "test"):
        (tmp_path / f"{split}.conllu").write_bytes(
            (series_dir / f"{split}.conllu").read_bytes()
        )
    cfg = sweep_config(tmp_path, tmp_path / "out")
    rep = run_sweep(cfg)
    assert len(rep.points) == 1
    for m in METRIC_NAMES:
        s = rep.points[0].stats[m]
        assert s["mean"] == s["min"] == s["max"]


def test_seed_isolation(series_dir, tmp_path, report):
    from structprobe.embstore import load_manifest, save_manifest

    entries = [e for e in load_manifest(series_dir / "manifest.json") if e.seed == 0]
    save_manifest(entries, tmp_path / "manifest.json")
    for e in entries:
        (tmp_path / e.path).write_bytes((series_dir / e.path).read_bytes())
    for split in ("train", "dev", "test"):
        (tmp_path / f"{split}.conllu").write_bytes(
            (series_dir / f"{split}.conllu").read_bytes()
        )
    reduced = run_sweep(sweep_config(tmp_path, tmp_path / "out"))
    kept = [c for c in report.cells if c["seed"] == 0]
    assert reduced.cells == kept


def test_missing_embedding_file(series_dir, tmp_path):
    from structprobe.embstore import load_manifest, save_manifest

    entries = load_manifest(series_dir / "manifest.json")
    bad = [e for e in entries][:1]
    from dataclasses import replace

    save_manifest([replace(bad[0], path="missing.emb1")], tmp_path / "manifest.json")
    for split in ("train", "dev", "test"):
        (tmp_path / f"{split}.conllu").write_bytes(
            (series_dir / f"{split}.conllu").read_bytes()
        )
    with pytest.raises(SweepError, match="missing.emb1"):
        run_sweep(sweep_config(tmp_path, tmp_path / "out"))


def test_report_json_roundtrip(report):
    back = SweepReport.from_json(report.to_json())
    assert back.to_json() == report.to_json()


def test_emit_csv_shape_and_roundtrip(report):
    buf = io.StringIO()
    count = emit_csv(report, buf)
    text = buf.getvalue()
    assert count == len(text.encode())
    lines = text.strip().splitlines()
    assert lines[0] == "checkpoint,epoch_fraction,metric,mean,min,max,task_metric"
    assert len(lines) == 1 + 4 * len(report.points)
    # parse back and compare to 1e-6
    for line in lines[1:]:
        ckpt, frac, metric, mean, lo, hi, _ = line.split(",")
        p = next(q for q in report.points if q.checkpoint_index == int(ckpt))
        assert abs(float(frac) - p.epoch_fraction) < 1e-6
        assert abs(float(mean) - p.stats[metric]["mean"]) < 1e-6
        assert abs(float(lo) - p.stats[metric]["min"]) < 1e-6
        assert abs(float(hi) - p.stats[metric]["max"]) < 1e-6


def test_emit_csv_empty_report():
    buf = io.StringIO()
    emit_csv(SweepReport(task="t", points=[], cells=[], config={}), buf)
    assert buf.getvalue().strip() == "checkpoint,epoch_fraction,metric,mean,min,max,task_metric"


def test_emit_plot_data(report):
    doc = emit_plot_data(report)
    assert set(doc["metrics"]) == set(METRIC_NAMES)
    for m in METRIC_NAMES:
        series = doc["metrics"][m]
        n = len(report.points)
        assert len(series["x"]) == len(series["y"]) == n
        assert len(series["y_lo"]) == len(series["y_hi"]) == n
        for lo, y, hi in zip(series["y_lo"], series["y"], series["y_hi"]):
            assert lo <= y <= hi
    json.dumps(doc)  # serializable


def test_plot_data_schema(report):
    import jsonschema

    schema = {
        "type": "object",
        "required": ["task", "metrics"],
        "properties": {
            "task": {"type": "string"},
            "metrics": {
                "type": "object",
                "additionalProperties": {
                    "type": "object",
                    "required": ["x", "y", "y_lo", "y_hi"],
                    "properties": {
                        name: {"type": "array", "items": {"type": ["number", "null"]}}
                        for name in ("x", "y", "y_lo", "y_hi", "checkpoints")
                    },
                },
            },
        },
    }
    jsonschema.validate(emit_plot_data(report), schema)


def test_overlapping_splits_rejected(series_dir, tmp_path):
    cfg = sweep_config(series_dir, tmp_path, dev=str(series_dir / "train.conllu"))
    with pytest.raises(SweepError, match="overlap"):
        run_sweep(cfg)
