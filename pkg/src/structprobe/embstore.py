"""EMB1 binary embedding files, checkpoint manifests, and tree/embedding alignment.

EMB1 layout, little-endian throughout:
  header: magic 'EMB1', version u8 = 1, d u32, reserved u32 = 0   (13 bytes)
  records until EOF: id_len u16, id (UTF-8), n u32, n*d float32 row-major

Values are stored as binary32; in-memory matrices are float64 (probe math
runs in double precision) except that round-trips must be bit-exact, so
matrices read back are compared at float32.
"""

import json
import struct
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import (
    AlignmentError,
    EmbeddingCorruptionError,
    EmbeddingDataError,
    EmbeddingFormatError,
)

MAGIC = b"EMB1"
VERSION = 1
_HEADER = struct.Struct("<4sBII")


@dataclass(frozen=True)
class SentenceEmbedding:
    id: str
    matrix: np.ndarray  # (n, d) float32

    @property
    def n(self):
        return self.matrix.shape[0]

    @property
    def d(self):
        return self.matrix.shape[1]


def write_embeddings(sentences, sink):
    """Write sentences to a binary sink in EMB1 format; returns byte count."""
    dims = {s.d for s in sentences}
    if len(dims) > 1:
        raise ValueError(f"inconsistent embedding dimensions: {sorted(dims)}")
    d = dims.pop() if dims else 0
    count = 0

    def put(data):
        nonlocal count
        sink.write(data)
        count += len(data)

    put(_HEADER.pack(MAGIC, VERSION, d, 0))
    for s in sentences:
        ident = s.id.encode("utf-8")
        put(struct.pack("<H", len(ident)))
        put(ident)
        put(struct.pack("<I", s.n))
        put(np.ascontiguousarray(s.matrix, dtype="<f4").tobytes())
    return count


def read_embeddings(source):
    """Read an EMB1 stream back into a list of SentenceEmbedding."""
    header = source.read(_HEADER.size)
    if len(header) < _HEADER.size:
        raise EmbeddingFormatError("truncated header")
    magic, version, d, _reserved = _HEADER.unpack(header)
    if magic != MAGIC:
        raise EmbeddingFormatError(f"bad magic {magic!r}")
    if version != VERSION:
        raise EmbeddingFormatError(f"unsupported version {version}")
    sentences = []
    offset = _HEADER.size
    while True:
        chunk = source.read(2)
        if not chunk:
            break
        if len(chunk) < 2:
            raise EmbeddingCorruptionError("truncated id length", offset)
        (id_len,) = struct.unpack("<H", chunk)
        offset += 2
        ident = source.read(id_len)
        if len(ident) < id_len:
            raise EmbeddingCorruptionError("truncated id", offset)
        offset += id_len
        chunk = source.read(4)
        if len(chunk) < 4:
            raise EmbeddingCorruptionError("truncated row count", offset)
        (n,) = struct.unpack("<I", chunk)
        offset += 4
        nbytes = 4 * n * d
        payload = source.read(nbytes)
        if len(payload) < nbytes:
            raise EmbeddingCorruptionError("truncated value block", offset)
        offset += nbytes
        sid = ident.decode("utf-8")
        matrix = np.frombuffer(payload, dtype="<f4").reshape(n, d)
        if not np.isfinite(matrix).all():
            raise EmbeddingDataError("non-finite embedding value", sid)
        sentences.append(SentenceEmbedding(id=sid, matrix=matrix))
    return sentences


def write_embeddings_file(sentences, path):
    with open(path, "wb") as f:
        return write_embeddings(sentences, f)


def read_embeddings_file(path):
    with open(path, "rb") as f:
        return read_embeddings(f)


@dataclass(frozen=True)
class ManifestEntry:
    task: str
    seed: int
    checkpoint_index: int
    epoch_fraction: float
    layer: int
    path: str  # relative to the manifest file
    task_metric: float | None = None


def load_manifest(path):
    path = Path(path)
    raw = json.loads(path.read_text(encoding="utf-8"))
    entries = [
        ManifestEntry(
            task=e["task"],
            seed=int(e["seed"]),
            checkpoint_index=int(e["checkpoint_index"]),
            epoch_fraction=float(e["epoch_fraction"]),
            layer=int(e["layer"]),
            path=e["path"],
            task_metric=e.get("task_metric"),
        )
        for e in raw
    ]
    keys = [(e.task, e.seed, e.checkpoint_index) for e in entries]
    if len(set(keys)) != len(keys):
        raise ValueError("duplicate (task, seed, checkpoint_index) in manifest")
    return entries


def save_manifest(entries, path):
    payload = []
    for e in entries:
        obj = {
            "task": e.task,
            "seed": e.seed,
            "checkpoint_index": e.checkpoint_index,
            "epoch_fraction": e.epoch_fraction,
            "layer": e.layer,
            "path": e.path,
        }
        if e.task_metric is not None:
            obj["task_metric"] = e.task_metric
        payload.append(obj)
    Path(path).write_text(json.dumps(payload, indent=2) + "\n", encoding="utf-8")


@dataclass(frozen=True)
class AlignedDataset:
    pairs: tuple  # of (SentenceTree, SentenceEmbedding)
    unmatched_tree_ids: tuple
    unmatched_embedding_ids: tuple


def align(embeddings, trees):
    """Pair embeddings with trees by id; hard error on token-count mismatch."""
    by_id = {e.id: e for e in embeddings}
    pairs = []
    matched = set()
    unmatched_trees = []
    for tree in trees:
        emb = by_id.get(tree.id)
        if emb is None:
            unmatched_trees.append(tree.id)
            continue
        if emb.n != len(tree):
            raise AlignmentError(
                f"id {tree.id!r}: tree has {len(tree)} tokens, embedding has {emb.n} rows"
            )
        matched.add(tree.id)
        pairs.append((tree, emb))
    unmatched_embs = [e.id for e in embeddings if e.id not in matched]
    return AlignedDataset(
        pairs=tuple(pairs),
        unmatched_tree_ids=tuple(unmatched_trees),
        unmatched_embedding_ids=tuple(unmatched_embs),
    )
