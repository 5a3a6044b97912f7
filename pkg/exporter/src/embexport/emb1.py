"""EMB1 writer and manifest helper.

EMB1 layout, little-endian:
  header: magic 'EMB1', version u8 = 1, d u32, reserved u32 = 0   (13 bytes)
  records until EOF: id_len u16, id (UTF-8), n u32, n*d float32 row-major

The probing side owns the reader; this package only ever writes the format.
"""

import json
import struct
from pathlib import Path

import numpy as np

MAGIC = b"EMB1"
VERSION = 1
_HEADER = struct.Struct("<4sBII")


def write_emb1(sentences, path):
    """Write (id, matrix) pairs as an EMB1 file; returns bytes written.

    Matrices are cast to little-endian float32; all must share one width.
    """
    dims = {m.shape[1] for _, m in sentences}
    if len(dims) > 1:
        raise ValueError(f"inconsistent embedding dimensions: {sorted(dims)}")
    d = dims.pop() if dims else 0
    count = 0
    with open(path, "wb") as sink:
        count += sink.write(_HEADER.pack(MAGIC, VERSION, d, 0))
        for sid, matrix in sentences:
            ident = sid.encode("utf-8")
            count += sink.write(struct.pack("<H", len(ident)))
            count += sink.write(ident)
            count += sink.write(struct.pack("<I", matrix.shape[0]))
            count += sink.write(np.ascontiguousarray(matrix, dtype="<f4").tobytes())
    return count


def append_manifest_entry(manifest_path, entry):
    """Append one entry dict to a manifest JSON list, creating it if absent.

    Replaces any existing entry with the same (task, seed, checkpoint_index)
    so re-exports update in place instead of accumulating duplicates.
    """
    manifest_path = Path(manifest_path)
    if manifest_path.exists():
        entries = json.loads(manifest_path.read_text(encoding="utf-8"))
    else:
        entries = []
    key = (entry["task"], entry["seed"], entry["checkpoint_index"])
    entries = [
        e for e in entries if (e["task"], e["seed"], e["checkpoint_index"]) != key
    ]
    entries.append(entry)
    manifest_path.write_text(json.dumps(entries, indent=2) + "\n", encoding="utf-8")
    return entries
