"""Export per-token hidden states of one transformer layer to EMB1.

Each treebank word is tokenized into subwords; its vector is the arithmetic
mean of the subword vectors at the chosen layer (special start/end markers
excluded). Layer 0 is the embedding output, layer L the output of block L —
the standard per-layer hidden states, before any task head. Sentences the
tokenizer cannot map one-to-one onto words, and sentences exceeding the
model's maximum input length, are excluded and reported, never truncated.
"""

import logging
from dataclasses import dataclass
from pathlib import Path

import numpy as np
import torch
from transformers import AutoModel, AutoTokenizer

from .conllu import read_sentences
from .emb1 import append_manifest_entry, write_emb1

logger = logging.getLogger(__name__)


class ExportError(RuntimeError):
    pass


@dataclass
class ExportResult:
    exported_ids: list
    exceptions: list  # of {"id": ..., "reason": ...}
    dim: int
    bytes_written: int


def _max_input_length(tokenizer, model):
    limit = getattr(model.config, "max_position_embeddings", None)
    tk = tokenizer.model_max_length
    if tk and tk < 10**9:  # transformers uses a huge sentinel for "unset"
        limit = tk if limit is None else min(limit, tk)
    return limit


def _pool_sentence(tokenizer, model, words, layer, max_len):
    """One (n, d) float32 matrix for a word sequence, or a failure reason."""
    enc = tokenizer(
        [words], is_split_into_words=True, truncation=False, return_tensors="pt"
    )
    n_input = enc["input_ids"].shape[1]
    if max_len is not None and n_input > max_len:
        return None, f"input length {n_input} exceeds model maximum {max_len}"
    word_ids = enc.word_ids(0)
    groups = [[] for _ in words]
    for pos, wid in enumerate(word_ids):
        if wid is not None:
            groups[wid].append(pos)
    missing = [i + 1 for i, g in enumerate(groups) if not g]
    if missing:
        return None, f"tokenizer produced no subwords for token(s) {missing}"
    with torch.no_grad():
        out = model(**enc, output_hidden_states=True)
    hidden = out.hidden_states[layer][0]  # (n_input, d)
    rows = [hidden[g].mean(dim=0) for g in groups]
    matrix = torch.stack(rows).to(torch.float32).numpy()
    if not np.isfinite(matrix).all():
        return None, "model produced non-finite activations"
    return matrix, None


def export(
    checkpoint_path,
    conllu_path,
    layer,
    out_path,
    manifest_path=None,
    task="unknown",
    seed=0,
    checkpoint_index=0,
    epoch_fraction=0.0,
):
    """Run the model over a treebank and write one EMB1 record per sentence.

    Returns an ExportResult; raises ExportError when nothing could be
    exported or the layer is out of range.
    """
    tokenizer = AutoTokenizer.from_pretrained(checkpoint_path)
    model = AutoModel.from_pretrained(checkpoint_path)
    model.eval()
    n_layers = model.config.num_hidden_layers
    if not 0 <= layer <= n_layers:
        raise ExportError(f"layer {layer} outside [0, {n_layers}]")
    max_len = _max_input_length(tokenizer, model)

    sentences = read_sentences(Path(conllu_path).read_text(encoding="utf-8"))
    exported = []
    exceptions = []
    for sid, words in sentences:
        matrix, reason = _pool_sentence(tokenizer, model, words, layer, max_len)
        if matrix is None:
            logger.warning("excluding sentence %s: %s", sid, reason)
            exceptions.append({"id": sid, "reason": reason})
            continue
        exported.append((sid, matrix))
    if not exported:
        raise ExportError(
            f"no sentences exported from {conllu_path} "
            f"({len(exceptions)} excluded)"
        )

    out_path = Path(out_path)
    nbytes = write_emb1(exported, out_path)
    if manifest_path is not None:
        manifest_path = Path(manifest_path)
        try:
            rel = out_path.resolve().relative_to(manifest_path.resolve().parent)
            path_field = str(rel)
        except ValueError:
            path_field = str(out_path)
        append_manifest_entry(
            manifest_path,
            {
                "task": task,
                "seed": seed,
                "checkpoint_index": checkpoint_index,
                "epoch_fraction": epoch_fraction,
                "layer": layer,
                "path": path_field,
            },
        )
    return ExportResult(
        exported_ids=[sid for sid, _ in exported],
        exceptions=exceptions,
        dim=exported[0][1].shape[1],
        bytes_written=nbytes,
    )
