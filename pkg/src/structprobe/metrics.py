"""The four probe evaluation metrics: UUAS, DSpr, Root%, NSpr.

Sentence length filter: DSpr, NSpr and Root% count only sentences with
5 <= n <= 50; UUAS counts all sentences by default. filter_scope="all"
extends the length filter to UUAS as well. Punctuation-incident edges are
removed from both edge sets before UUAS; the Spearman metrics use all tokens.
Undefined Spearman values (constant vectors) are excluded from averages.
"""

import json
from dataclasses import dataclass

import numpy as np

from .decode import mst, predicted_root
from .probe import predict_depths, predict_distances
from .treebank import gold_depths, gold_distances, gold_edges, punctuation_mask

LENGTH_MIN = 5
LENGTH_MAX = 50

FILTER_SPEARMAN_ONLY = "spearman-only"
FILTER_ALL = "all"


@dataclass
class MetricReport:
    uuas: float | None
    dspr: float | None
    root_acc: float | None
    nspr: float | None
    counted_uuas: int
    counted_dspr: int
    counted_root: int
    counted_nspr: int

    def to_dict(self):
        return {
            "uuas": self.uuas,
            "dspr": self.dspr,
            "root_acc": self.root_acc,
            "nspr": self.nspr,
            "counted_uuas": self.counted_uuas,
            "counted_dspr": self.counted_dspr,
            "counted_root": self.counted_root,
            "counted_nspr": self.counted_nspr,
        }

    def to_json(self):
        return json.dumps(self.to_dict())


def average_ranks(x):
    """Ranks 1..n with ties assigned the average of their positions."""
    x = np.asarray(x, dtype=np.float64)
    order = np.argsort(x, kind="stable")
    ranks = np.empty(len(x), dtype=np.float64)
    i = 0
    while i < len(x):
        j = i
        while j + 1 < len(x) and x[order[j + 1]] == x[order[i]]:
            j += 1
        ranks[order[i : j + 1]] = (i + j) / 2.0 + 1.0
        i = j + 1
    return ranks


def spearman(x, y):
    """Spearman rank correlation with average ties; None if either side is constant."""
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    if x.shape != y.shape:
        raise ValueError(f"length mismatch: {x.shape} vs {y.shape}")
    if x.size < 2:
        raise ValueError("need at least 2 observations")
    rx = average_ranks(x)
    ry = average_ranks(y)
    rx = rx - rx.mean()
    ry = ry - ry.mean()
    denom = np.sqrt((rx @ rx) * (ry @ ry))
    if denom == 0.0:
        return None
    return float((rx @ ry) / denom)


def uuas(pred_edges, golds, punct):
    """Edge recovery after dropping punctuation-incident edges from both sets.

    Returns None when the filtered gold set is empty (sentence not counted).
    """
    punct_idx = {i + 1 for i, p in enumerate(punct) if p}

    def keep(edges):
        return {e for e in edges if e[0] not in punct_idx and e[1] not in punct_idx}

    g = keep(golds)
    if not g:
        return None
    p = keep(pred_edges)
    return len(p & g) / len(g)


def _in_range(n):
    return LENGTH_MIN <= n <= LENGTH_MAX


def dspr_sentence(gold_dist, pred_dist):
    """Average per-word Spearman between gold and predicted distance rows."""
    n = gold_dist.shape[0]
    vals = []
    mask = ~np.eye(n, dtype=bool)
    for i in range(n):
        rho = spearman(gold_dist[i][mask[i]], pred_dist[i][mask[i]])
        if rho is not None:
            vals.append(rho)
    if not vals:
        return None
    return float(np.mean(vals))


def dspr(pairs):
    """Macro-average of per-sentence DSpr over sentences with 5 <= n <= 50."""
    vals = []
    for gold_dist, pred_dist in pairs:
        if not _in_range(gold_dist.shape[0]):
            continue
        v = dspr_sentence(np.asarray(gold_dist, dtype=np.float64), pred_dist)
        if v is not None:
            vals.append(v)
    if not vals:
        return None, 0
    return float(np.mean(vals)), len(vals)


def nspr(pairs):
    """Macro-average per-sentence Spearman of depth orderings, 5 <= n <= 50."""
    vals = []
    for gold_dep, pred_dep in pairs:
        if not _in_range(len(gold_dep)):
            continue
        rho = spearman(gold_dep, pred_dep)
        if rho is not None:
            vals.append(rho)
    if not vals:
        return None, 0
    return float(np.mean(vals)), len(vals)


def root_accuracy(pairs):
    """Fraction of sentences (5 <= n <= 50) whose predicted root is the gold root.

    pairs: (n, gold_root, predicted_root) triples.
    """
    hits = 0
    total = 0
    for n, gold_root, pred_root in pairs:
        if not _in_range(n):
            continue
        total += 1
        hits += gold_root == pred_root
    if total == 0:
        return None, 0
    return hits / total, total


def evaluate(distance_probe, depth_probe, dataset, filter_scope=FILTER_SPEARMAN_ONLY):
    """Run predict -> decode -> metrics over an aligned (tree, embedding) dataset."""
    if filter_scope not in (FILTER_SPEARMAN_ONLY, FILTER_ALL):
        raise ValueError(f"unknown filter_scope {filter_scope!r}")
    pairs = dataset.pairs if hasattr(dataset, "pairs") else tuple(dataset)
    if not pairs:
        raise ValueError("empty evaluation set")

    uuas_vals = []
    dspr_pairs = []
    nspr_pairs = []
    root_triples = []
    for tree, emb in pairs:
        n = len(tree)
        pred_dist = predict_distances(distance_probe, emb.matrix)
        pred_dep = predict_depths(depth_probe, emb.matrix)
        gold_dist = gold_distances(tree)
        gold_dep = gold_depths(tree)

        if filter_scope == FILTER_SPEARMAN_ONLY or _in_range(n):
            if n >= 2:
                score = uuas(mst(pred_dist), gold_edges(tree), punctuation_mask(tree))
                if score is not None:
                    uuas_vals.append(score)
        dspr_pairs.append((gold_dist, pred_dist))
        nspr_pairs.append((gold_dep, pred_dep))
        root_triples.append((n, tree.root, predicted_root(pred_dep)))

    dspr_val, dspr_count = dspr(dspr_pairs)
    nspr_val, nspr_count = nspr(nspr_pairs)
    root_val, root_count = root_accuracy(root_triples)
    return MetricReport(
        uuas=float(np.mean(uuas_vals)) if uuas_vals else None,
        dspr=dspr_val,
        root_acc=root_val,
        nspr=nspr_val,
        counted_uuas=len(uuas_vals),
        counted_dspr=dspr_count,
        counted_root=root_count,
        counted_nspr=nspr_count,
    )
