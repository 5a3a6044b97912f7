"""Linear structural probes: squared-L2 distance and depth parameterizations.

A probe is a k x d matrix B. Distance probe: pred(i,j) = ||B(h_i - h_j)||^2
targets tree path lengths. Depth probe: pred(i) = ||B h_i||^2 targets tree
depths. Both are trained with a per-sentence L1 objective, Adam updates, and
early stopping on a dev split. All arithmetic is float64.
"""

import base64
import csv
import json
from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .errors import DivergenceError
from .treebank import gold_depths, gold_distances

DISTANCE = "distance"
DEPTH = "depth"


@dataclass
class ProbeParams:
    b: np.ndarray  # (k, d) float64
    kind: str  # DISTANCE or DEPTH
    layer: int = 0
    seed: int = 0

    @property
    def rank(self):
        return self.b.shape[0]

    @property
    def d(self):
        return self.b.shape[1]


@dataclass(frozen=True)
class TrainConfig:
    rank: int = 128
    learning_rate: float = 1e-3
    max_epochs: int = 40
    patience: int = 5
    seed: int = 0
    init_scale: float = 0.05

    def __post_init__(self):
        if self.patience > self.max_epochs and self.max_epochs > 0:
            raise ValueError("patience must be <= max_epochs")
        if self.learning_rate <= 0 or self.init_scale <= 0:
            raise ValueError("learning_rate and init_scale must be positive")


@dataclass
class TrainingLog:
    epochs: list = field(default_factory=list)  # (epoch, train_loss, dev_loss)

    def to_csv(self, sink):
        writer = csv.writer(sink)
        writer.writerow(["epoch", "train_loss", "dev_loss"])
        for epoch, train_loss, dev_loss in self.epochs:
            writer.writerow([epoch, repr(train_loss), repr(dev_loss)])


def _as_f64(h):
    return np.ascontiguousarray(h, dtype=np.float64)


def predict_distances(params, h):
    """n x n matrix of squared L2 distances between probed token vectors."""
    if params.kind != DISTANCE:
        raise ValueError(f"expected a distance probe, got kind={params.kind!r}")
    h = _as_f64(h)
    if h.shape[1] != params.d:
        raise ValueError(f"embedding dim {h.shape[1]} != probe dim {params.d}")
    return kernels.pairwise_sq_dists(h @ params.b.T)


def predict_depths(params, h):
    """Length-n vector of squared L2 norms of probed token vectors."""
    if params.kind != DEPTH:
        raise ValueError(f"expected a depth probe, got kind={params.kind!r}")
    h = _as_f64(h)
    if h.shape[1] != params.d:
        raise ValueError(f"embedding dim {h.shape[1]} != probe dim {params.d}")
    return kernels.sq_norms(h @ params.b.T)


def distance_loss(pred, gold):
    """(1/n^2) sum over ordered pairs i != j of |gold(i,j) - pred(i,j)|."""
    n = pred.shape[0]
    if n < 2:
        raise ValueError("distance loss undefined for n < 2")
    resid = np.asarray(gold, dtype=np.float64) - pred
    np.fill_diagonal(resid, 0.0)
    return float(np.abs(resid).sum() / (n * n))


def depth_loss(pred, gold):
    """(1/n) sum_i |gold(i) - pred(i)|."""
    n = len(pred)
    return float(np.abs(np.asarray(gold, dtype=np.float64) - pred).sum() / n)


def distance_gradient(params, h, gold):
    """Gradient of distance_loss(predict_distances(B, h), gold) wrt B; sign(0)=0."""
    h = _as_f64(h)
    _, grad = kernels.distance_loss_grad(
        params.b, h, np.asarray(gold, dtype=np.float64)
    )
    return grad


def depth_gradient(params, h, gold):
    """Gradient of depth_loss(predict_depths(B, h), gold) wrt B; sign(0)=0."""
    h = _as_f64(h)
    _, grad = kernels.depth_loss_grad(params.b, h, np.asarray(gold, dtype=np.float64))
    return grad


def _prepare(pairs, kind):
    """Extract (h, gold) arrays once; gold from tree geometry."""
    out = []
    for tree, emb in pairs:
        h = _as_f64(emb.matrix)
        if kind == DISTANCE:
            gold = gold_distances(tree).astype(np.float64)
        else:
            gold = gold_depths(tree).astype(np.float64)
        out.append((h, gold))
    return out


def _dataset_loss(b, data, kind):
    loss_fn = kernels.distance_loss_grad if kind == DISTANCE else kernels.depth_loss_grad
    total = 0.0
    for h, gold in data:
        loss, _ = loss_fn(b, h, gold)
        total += loss
    return total / len(data)


def train_probe(train_pairs, dev_pairs, kind, config, layer=0):
    """Train a probe by per-sentence Adam SGD with best-dev-loss selection.

    train_pairs / dev_pairs: sequences of (SentenceTree, SentenceEmbedding).
    Returns (ProbeParams, TrainingLog). Deterministic in (data order, config).
    """
    if kind not in (DISTANCE, DEPTH):
        raise ValueError(f"unknown probe kind {kind!r}")
    if not train_pairs or not dev_pairs:
        raise ValueError("train and dev splits must be non-empty")
    d = train_pairs[0][1].d
    rng = np.random.default_rng(config.seed)
    b = rng.uniform(-config.init_scale, config.init_scale, size=(config.rank, d))

    train = _prepare(train_pairs, kind)
    dev = _prepare(dev_pairs, kind)
    loss_fn = kernels.distance_loss_grad if kind == DISTANCE else kernels.depth_loss_grad

    # Adam state
    m = np.zeros_like(b)
    v = np.zeros_like(b)
    t = 0
    beta1, beta2, eps = 0.9, 0.999, 1e-8
    lr = config.learning_rate

    log = TrainingLog()
    best_b = b.copy()
    best_dev = np.inf
    stall = 0
    for epoch in range(1, config.max_epochs + 1):
        order = rng.permutation(len(train))
        train_loss = 0.0
        for idx in order:
            h, gold = train[idx]
            loss, grad = loss_fn(b, h, gold)
            if not np.isfinite(loss):
                raise DivergenceError(epoch, lr)
            train_loss += loss
            t += 1
            m = beta1 * m + (1 - beta1) * grad
            v = beta2 * v + (1 - beta2) * grad * grad
            m_hat = m / (1 - beta1**t)
            v_hat = v / (1 - beta2**t)
            b = b - lr * m_hat / (np.sqrt(v_hat) + eps)
        train_loss /= len(train)
        dev_loss = _dataset_loss(b, dev, kind)
        if not np.isfinite(dev_loss):
            raise DivergenceError(epoch, lr)
        log.epochs.append((epoch, train_loss, dev_loss))
        if dev_loss < best_dev:
            best_dev = dev_loss
            best_b = b.copy()
            stall = 0
        else:
            stall += 1
            if stall >= config.patience:
                break
    params = ProbeParams(b=best_b, kind=kind, layer=layer, seed=config.seed)
    return params, log


def save_probe(params, path):
    payload = {
        "kind": params.kind,
        "layer": params.layer,
        "rank": params.rank,
        "d": params.d,
        "seed": params.seed,
        "b": base64.b64encode(
            np.ascontiguousarray(params.b, dtype="<f8").tobytes()
        ).decode("ascii"),
    }
    with open(path, "w", encoding="utf-8") as f:
        json.dump(payload, f)
        f.write("\n")


def load_probe(path):
    with open(path, encoding="utf-8") as f:
        payload = json.load(f)
    b = np.frombuffer(base64.b64decode(payload["b"]), dtype="<f8").reshape(
        payload["rank"], payload["d"]
    )
    return ProbeParams(
        b=b.copy(), kind=payload["kind"], layer=payload["layer"], seed=payload["seed"]
    )
