"""Synthetic corpora with known tree geometry.

Embeddings are constructed so that squared L2 distances (resp. norms) equal
gold tree distances (resp. depths) exactly, then degraded toward Gaussian
noise and passed through a hidden linear transform to emulate a checkpoint
series. Tree metrics are of negative type, so the doubly-centered Gram
matrix is positive semidefinite and classical MDS recovers them exactly.
"""

import heapq
from pathlib import Path

import numpy as np

from . import kernels
from .embstore import ManifestEntry, SentenceEmbedding, save_manifest, write_embeddings_file
from .treebank import SentenceTree, Token, gold_depths, gold_distances, validate_tree

EIG_CLAMP = 1e-9
EIG_NEGATIVE_LIMIT = -1e-6
MAX_CONDITION = 1e6


def random_tree(n, seed, sentence_id=None):
    """Uniformly random labeled tree on n nodes via a random Pruefer sequence."""
    if n < 1:
        raise ValueError(f"need n >= 1, got {n}")
    rng = np.random.default_rng(seed)
    if sentence_id is None:
        sentence_id = f"synth-{seed}"
    if n == 1:
        return SentenceTree(
            id=sentence_id, tokens=(Token(form="w1", upos="NOUN", head=0, index=1),)
        )
    edges = _pruefer_edges(n, rng)
    root = int(rng.integers(1, n + 1))
    heads = _orient(n, edges, root)
    tokens = tuple(
        Token(form=f"w{i+1}", upos="NOUN", head=heads[i], index=i + 1)
        for i in range(n)
    )
    return validate_tree(SentenceTree(id=sentence_id, tokens=tokens))


def _pruefer_edges(n, rng):
    """Decode a random Pruefer sequence into an edge list over 1..n."""
    if n == 2:
        return [(1, 2)]
    seq = rng.integers(1, n + 1, size=n - 2)
    degree = np.ones(n + 1, dtype=np.int64)
    for s in seq:
        degree[s] += 1
    edges = []
    leaves = [i for i in range(1, n + 1) if degree[i] == 1]
    heapq.heapify(leaves)
    for s in seq:
        leaf = heapq.heappop(leaves)
        edges.append((leaf, int(s)))
        degree[s] -= 1
        if degree[s] == 1:
            heapq.heappush(leaves, int(s))
    u = heapq.heappop(leaves)
    v = heapq.heappop(leaves)
    edges.append((u, v))
    return edges


def _orient(n, edges, root):
    """Head assignment with edges pointed away from root; root's head is 0."""
    adj = [[] for _ in range(n + 1)]
    for a, b in edges:
        adj[a].append(b)
        adj[b].append(a)
    heads = [0] * n
    stack = [root]
    seen = {root}
    while stack:
        u = stack.pop()
        for w in adj[u]:
            if w not in seen:
                seen.add(w)
                heads[w - 1] = u
                stack.append(w)
    return heads


def exact_distance_embedding(tree, d):
    """Embedding whose pairwise squared L2 distances equal gold tree distances.

    Classical MDS: G = -1/2 J D J with J the centering matrix; rows of
    V sqrt(Lambda) realize D as squared euclidean distances. Eigenvalues in
    (-1e-6, 1e-9) are clamped to zero; anything more negative is an error.
    """
    n = len(tree)
    if d < n:
        raise ValueError(f"need d >= n, got d={d} < n={n}")
    if n == 1:
        return SentenceEmbedding(id=tree.id, matrix=np.zeros((1, d)))
    dist = gold_distances(tree).astype(np.float64)
    j = np.eye(n) - np.full((n, n), 1.0 / n)
    gram = -0.5 * (j @ dist @ j)
    evals, evecs = kernels.jacobi_eigh(np.ascontiguousarray(gram))
    if evals.min() < EIG_NEGATIVE_LIMIT:
        raise ValueError(
            f"Gram matrix has eigenvalue {evals.min():.3e} < {EIG_NEGATIVE_LIMIT}: "
            "input is not a tree metric"
        )
    evals = np.where(evals < EIG_CLAMP, 0.0, evals)
    x = evecs * np.sqrt(evals)[None, :]
    h = np.zeros((n, d))
    h[:, :n] = x
    return SentenceEmbedding(id=tree.id, matrix=h)


def exact_depth_embedding(tree, d):
    """h_i = sqrt(depth_i) * e_i, so squared norms equal gold depths exactly."""
    n = len(tree)
    if d < n:
        raise ValueError(f"need d >= n, got d={d} < n={n}")
    depths = gold_depths(tree).astype(np.float64)
    h = np.zeros((n, d))
    h[np.arange(n), np.arange(n)] = np.sqrt(depths)
    return SentenceEmbedding(id=tree.id, matrix=h)


def combined_embedding(tree, dim):
    """Distance-exact block next to a depth-exact block; total width 2*dim.

    One embedding serves both probe kinds: a rank-dim distance probe can
    select the first block, a depth probe the second.
    """
    hd = exact_distance_embedding(tree, dim).matrix
    hn = exact_depth_embedding(tree, dim).matrix
    return SentenceEmbedding(id=tree.id, matrix=np.hstack([hd, hn]))


def _philox_key(seed):
    """Fold an int or tuple of ints into one 128-bit Philox key."""
    if isinstance(seed, (int, np.integer)):
        return int(seed) % 2**128
    key = 0
    for part in seed:
        key = (key * 1099511628211 + int(part) + 1) % 2**128
    return key


def mix(exact, noise_seed, alpha, transform=None):
    """Blend an exact embedding with unit Gaussian noise, then apply a transform.

    h' = A ((1-alpha) h + alpha g), g ~ N(0, 1) from a counter-based
    (Philox) generator keyed by noise_seed; A defaults to the identity.
    """
    if not 0.0 <= alpha <= 1.0:
        raise ValueError(f"alpha must be in [0, 1], got {alpha}")
    h = exact.matrix.astype(np.float64)
    rng = np.random.Generator(np.random.Philox(key=_philox_key(noise_seed)))
    g = rng.standard_normal(h.shape)
    out = (1.0 - alpha) * h + alpha * g
    if transform is not None:
        a = np.asarray(transform, dtype=np.float64)
        if np.linalg.cond(a) > MAX_CONDITION:
            raise ValueError("transform is singular to tolerance (cond > 1e6)")
        out = out @ a.T
    return SentenceEmbedding(id=exact.id, matrix=out)


def random_transform(d, rng, cond=4.0):
    """Random d x d transform with singular values spread up to the given cond."""
    q1, _ = np.linalg.qr(rng.standard_normal((d, d)))
    q2, _ = np.linalg.qr(rng.standard_normal((d, d)))
    s = rng.uniform(1.0, cond, size=d)
    s[0] = 1.0
    s[-1] = cond
    return q1 @ np.diag(s) @ q2


def trees_to_conllu(trees):
    lines = []
    for tree in trees:
        lines.append(f"# sent_id = {tree.id}")
        for t in tree.tokens:
            deprel = "root" if t.head == 0 else "dep"
            lines.append(
                f"{t.index}\t{t.form}\t_\t{t.upos}\t_\t_\t{t.head}\t{deprel}\t_\t_"
            )
        lines.append("")
    return "\n".join(lines) + "\n"


def generate_series(
    n_sentences,
    checkpoints,
    seed,
    out_dir,
    n_seeds=1,
    dim=32,
    min_len=5,
    max_len=20,
    task="synthetic",
    layer=7,
):
    """Write a synthetic checkpoint series: treebank splits, EMB1 files, manifest.

    checkpoints is the list of noise levels alpha, one per checkpoint index;
    small alpha = structure mostly intact. Returns the manifest entries.
    """
    for alpha in checkpoints:
        if not 0.0 <= alpha <= 1.0:
            raise ValueError(f"alpha must be in [0, 1], got {alpha}")
    if max_len > dim:
        raise ValueError(f"dim ({dim}) must be >= max sentence length ({max_len})")
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    rng = np.random.default_rng(seed)

    trees = []
    for i in range(n_sentences):
        n = int(rng.integers(min_len, max_len + 1))
        tree_seed = int(rng.integers(0, 2**31))
        trees.append(random_tree(n, tree_seed, sentence_id=f"synth-{i:05d}"))

    (out_dir / "trees.conllu").write_text(trees_to_conllu(trees), encoding="utf-8")
    splits = {"train": [], "dev": [], "test": []}
    for i, tree in enumerate(trees):
        r = i % 10
        split = "train" if r < 7 else ("dev" if r < 8 else "test")
        splits[split].append(tree)
    for name, members in splits.items():
        (out_dir / f"{name}.conllu").write_text(
            trees_to_conllu(members), encoding="utf-8"
        )

    exact = [combined_embedding(tree, dim) for tree in trees]
    entries = []
    for s in range(n_seeds):
        transform = random_transform(2 * dim, np.random.default_rng(seed * 7919 + s))
        for c, alpha in enumerate(checkpoints):
            mixed = [
                mix(
                    emb,
                    noise_seed=(seed, s, c, i),
                    alpha=alpha,
                    transform=transform,
                )
                for i, emb in enumerate(exact)
            ]
            fname = f"emb_seed{s}_ckpt{c:03d}.emb1"
            write_embeddings_file(mixed, out_dir / fname)
            entries.append(
                ManifestEntry(
                    task=task,
                    seed=s,
                    checkpoint_index=c,
                    epoch_fraction=c / len(checkpoints),
                    layer=layer,
                    path=fname,
                )
            )
    save_manifest(entries, out_dir / "manifest.json")
    return entries
