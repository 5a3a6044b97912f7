import numpy as np
import pytest

from structprobe import kernels
from structprobe.decode import predicted_root
from structprobe.embstore import load_manifest, read_embeddings_file
from structprobe.synth import (
    combined_embedding,
    exact_depth_embedding,
    exact_distance_embedding,
    generate_series,
    mix,
    random_tree,
    random_transform,
    trees_to_conllu,
)
from structprobe.treebank import (
    gold_depths,
    gold_distances,
    parse_conllu,
    validate_tree,
)

from conftest import make_corpus


def pairwise(h):
    return ((h[:, None, :] - h[None, :, :]) ** 2).sum(-1)


def test_random_tree_single_node():
    t = random_tree(1, 0)
    assert len(t) == 1 and t.tokens[0].head == 0


def test_random_tree_rejects_zero():
    with pytest.raises(ValueError):
        random_tree(0, 1)


def test_random_tree_uniform_n3():
    counts = {}
    for seed in range(10000):
        t = random_tree(3, seed)
        key = frozenset(
            (min(tok.index, tok.head), max(tok.index, tok.head))
            for tok in t.tokens
            if tok.head != 0
        )
        counts[key] = counts.get(key, 0) + 1
    assert len(counts) == 3
    for c in counts.values():
        assert abs(c / 10000 - 1 / 3) < 0.02


def test_random_tree_validates():
    for seed in range(50):
        validate_tree(random_tree(int(np.random.default_rng(seed).integers(1, 20)), seed))


def test_exact_distance_embedding_path():
    t = parse_conllu("1\ta\t_\tX\t_\t_\t2\t_\t_\t_\n2\tb\t_\tX\t_\t_\t3\t_\t_\t_\n3\tc\t_\tX\t_\t_\t0\t_\t_\t_\n")[0]
    h = exact_distance_embedding(t, 3).matrix
    assert np.abs(pairwise(h) - [[0, 1, 2], [1, 0, 1], [2, 1, 0]]).max() < 1e-9


def test_exact_distance_embedding_single():
    t = random_tree(1, 3)
    assert np.all(exact_distance_embedding(t, 4).matrix == 0.0)


def test_exact_distance_embedding_random_trees():
    for tree in make_corpus(200, 2, 30, seed=41):
        h = exact_distance_embedding(tree, 30).matrix
        d = gold_distances(tree)
        assert np.abs(pairwise(h) - d).max() < 1e-8


def test_exact_distance_embedding_requires_width():
    with pytest.raises(ValueError, match="d >= n"):
        exact_distance_embedding(random_tree(5, 0), 3)


def test_non_tree_metric_gram_is_indefinite():
    # squared-distance matrix violating embeddability: gaps 1,1 but span 3
    d = np.array(
        [
            [0.0, 1.0, 9.0],
            [1.0, 0.0, 1.0],
            [9.0, 1.0, 0.0],
        ]
    )
    n = 3
    j = np.eye(n) - np.full((n, n), 1.0 / n)
    gram = -0.5 * (j @ d @ j)
    evals, _ = kernels.jacobi_eigh(np.ascontiguousarray(gram))
    assert evals.min() < -1e-6  # the guard in exact_distance_embedding would fire


def test_jacobi_reconstruction_invariants(rng):
    for _ in range(20):
        n = int(rng.integers(2, 30))
        a = rng.standard_normal((n, n))
        a = (a + a.T) / 2.0
        evals, evecs = kernels.jacobi_eigh(np.ascontiguousarray(a))
        recon = evecs @ np.diag(evals) @ evecs.T
        scale = max(np.linalg.norm(a), 1.0)
        assert np.linalg.norm(recon - a) / scale < 1e-10
        assert np.abs(evecs @ evecs.T - np.eye(n)).max() < 1e-10


def test_jacobi_matches_numpy_eigh(rng):
    for _ in range(10):
        n = int(rng.integers(2, 20))
        a = rng.standard_normal((n, n))
        a = (a + a.T) / 2.0
        evals, _ = kernels.jacobi_eigh(np.ascontiguousarray(a))
        assert np.allclose(np.sort(evals), np.linalg.eigvalsh(a), atol=1e-9)


def test_exact_depth_embedding():
    t = parse_conllu("1\ta\t_\tX\t_\t_\t2\t_\t_\t_\n2\tb\t_\tX\t_\t_\t3\t_\t_\t_\n3\tc\t_\tX\t_\t_\t0\t_\t_\t_\n")[0]
    h = exact_depth_embedding(t, 4).matrix
    assert np.allclose((h**2).sum(1), [2, 1, 0])
    assert np.all(h[2] == 0.0)


def test_exact_depth_embedding_root_recovery():
    for tree in make_corpus(100, 1, 16, seed=43):
        h = exact_depth_embedding(tree, 16).matrix
        assert predicted_root((h**2).sum(1)) == tree.root


def test_mix_alpha_zero_identity():
    t = random_tree(6, 2)
    e = exact_distance_embedding(t, 8)
    out = mix(e, noise_seed=5, alpha=0.0)
    assert np.array_equal(out.matrix, e.matrix)


def test_mix_determinism():
    t = random_tree(6, 2)
    e = exact_distance_embedding(t, 8)
    a = mix(e, noise_seed=(1, 2), alpha=0.5)
    b = mix(e, noise_seed=(1, 2), alpha=0.5)
    assert np.array_equal(a.matrix, b.matrix)


def test_mix_alpha_validation():
    t = random_tree(3, 2)
    e = exact_distance_embedding(t, 4)
    with pytest.raises(ValueError):
        mix(e, 1, alpha=1.5)


def test_mix_singular_transform_rejected():
    t = random_tree(3, 2)
    e = exact_distance_embedding(t, 4)
    singular = np.zeros((4, 4))
    with pytest.raises(ValueError, match="singular"):
        mix(e, 1, alpha=0.0, transform=singular)


def test_random_transform_condition():
    a = random_transform(10, np.random.default_rng(0), cond=10.0)
    assert np.linalg.cond(a) <= 10.0 + 1e-6


def test_trees_to_conllu_roundtrip():
    trees = make_corpus(10, 2, 9, seed=44)
    back = parse_conllu(trees_to_conllu(trees))
    assert [t.heads for t in back] == [t.heads for t in trees]
    assert [t.id for t in back] == [t.id for t in trees]


def test_generate_series(tmp_path):
    entries = generate_series(
        n_sentences=12,
        checkpoints=[0.9, 0.5, 0.1],
        seed=3,
        out_dir=tmp_path,
        n_seeds=2,
        dim=12,
        min_len=5,
        max_len=10,
    )
    assert len(entries) == 6
    idx = [e.checkpoint_index for e in entries if e.seed == 0]
    assert idx == sorted(idx) and len(set(idx)) == 3
    manifest = load_manifest(tmp_path / "manifest.json")
    assert manifest == entries
    trees = parse_conllu((tmp_path / "trees.conllu").read_text())
    assert len(trees) == 12
    embs = read_embeddings_file(tmp_path / entries[0].path)
    assert len(embs) == 12
    assert embs[0].d == 24


def test_generate_series_deterministic(tmp_path):
    kwargs = dict(
        n_sentences=6, checkpoints=[0.5, 0.2], seed=9, dim=10, min_len=5, max_len=8
    )
    generate_series(out_dir=tmp_path / "a", **kwargs)
    generate_series(out_dir=tmp_path / "b", **kwargs)
    for name in ("trees.conllu", "manifest.json", "emb_seed0_ckpt000.emb1"):
        assert (tmp_path / "a" / name).read_bytes() == (tmp_path / "b" / name).read_bytes()
