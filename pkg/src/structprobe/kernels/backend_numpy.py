"""Pure-numpy implementations of the hot numeric kernels.

Reference path for the numba backend; selected via STRUCTPROBE_BACKEND=numpy.
All kernels take and return float64 arrays.
"""

import numpy as np


def pairwise_sq_dists(x):
    """Squared euclidean distances between the rows of x, as an n x n matrix."""
    sq = np.einsum("ij,ij->i", x, x)
    d = sq[:, None] + sq[None, :] - 2.0 * (x @ x.T)
    np.maximum(d, 0.0, out=d)
    np.fill_diagonal(d, 0.0)
    return d


def sq_norms(x):
    """Squared euclidean norms of the rows of x."""
    return np.einsum("ij,ij->i", x, x)


def distance_loss_grad(b, h, gold):
    """L1 distance loss and its gradient wrt the probe matrix b.

    loss = (1/n^2) sum_{i != j} |gold_ij - pred_ij| with pred_ij = ||b(h_i-h_j)||^2.
    Returns (loss, grad) with grad of shape (k, d). sign(0) is taken as 0.
    """
    n = h.shape[0]
    bh = h @ b.T
    pred = pairwise_sq_dists(bh)
    resid = gold - pred
    np.fill_diagonal(resid, 0.0)
    loss = np.abs(resid).sum() / (n * n)

    # grad = (2/n^2) * b * sum_{i,j} s_ij (h_i-h_j)(h_i-h_j)^T with s = -sign(resid).
    # The quadratic form collapses to 2 * h^T (diag(rowsum s) - s) h.
    s = -np.sign(resid)
    r = s.sum(axis=1)
    m = (h * r[:, None]).T @ h - h.T @ s @ h
    grad = (4.0 / (n * n)) * (b @ m)
    return loss, grad


def depth_loss_grad(b, h, gold):
    """L1 depth loss and gradient: loss = (1/n) sum_i |gold_i - ||b h_i||^2|."""
    n = h.shape[0]
    bh = h @ b.T
    pred = sq_norms(bh)
    resid = gold - pred
    loss = np.abs(resid).sum() / n
    s = -np.sign(resid)
    grad = (2.0 / n) * (b @ ((h * s[:, None]).T @ h))
    return loss, grad


def prim_mst(w):
    """Minimum spanning tree of the dense symmetric weight matrix w by Prim.

    Starts from node 0. Ties broken toward the lexicographically smallest
    unordered (i, j) pair. Returns an (n-1, 2) int64 array of edges with
    edge[0] < edge[1], sorted.
    """
    n = w.shape[0]
    if n <= 1:
        return np.empty((0, 2), dtype=np.int64)
    in_tree = np.zeros(n, dtype=bool)
    in_tree[0] = True
    key = w[0].copy()
    parent = np.zeros(n, dtype=np.int64)
    edges = np.empty((n - 1, 2), dtype=np.int64)
    for e in range(n - 1):
        best = -1
        best_key = np.inf
        best_a = best_b = n
        for j in range(n):
            if in_tree[j]:
                continue
            a, b = (parent[j], j) if parent[j] < j else (j, parent[j])
            if key[j] < best_key or (
                key[j] == best_key and (a < best_a or (a == best_a and b < best_b))
            ):
                best, best_key, best_a, best_b = j, key[j], a, b
        edges[e, 0] = best_a
        edges[e, 1] = best_b
        in_tree[best] = True
        for j in range(n):
            if in_tree[j]:
                continue
            wj = w[best, j]
            if wj < key[j]:
                key[j] = wj
                parent[j] = best
            elif wj == key[j]:
                # keep the lexicographically smaller candidate edge
                oa, ob = (parent[j], j) if parent[j] < j else (j, parent[j])
                na, nb = (best, j) if best < j else (j, best)
                if (na, nb) < (oa, ob):
                    parent[j] = best
    order = np.lexsort((edges[:, 1], edges[:, 0]))
    return edges[order]


def jacobi_eigh(a, tol=1e-12, max_sweeps=100):
    """Symmetric eigendecomposition by cyclic Jacobi rotations.

    Sweeps until every off-diagonal entry is below tol in absolute value.
    Returns (eigenvalues, eigenvectors) with eigenvectors in columns,
    unsorted. Raises RuntimeError if max_sweeps is exhausted.
    """
    a = a.copy()
    n = a.shape[0]
    v = np.eye(n)
    if n == 1:
        return np.diag(a).copy(), v
    for _ in range(max_sweeps):
        off = np.abs(a - np.diag(np.diag(a))).max()
        if off < tol:
            return np.diag(a).copy(), v
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if abs(apq) < tol:
                    continue
                diff = a[q, q] - a[p, p]
                if abs(apq) < 1e-40 * abs(diff):
                    t = apq / diff
                else:
                    theta = diff / (2.0 * apq)
                    t = 1.0 / (abs(theta) + np.sqrt(theta * theta + 1.0))
                    if theta < 0.0:
                        t = -t
                c = 1.0 / np.sqrt(t * t + 1.0)
                s = t * c
                rp = a[p, :].copy()
                rq = a[q, :].copy()
                a[p, :] = c * rp - s * rq
                a[q, :] = s * rp + c * rq
                cp = a[:, p].copy()
                cq = a[:, q].copy()
                a[:, p] = c * cp - s * cq
                a[:, q] = s * cp + c * cq
                a[p, q] = 0.0
                a[q, p] = 0.0
                vp = v[:, p].copy()
                vq = v[:, q].copy()
                v[:, p] = c * vp - s * vq
                v[:, q] = s * vp + c * vq
    raise RuntimeError("jacobi_eigh: did not converge within max_sweeps")
