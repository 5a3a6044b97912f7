"""Numba-jitted kernels. Same contracts as backend_numpy; loop formulations."""

import numpy as np
from numba import njit


@njit(cache=True)
def pairwise_sq_dists(x):
    n, k = x.shape
    d = np.zeros((n, n))
    for i in range(n):
        for j in range(i + 1, n):
            acc = 0.0
            for t in range(k):
                diff = x[i, t] - x[j, t]
                acc += diff * diff
            d[i, j] = acc
            d[j, i] = acc
    return d


@njit(cache=True)
def sq_norms(x):
    n, k = x.shape
    out = np.zeros(n)
    for i in range(n):
        acc = 0.0
        for t in range(k):
            acc += x[i, t] * x[i, t]
        out[i] = acc
    return out


@njit(cache=True)
def distance_loss_grad(b, h, gold):
    n, d = h.shape
    k = b.shape[0]
    bh = h @ b.T
    pred = pairwise_sq_dists(bh)
    loss = 0.0
    # s = -sign(gold - pred); the pair sum of s_ij (h_i-h_j)(h_i-h_j)^T
    # collapses to 2 * h^T (diag(rowsum s) - s) h.
    s = np.zeros((n, n))
    r = np.zeros(n)
    for i in range(n):
        for j in range(n):
            if i == j:
                continue
            resid = gold[i, j] - pred[i, j]
            loss += abs(resid)
            if resid > 0.0:
                s[i, j] = -1.0
            elif resid < 0.0:
                s[i, j] = 1.0
            r[i] += s[i, j]
    sh = s @ h
    m = np.zeros((d, d))
    for i in range(n):
        for a in range(d):
            ha = h[i, a]
            for c in range(d):
                m[a, c] += r[i] * ha * h[i, c] - ha * sh[i, c]
    loss /= n * n
    grad = (4.0 / (n * n)) * (b @ m)
    return loss, grad


@njit(cache=True)
def depth_loss_grad(b, h, gold):
    n, d = h.shape
    bh = h @ b.T
    pred = sq_norms(bh)
    loss = 0.0
    m = np.zeros((d, d))
    for i in range(n):
        resid = gold[i] - pred[i]
        loss += abs(resid)
        if resid > 0.0:
            s = -1.0
        elif resid < 0.0:
            s = 1.0
        else:
            continue
        for a in range(d):
            sa = s * h[i, a]
            if sa == 0.0:
                continue
            for c in range(d):
                m[a, c] += sa * h[i, c]
    loss /= n
    grad = (2.0 / n) * (b @ m)
    return loss, grad


@njit(cache=True)
def prim_mst(w):
    n = w.shape[0]
    edges = np.empty((max(n - 1, 0), 2), dtype=np.int64)
    if n <= 1:
        return edges
    in_tree = np.zeros(n, dtype=np.bool_)
    in_tree[0] = True
    key = w[0].copy()
    parent = np.zeros(n, dtype=np.int64)
    for e in range(n - 1):
        best = -1
        best_key = np.inf
        best_a = n
        best_b = n
        for j in range(n):
            if in_tree[j]:
                continue
            if parent[j] < j:
                a, b = parent[j], j
            else:
                a, b = j, parent[j]
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
                if parent[j] < j:
                    oa, ob = parent[j], j
                else:
                    oa, ob = j, parent[j]
                if best < j:
                    na, nb = best, j
                else:
                    na, nb = j, best
                if na < oa or (na == oa and nb < ob):
                    parent[j] = best
    # sort edges by (a, b) for deterministic output
    order = np.argsort(edges[:, 0] * n + edges[:, 1])
    return edges[order]


@njit(cache=True)
def jacobi_eigh(a, tol=1e-12, max_sweeps=100):
    a = a.copy()
    n = a.shape[0]
    v = np.eye(n)
    if n == 1:
        return np.diag(a).copy(), v
    for _ in range(max_sweeps):
        off = 0.0
        for i in range(n):
            for j in range(n):
                if i != j and abs(a[i, j]) > off:
                    off = abs(a[i, j])
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
                for i in range(n):
                    rp = a[p, i]
                    rq = a[q, i]
                    a[p, i] = c * rp - s * rq
                    a[q, i] = s * rp + c * rq
                for i in range(n):
                    cp = a[i, p]
                    cq = a[i, q]
                    a[i, p] = c * cp - s * cq
                    a[i, q] = s * cp + c * cq
                a[p, q] = 0.0
                a[q, p] = 0.0
                for i in range(n):
                    vp = v[i, p]
                    vq = v[i, q]
                    v[i, p] = c * vp - s * vq
                    v[i, q] = s * vp + c * vq
    raise RuntimeError("jacobi_eigh: did not converge within max_sweeps")
