"""Discrete decoding of probe predictions: spanning trees and roots."""

import numpy as np

from . import kernels

SYMMETRY_TOL = 1e-9


def mst(pred):
    """Minimum spanning tree of the complete graph weighted by pred.

    pred must be an n x n symmetric (within 1e-9) matrix of finite weights.
    Prim's algorithm from node 1; ties broken toward the lexicographically
    smaller unordered pair. Returns a set of 1-based (i, j) pairs with i < j.
    """
    w = np.asarray(pred, dtype=np.float64)
    if w.ndim != 2 or w.shape[0] != w.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {w.shape}")
    if not np.isfinite(w).all():
        raise ValueError("non-finite edge weight")
    if w.shape[0] > 1 and np.abs(w - w.T).max() > SYMMETRY_TOL:
        raise ValueError("weight matrix asymmetric beyond tolerance")
    edges = kernels.prim_mst(np.ascontiguousarray((w + w.T) / 2.0))
    return {(int(a) + 1, int(b) + 1) for a, b in edges}


def predicted_root(pred_depths):
    """1-based index of the minimum predicted depth; ties go to the smallest index."""
    v = np.asarray(pred_depths, dtype=np.float64)
    if v.size < 1:
        raise ValueError("empty depth vector")
    if not np.isfinite(v).all():
        raise ValueError("non-finite depth entry")
    return int(np.argmin(v)) + 1
