"""Kernel backend selection.

Hot numeric loops (pairwise distances, probe gradients, Prim MST, Jacobi
eigensolver) have two implementations: a numba-jitted one and a pure-numpy
fallback. Selection order:

  STRUCTPROBE_BACKEND=numpy  -> force the numpy fallback
  STRUCTPROBE_BACKEND=numba  -> require numba (ImportError if missing)
  unset                      -> numba when importable, else numpy
"""

import os

from . import backend_numpy

_requested = os.environ.get("STRUCTPROBE_BACKEND", "").strip().lower()

if _requested == "numpy":
    _impl = backend_numpy
    BACKEND = "numpy"
elif _requested == "numba":
    from . import backend_numba as _impl

    BACKEND = "numba"
elif _requested == "":
    try:
        from . import backend_numba as _impl

        BACKEND = "numba"
    except ImportError:
        _impl = backend_numpy
        BACKEND = "numpy"
else:
    raise ValueError(
        f"STRUCTPROBE_BACKEND must be 'numba' or 'numpy', got {_requested!r}"
    )

pairwise_sq_dists = _impl.pairwise_sq_dists
sq_norms = _impl.sq_norms
distance_loss_grad = _impl.distance_loss_grad
depth_loss_grad = _impl.depth_loss_grad
prim_mst = _impl.prim_mst
jacobi_eigh = _impl.jacobi_eigh


def active_backend():
    return BACKEND
