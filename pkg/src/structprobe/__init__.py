"""Structural probes over token embeddings: training, decoding, metrics, sweeps."""

from .kernels import active_backend

__all__ = ["active_backend"]
__version__ = "0.1.0"
