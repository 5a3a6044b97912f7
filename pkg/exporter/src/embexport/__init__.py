"""embexport: dump per-token transformer hidden states into EMB1 files."""

from .export import ExportError, ExportResult, export

__all__ = ["ExportError", "ExportResult", "export"]
__version__ = "0.1.0"
