"""Audio-to-features exporter writing SYL2 frame containers."""

from .export import ExportManifest, export_features

__version__ = "0.1.0"

__all__ = ["ExportManifest", "export_features"]
