"""Sumsets, covering, rectification and Freiman structure in Z_p."""

__version__ = "0.1.0"

SCHEMA_VERSION = 1

from .intsets import ApDescriptor, IntSet
from .residues import ResidueSet

__all__ = ["ApDescriptor", "IntSet", "ResidueSet", "SCHEMA_VERSION", "__version__"]
