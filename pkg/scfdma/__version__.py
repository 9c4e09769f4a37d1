"""Current version of package scfdma."""
__version__ = "0.1.0"
