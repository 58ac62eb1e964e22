"""Decorated Temperley-Lieb / Brauer diagrams with a dense-matrix backend."""

__version__ = "0.1.0"
