"""Hauptmoduln of levels 1, 2, 3, 5, traces of their singular moduli, and the
arithmetic coefficient formulas linking the two."""

__version__ = "0.1.0"
