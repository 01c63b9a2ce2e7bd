"""Exact tools for bounded generation of SL_n(Z) and its Kazhdan-constant bounds."""

__version__ = "0.1.0"
