"""Elliptic Z_N R-matrices and the structure functions of q-deformed W_N algebras."""
__version__ = "0.1.0"
