"""Exact evaluation of SL_n Verlinde formulas by trigonometric sums, iterated residues and fusion algebras."""

__version__ = "0.1.0"
