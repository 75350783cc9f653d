"""nilcoh: exact invariant complex geometry on nilmanifolds and solvmanifolds.

Structure equations go in (a small text format or the built-in catalog);
out come de Rham / Dolbeault / Bott-Chern / Aeppli cohomology, the Frolicher
spectral sequence, complex symplectic structures and their deformations —
all over exact Gaussian rationals, no floating point anywhere.
"""

__version__ = "0.1.0"
