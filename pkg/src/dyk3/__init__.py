"""Arithmetic of the Drell-Yan K3 surface.

Exact point counting over finite fields, Weil-polynomial Picard bounds,
integer lattice algebra for the Picard group, combinatorial Kodaira fibre
search, Tate's algorithm and Mordell-Weil heights on elliptic surfaces,
a supersingular prime sieve, and Shioda-Inose / twist cross-checks.
"""

__version__ = "0.1.0"
