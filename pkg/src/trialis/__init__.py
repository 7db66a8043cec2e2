"""Exact-arithmetic toolkit for the exceptional Lie algebras.

Builds the composition algebras by doubling, their triality algebras,
the 4x4 square of Lie algebras g(A, B) with structure constants over Q,
and cross-checks everything against root-system combinatorics and the
closed-form dimension formulas of the exceptional series.
"""

__version__ = "0.1.0"
