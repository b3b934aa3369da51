"""Quiver homological workbench: exact computations around path
algebras, Koszul complexes, Leavitt path algebras, trivial extensions,
and graded K-theory invariants."""

__version__ = "0.1.0"
