"""Exact computations for Coxeter groups, split crystallographic groups and
amalgamated products of finite permutation groups."""

__version__ = "0.1.0"
