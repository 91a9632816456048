"""Semisymmetric bipartite graphs: permutation groups, bi-coset graphs,
the sigma/gamma families and an automorphism search."""

__version__ = "0.1.0"
