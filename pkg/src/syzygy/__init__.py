"""Exact linear algebra for syzygies of canonical curves.

Modules: ``exactla`` (rational ranks, kernels, solves), ``sl2poly`` (monomial
bases for symmetric and exterior powers), ``hypmodel`` (the hyperelliptic
model of wedge^r E and its Petri map), ``curvering`` (pluricanonical sections
of y^2 = f(x)), ``koszul`` (Koszul cohomology and Betti tables).
"""
from .exactla import Matrix, ModularConfig, Mode, kernel_basis, rank, solve
from .report import ParameterError, Report, VerificationError

__all__ = [
    "Matrix",
    "ModularConfig",
    "Mode",
    "kernel_basis",
    "rank",
    "solve",
    "ParameterError",
    "Report",
    "VerificationError",
]
__version__ = "0.1.0"
