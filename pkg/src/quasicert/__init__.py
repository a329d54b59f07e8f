"""Exact homomorphism densities, discrepancy search, step kernels and weak
regularity tools for testing graph quasirandomness."""

__version__ = "0.1.0"

from .errors import CapacityError, DomainError, InvariantBreach, ParseError
from .graph import SimpleGraph, VertexSet
from .kernels import StepKernel
from .patterns import Pattern, builtin_pattern, expand_triangle, fast_density, hom_count, hom_density

__all__ = [
    "__version__",
    "CapacityError",
    "DomainError",
    "InvariantBreach",
    "ParseError",
    "Pattern",
    "SimpleGraph",
    "StepKernel",
    "VertexSet",
    "builtin_pattern",
    "expand_triangle",
    "fast_density",
    "hom_count",
    "hom_density",
]
