"""Exact computations with little cubes, partial power systems, Moore
algebras and bar constructions over finite chain complexes."""

from .algebra import AlgebraPresentation, PresentationError
from .chain import ChainComplex, ChainMap, HomologyTable
from .kernels import BACKEND
from .linalg import Coefficients

__version__ = "0.1.0"

__all__ = [
    "AlgebraPresentation",
    "BACKEND",
    "ChainComplex",
    "ChainMap",
    "Coefficients",
    "HomologyTable",
    "PresentationError",
    "__version__",
]
