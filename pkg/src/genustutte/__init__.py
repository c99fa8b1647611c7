"""Exact genus-g Tutte and Whitney rank polynomials for matroids."""

from .kernel import HAVE_COMPILED
from .matroid import Matroid, NotAMatroid
from .poly import SparsePoly, VarLayout

__all__ = ["HAVE_COMPILED", "Matroid", "NotAMatroid", "SparsePoly", "VarLayout"]

__version__ = "0.1.0"
