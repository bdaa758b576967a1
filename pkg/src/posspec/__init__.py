"""Positive spectral measures and positive representations on Banach lattices.

Everything is finite: lattices are R^n with the coordinatewise order and
measurable spaces are finite sets of atoms.
"""

from .lattice import LatticeContext, LatticeVector, NormKind
from .operators import RegularOperator
from .measurable import AtomSpace, BorelFunction, MeasurableSet, SignedMeasure
from .spectral import PositiveSpectralMeasure, validate
from .representation import GeneratedRepresentation, generate
from .lch import C0Function, C0Representation, DiscreteLCH
from .tolerance import DEFAULT_TOLERANCE, use_tolerance

__version__ = "0.1.0"

__all__ = [
    "AtomSpace", "BorelFunction", "C0Function", "C0Representation", "DEFAULT_TOLERANCE",
    "DiscreteLCH", "GeneratedRepresentation", "LatticeContext", "LatticeVector",
    "MeasurableSet", "NormKind", "PositiveSpectralMeasure", "RegularOperator",
    "SignedMeasure", "generate", "use_tolerance", "validate",
]
