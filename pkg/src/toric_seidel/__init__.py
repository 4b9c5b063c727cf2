"""Seidel elements, quantum homology and superpotentials of toric surfaces."""

from .errors import (DatabaseMiss, IntegrationError, InvalidPolytope, MultiplicityUnsupported,
                     NotNEF, PolytopeParseError, PrecisionError, ToricError, UncoveredPattern,
                     WeightDependence)
from .lattice_core import MomentPolytope, validate_delzant, vertices
from .divisor_geometry import classify, facet_class
from .novikov import NovikovSeries, QuantumClass
from .seidel_engine import seidel_element
from .catalog import CATALOG, parse_polytope, render_polytope

__version__ = "0.1.0"
