"""Singular-resolution cube ideals, their Tor groups and the HOMFLY gradings."""
from .poly_kernel import QQ, FieldConfig, Polynomial, TruncatedSeries
from .braid_model import (BraidError, BraidWord, PartialBraidGraph, Vertex, build_decorated_diagram,
                          parse_braid_word, resolve)
from .ideal_gen import linear_ideal, nonlocal_ideal, quadratic_ideal
from .groebner import DEGREVLEX, GroebnerBasis, MonomialOrder, buchberger_reduced, gb_of

__all__ = [
    "QQ", "FieldConfig", "Polynomial", "TruncatedSeries", "BraidError", "BraidWord", "PartialBraidGraph",
    "Vertex", "build_decorated_diagram", "parse_braid_word", "resolve", "linear_ideal", "nonlocal_ideal",
    "quadratic_ideal", "DEGREVLEX", "GroebnerBasis", "MonomialOrder", "buchberger_reduced", "gb_of",
]
