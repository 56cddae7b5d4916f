"""Dirichlet L-functions over F_q[x]: exact identities and moment experiments."""

from .ffq import FieldElement, FieldSpec, enumerate_elements, field_from_q, field_new
from .polyring import Poly, factor, is_irreducible, parse_poly

__all__ = [
    "FieldElement",
    "FieldSpec",
    "Poly",
    "enumerate_elements",
    "factor",
    "field_from_q",
    "field_new",
    "is_irreducible",
    "parse_poly",
]

__version__ = "0.1.0"
