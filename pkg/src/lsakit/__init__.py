"""lsakit: exact computations with left-symmetric algebras."""
from .lsa_core import Algebra, char_poly_lsa, classify, trace_form, validate_lsa
from .polyring import MPoly, parse_poly
from .qlinalg import QMatrix

__version__ = "0.1.0"

__all__ = [
    "Algebra",
    "MPoly",
    "QMatrix",
    "char_poly_lsa",
    "classify",
    "parse_poly",
    "trace_form",
    "validate_lsa",
]
