"""Path signatures, Lyndon log-signatures, winding moments and SLE expected signatures."""

__version__ = "0.1.0"

from .exceptions import (
    ConvergenceError,
    CSVParseError,
    DomainError,
    NotLieError,
    NumericalInstabilityError,
    PointOnCurveError,
    RangeError,
    ShapeError,
    SigwindError,
)
from .lyndon import LyndonExpansion, is_lyndon, lie_to_lyndon, lyndon_bracket, lyndon_words, standard_factorization
from .paths import PolyLine, polyline_signature, read_polyline_csv
from .tensor import TruncatedTensor, bracket, tensor_exp, tensor_log, tensor_mul, word_coefficient
from .winding import fourth_level_from_winding, moment_exact, moment_table, verify_theorem1, winding_number, winding_numbers

__all__ = [
    "ConvergenceError",
    "CSVParseError",
    "DomainError",
    "LyndonExpansion",
    "NotLieError",
    "NumericalInstabilityError",
    "PointOnCurveError",
    "PolyLine",
    "RangeError",
    "ShapeError",
    "SigwindError",
    "TruncatedTensor",
    "bracket",
    "fourth_level_from_winding",
    "is_lyndon",
    "lie_to_lyndon",
    "lyndon_bracket",
    "lyndon_words",
    "moment_exact",
    "moment_table",
    "polyline_signature",
    "read_polyline_csv",
    "standard_factorization",
    "tensor_exp",
    "tensor_log",
    "tensor_mul",
    "verify_theorem1",
    "winding_number",
    "winding_numbers",
    "word_coefficient",
]
