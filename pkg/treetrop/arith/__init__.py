from .coeffs import NUMERIC, CoefficientDomain, CoeffPoly, symbolic_domain
from .matrix import PolyMatrix, det_berkowitz, det_laplace, det_permutation, determinant
from .puiseux import PuiseuxPoly, degree, poly_add, poly_mul, poly_neg, substitute_scale, valuation
from .rational import NEG_INFINITY, POS_INFINITY, Infinity, Rational, as_rational, format_rational, parse_rational

__all__ = [
    "NUMERIC",
    "CoefficientDomain",
    "CoeffPoly",
    "symbolic_domain",
    "PolyMatrix",
    "det_berkowitz",
    "det_laplace",
    "det_permutation",
    "determinant",
    "PuiseuxPoly",
    "degree",
    "poly_add",
    "poly_mul",
    "poly_neg",
    "substitute_scale",
    "valuation",
    "NEG_INFINITY",
    "POS_INFINITY",
    "Infinity",
    "Rational",
    "as_rational",
    "format_rational",
    "parse_rational",
]
