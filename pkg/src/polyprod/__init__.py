"""Exact prime-exponent ledgers of N_x = F(1) F(2) ... F(x) and experiments around them."""

from .errors import LimitError, PolyprodError, ValidationError
from .ledger import FactorLedger, build_ledger
from .polycore import FactoredPolynomial, IntPolynomial, parse_factored, parse_poly

__version__ = "0.1.0"

__all__ = [
    "FactorLedger",
    "FactoredPolynomial",
    "IntPolynomial",
    "LimitError",
    "PolyprodError",
    "ValidationError",
    "build_ledger",
    "parse_factored",
    "parse_poly",
]
