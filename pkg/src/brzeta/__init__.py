"""Exact truncated zeta functions of modules over semilocal orders.

Submodule-counting generating functions are represented as truncated
multivariate power series with rational coefficients, one variable per
simple module class.  Closed-form engines (product formulas, recursive
assembly over chain data, two-variable hereditary counts) are verified
against a brute-force submodule enumerator over explicit matrix models.
"""

from .errors import (
    AlphabetMismatchError,
    BrzetaError,
    CompletenessWarning,
    FormulaViolationError,
    NonUnitError,
    PseudoConvergenceError,
    ResourceBudgetError,
    SchemaError,
    TruncationBoundError,
)
from .series import Alphabet, AlphabetEntry, TruncatedSeries, product_eval, slice_coefficient

__all__ = [
    "Alphabet",
    "AlphabetEntry",
    "TruncatedSeries",
    "product_eval",
    "slice_coefficient",
    "BrzetaError",
    "SchemaError",
    "AlphabetMismatchError",
    "TruncationBoundError",
    "NonUnitError",
    "PseudoConvergenceError",
    "FormulaViolationError",
    "ResourceBudgetError",
    "CompletenessWarning",
]

__version__ = "0.1.0"
