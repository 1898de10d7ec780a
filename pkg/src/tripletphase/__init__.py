"""Exact algebra of the triplet phase invariant for equal-atom structures."""

from .errors import (
    BudgetExceeded,
    DenominatorVanishes,
    FileFormatError,
    InputError,
    MissingObservable,
    SingularR,
    TripletPhaseError,
)
from .laurent import LaurentPolynomial, VariableShape
from .observables import E2_value, Expr, ObservableIndex
from .reduction import TripletFormula, cos_triplet_phase, e2_from_values, emit_formula
from .sagbi import sagbi_basis, subduct
from .symfun import SymPoly

__version__ = "0.1.0"

__all__ = [
    "BudgetExceeded",
    "DenominatorVanishes",
    "E2_value",
    "Expr",
    "FileFormatError",
    "InputError",
    "LaurentPolynomial",
    "MissingObservable",
    "ObservableIndex",
    "SingularR",
    "SymPoly",
    "TripletFormula",
    "TripletPhaseError",
    "VariableShape",
    "cos_triplet_phase",
    "e2_from_values",
    "emit_formula",
    "sagbi_basis",
    "subduct",
]
