"""Face-only formulas for Eilenberg-Zilber compositions and Steenrod operations."""

__version__ = "0.1.0"

from .chains import Cochain, Contraction, FormalSum, ProductSimplex, TensorTerm
from .homology import compute_contraction, operation_matrix
from .simplicial import OperatorWord, Simplex, SimplicialComplex, apply_word, bundled, load_complex, normalize_word
from .simplifier import IntervalFormula, IntervalTerm, SignExpression, evaluate_formula, generate_dnr
from .steenrod import OperationRequest, cup_i, steenrod_power, steenrod_square

__all__ = [
    "Cochain", "Contraction", "FormalSum", "ProductSimplex", "TensorTerm",
    "compute_contraction", "operation_matrix",
    "OperatorWord", "Simplex", "SimplicialComplex", "apply_word", "bundled", "load_complex", "normalize_word",
    "IntervalFormula", "IntervalTerm", "SignExpression", "evaluate_formula", "generate_dnr",
    "OperationRequest", "cup_i", "steenrod_power", "steenrod_square",
]
