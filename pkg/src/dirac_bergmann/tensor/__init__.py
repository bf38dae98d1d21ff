"""Indexed tensor expressions: parsing, canonical form, contraction and components."""
from .components import ComponentError, canonical_component, independent_components, numeric_eval, to_poly
from .contract import ContractionResult, contract_deltas_etas, contract_epsilons
from .expr import Expr, ExprError, IndexSlot, TensorFactor, Term, canonicalize, equal, equivalent, render
from .parser import ParseError, parse_expr, parse_raw
from .symbols import SymbolSpec, SymbolTable, adjoint_symbols, palatini_symbols, param_spec

__all__ = [
    "ComponentError", "ContractionResult", "Expr", "ExprError", "IndexSlot", "ParseError",
    "SymbolSpec", "SymbolTable", "TensorFactor", "Term", "adjoint_symbols", "canonical_component",
    "canonicalize", "contract_deltas_etas", "contract_epsilons", "equal", "equivalent", "independent_components",
    "numeric_eval", "palatini_symbols", "param_spec", "parse_expr", "parse_raw", "render", "to_poly",
]
