"""Exact solving of least/greatest fixpoint equation systems over the
extended reals, with a quantitative modal-formula frontend."""

from .extreal import INF, NEG_INF, ExtReal, finite, format_value, parse_value
from .expr import (
    Add,
    Cond,
    CondA,
    Const,
    EqInf,
    EqNegInf,
    Expr,
    Max,
    Min,
    Neg,
    Scale,
    Valuation,
    Var,
    eliminate_negation,
    evaluate,
    occ,
    substitute,
)
from .nf import (
    CNF,
    DNF,
    Atom,
    CondNode,
    Leaf,
    Normalizer,
    SimpleNF,
    nf_to_expr,
    normalize_guard,
    simplify,
    simplify_expr,
    to_nf,
    to_simple_nf,
)
from .solver import ClauseDec, ClauseDecomposition, FixOp, XAtom, expose, sol_mu_simple, sol_nu_simple, solve_single
from .res import RES, Equation, TraceStep, eliminate, gauss_solve, substitute_later_into_earlier, trace
from .oracle import crosscheck_single, residual_check, univariate_fixed_point
from .bes import BES, BesEquation, embed_const, embed_literal, solve_bes_direct
from .modal import PLTS, Diagnostic, Formula, Transition, check_formula, evaluate_formula, translate
from .syntax import (
    format_bes,
    format_equation,
    format_expr,
    format_formula,
    format_formula_file,
    format_plts,
    format_res,
    parse_bes,
    parse_expr,
    parse_formula,
    parse_plts,
    parse_res,
)

__all__ = [name for name in dir() if not name.startswith("_")]
