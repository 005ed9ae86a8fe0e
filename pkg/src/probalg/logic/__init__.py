"""Continuous-logic formulas over finite probability algebras."""
from .ast import (
    AbsDiff,
    Compl,
    Const,
    Dist,
    Formula,
    Half,
    Inf,
    Join,
    Max,
    Meet,
    Min,
    Minus,
    Mu,
    One,
    Plus,
    Sup,
    Term,
    Var,
    Zero,
    free_vars,
    is_quantifier_free,
)
from .builders import chi, phi1, phi_n, psi, theta
from .evaluate import DEFAULT_CAP, Evaluator, evaluate, evaluate_with_witness
from .normal_form import is_normal, normal_form
from .parser import parse, parse_term, pretty, pretty_term

__all__ = [
    "AbsDiff", "Compl", "Const", "Dist", "Formula", "Half", "Inf", "Join", "Max", "Meet", "Min",
    "Minus", "Mu", "One", "Plus", "Sup", "Term", "Var", "Zero", "free_vars", "is_quantifier_free",
    "chi", "phi1", "phi_n", "psi", "theta", "DEFAULT_CAP", "Evaluator", "evaluate",
    "evaluate_with_witness", "is_normal", "normal_form", "parse", "parse_term", "pretty", "pretty_term",
]
