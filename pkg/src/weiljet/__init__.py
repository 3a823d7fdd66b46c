"""Exact higher-order differentiation in truncated polynomial algebras.

Evaluate an expression at a point perturbed by nilpotent generators and the
coefficients of the result are its derivatives, exactly, with no rewriting
and no rounding. The package exposes the algebra (``weil``), the
expression language (``expression``), the derivative operators
(``calculus``), independent validation oracles (``oracle``), named identity
suites (``suites``), and a CLI (``cli``).
"""

from .calculus import (
    DerivTable,
    IdentityViolationError,
    InstanceRejectedError,
    RuleVerdict,
    check_rule,
    derivative,
    derivtable_to_json,
    expand_sum_of_D,
    iterated_partial,
    jet_evaluate,
    kl_decompose,
    mixed_derivative,
    nth_derivative,
    partial_derivative,
    taylor_box,
    taylor_simplex,
    taylor_squarefree,
    taylor_sum,
)
from .errors import WeiljetError
from .expression import (
    Add,
    Compose,
    Const,
    Div,
    EvaluationError,
    Expr,
    Mul,
    Neg,
    ParseError,
    Pow,
    Sub,
    Var,
    arity,
    evaluate,
    expr_from_json,
    expr_to_json,
    parse,
    pretty_print,
    substitute,
    variables,
)
from .multiindex import (
    ArityMismatchError,
    MultiIndex,
    enumerate_box,
    enumerate_simplex,
    factorial,
    leq,
    norm,
)
from .oracle import (
    NotPolynomialError,
    SparsePoly,
    finite_difference,
    oracle_mixed,
    poly_eval,
    poly_partial,
    to_poly,
)
from .suites import SuiteConfig, SuiteResult, run_suite, run_suites, suite_names
from .weil import (
    CoefficientIndexError,
    DegenerateGeneratorError,
    NonInvertibleError,
    Rational,
    Shape,
    ShapeMismatchError,
    WeilElement,
    constant,
    element_from_json,
    element_to_json,
    from_coefficients,
    generator,
    monomial,
    one,
    slice_coefficient,
    zero,
)

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
