"""Symbolic expression kernel: parse, differentiate, evaluate, simplify."""
from .calculus import NonHolomorphicError, differentiate, gradient, laplacian
from .evaluate import DomainError, Tape, UnboundVariableError, evaluate, evaluate_many
from .nodes import (
    FUNCTIONS,
    I,
    ONE,
    ZERO,
    Add,
    Call,
    Const,
    Div,
    Expr,
    Mul,
    Neg,
    Pow,
    Var,
    as_expr,
    size,
    substitute,
    walk,
)
from .parser import ParseError, UnknownIdentifierError, parse
from .printer import to_infix, to_prefix
from .registry import DEFAULT, Registry
from .sampling import Box, max_scaled_difference, numeric_equal, scaled_difference
from .simplify import add, call, div, mul, neg, power, simplify, sub


def var(*names):
    """Convenience: `x, y = var("x", "y")`."""
    out = tuple(Var(n) for n in names)
    return out[0] if len(out) == 1 else out


def fn(name, *args):
    return call(name, *args)


def sym(source, registry=None):
    """Parse and simplify in one step."""
    return simplify(parse(source, registry))
