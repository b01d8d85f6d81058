"""Numeric evaluation of expression DAGs over numpy arrays.

Real-valued inputs stay in float64 and get real-analysis domain checks (log of
a nonpositive number, fractional power of a negative number, ...). Complex
inputs use principal branches and only fail at poles and branch points.
"""
from __future__ import annotations

import numpy as np
from scipy import special as _sp

from .nodes import Expr, as_expr, walk
from .special import erf_complex


class DomainError(ArithmeticError):
    """Evaluation left the domain of some subexpression."""

    def __init__(self, message, subtree: Expr | None = None, index=None, point=None):
        self.message = message
        self.subtree = subtree
        self.index = index
        self.point = point
        text = message
        if subtree is not None:
            from .printer import to_prefix

            pre = to_prefix(subtree)
            if len(pre) > 160:
                pre = pre[:157] + "..."
            text += f" in {pre}"
        if point is not None:
            text += f" at {point}"
        super().__init__(text)


class UnboundVariableError(KeyError):
    pass


def _is_complex(a) -> bool:
    return np.iscomplexobj(a)


def _first_bad(mask):
    mask = np.asarray(mask)
    if mask.ndim == 0:
        return None
    return int(np.flatnonzero(mask)[0])


def _check(bad, message):
    bad = np.asarray(bad)
    if bad.any():
        raise DomainError(message, index=_first_bad(bad))


def _is_integer_exponent(b) -> bool:
    if _is_complex(b):
        b = np.asarray(b)
        if np.any(b.imag != 0):
            return False
        b = b.real
    b = np.asarray(b)
    return bool(np.all(np.floor(b) == b))


def _pow(a, b):
    a_c, b_c = _is_complex(a), _is_complex(b)
    if not a_c and not b_c:
        if _is_integer_exponent(b):
            bb = np.asarray(b)
            _check((np.asarray(a) == 0) & (bb < 0), "pole of integer power")
            if bb.ndim == 0:
                e = int(bb)
                return np.power(np.asarray(a, float), e) if e >= 0 else 1.0 / np.power(np.asarray(a, float), -e)
            return np.power(np.asarray(a, float), bb)
        _check(np.asarray(a) < 0, "real power of a negative base")
        _check((np.asarray(a) == 0) & (np.asarray(b) <= 0), "pole of real power")
        return np.power(np.asarray(a, float), b)
    a = np.asarray(a, complex)
    zero = a == 0
    if zero.any():
        if _is_integer_exponent(b):
            _check(zero & (np.real(b) < 0), "pole of integer power")
        else:
            _check(zero, "branch point of complex power")
        out = np.power(np.where(zero, 1.0, a), b)
        return np.where(zero, 0.0, out)
    return np.power(a, b)


def _ln(a):
    if _is_complex(a):
        _check(np.asarray(a) == 0, "logarithm at zero")
        return np.log(a)
    _check(np.asarray(a) <= 0, "logarithm of a nonpositive real")
    return np.log(a)


def _sqrt(a):
    if _is_complex(a):
        return np.sqrt(a)
    _check(np.asarray(a) < 0, "square root of a negative real")
    return np.sqrt(a)


def _arctan2(y, x):
    for v in (y, x):
        if _is_complex(v):
            _check(np.imag(v) != 0, "arctan2 of a complex value")
    y, x = np.real(y), np.real(x)
    _check((y == 0) & (x == 0), "arctan2 branch point at the origin")
    return np.arctan2(y, x)


def _erf(a):
    if _is_complex(a):
        return erf_complex(a)
    return _sp.erf(a)


FUNC_IMPL = {
    "exp": np.exp,
    "ln": _ln,
    "sin": np.sin,
    "cos": np.cos,
    "sinh": np.sinh,
    "cosh": np.cosh,
    "tanh": np.tanh,
    "arctan2": _arctan2,
    "erf": _erf,
    "abs": np.abs,
    "re": np.real,
    "im": np.imag,
    "conj": np.conj,
    "sqrt": _sqrt,
}


def apply_function(name, args):
    with np.errstate(all="ignore"):
        out = FUNC_IMPL[name](*args)
        if not np.all(np.isfinite(out)):
            raise DomainError(f"non-finite value of {name}")
        return out


def _div(a, b):
    _check(np.asarray(b) == 0, "pole (division by zero)")
    return a / b


class Tape:
    """A compiled evaluation order for one or more expressions sharing subtrees."""

    def __init__(self, exprs):
        exprs = [as_expr(e) for e in exprs]
        self.exprs = exprs
        order = []
        index: dict[int, int] = {}
        for e in exprs:
            for node in walk(e):
                if id(node) not in index:
                    index[id(node)] = len(order)
                    order.append(node)
        self.nodes = order
        self.code = [(n.op, tuple(index[id(a)] for a in n.args)) for n in order]
        self.outputs = [index[id(e)] for e in exprs]
        self.variables = sorted({n.name for n in order if n.op == "var"})

    def run(self, env: dict):
        vals = [None] * len(self.nodes)
        with np.errstate(all="ignore"):
            for i, (node, (op, ai)) in enumerate(zip(self.nodes, self.code)):
                try:
                    if op == "const":
                        v = node.value
                    elif op == "var":
                        try:
                            v = env[node.name]
                        except KeyError:
                            raise UnboundVariableError(node.name) from None
                    elif op == "add":
                        v = vals[ai[0]]
                        for j in ai[1:]:
                            v = v + vals[j]
                    elif op == "mul":
                        v = vals[ai[0]]
                        for j in ai[1:]:
                            v = v * vals[j]
                    elif op == "neg":
                        v = -vals[ai[0]]
                    elif op == "div":
                        v = _div(vals[ai[0]], vals[ai[1]])
                    elif op == "pow":
                        v = _pow(vals[ai[0]], vals[ai[1]])
                    else:
                        v = FUNC_IMPL[node.name](*(vals[j] for j in ai))
                    if op not in ("const", "var"):
                        fin = np.isfinite(v)
                        if not np.all(fin):
                            raise DomainError("non-finite value", index=_first_bad(~fin))
                except DomainError as err:
                    if err.subtree is None:
                        raise DomainError(err.message, subtree=node, index=err.index) from None
                    raise
                vals[i] = v
        return [vals[k] for k in self.outputs]

    def __call__(self, env: dict):
        return self.run(env)


def _point_of(env, index):
    pt = {}
    for k, v in env.items():
        arr = np.asarray(v)
        if arr.ndim == 0:
            pt[k] = arr.item()
        elif index is not None and index < arr.shape[0]:
            pt[k] = arr[index].item()
    return pt


def evaluate_many(exprs, env: dict):
    """Evaluate several expressions at the same point(s); arrays broadcast."""
    tape = exprs if isinstance(exprs, Tape) else Tape(exprs)
    try:
        return tape.run(env)
    except DomainError as err:
        raise DomainError(
            err.message,
            subtree=err.subtree,
            index=err.index,
            point=_point_of(env, err.index),
        ) from None


def evaluate(e: Expr, point: dict):
    """Evaluate one expression. Scalars in give a Python scalar out."""
    (out,) = evaluate_many([e], point)
    arr = np.asarray(out)
    if arr.ndim == 0:
        return arr.item()
    return arr
