"""Exact partial derivatives.

With respect to a real variable every supported function differentiates,
including the non-holomorphic ones (|w|, Re w, Im w, conj w), whose
intermediate values may be complex. With respect to a complex variable the
result is the complex derivative d/dz, and non-holomorphic functions are
rejected.
"""
from __future__ import annotations

import math
from weakref import WeakKeyDictionary

from .nodes import Const, Expr, NON_HOLOMORPHIC, ONE, ZERO, as_expr, walk
from .registry import DEFAULT, Registry
from .simplify import add, call, div, mul, neg, power, simplify, sub


class NonHolomorphicError(ValueError):
    pass


_CACHE: "WeakKeyDictionary[Expr, dict]" = WeakKeyDictionary()

_TWO_OVER_SQRT_PI = Const(2.0 / math.sqrt(math.pi))


def _d_call(node: Expr, d, var, holomorphic):
    name = node.name
    if holomorphic and name in NON_HOLOMORPHIC:
        raise NonHolomorphicError(
            f"{name} is not complex-differentiable with respect to {var!r}"
        )
    if name == "arctan2":
        y, x = node.args
        dy, dx = d[id(y)], d[id(x)]
        return div(sub(mul(x, dy), mul(y, dx)), add(power(x, 2), power(y, 2)))
    (a,) = node.args
    da = d[id(a)]
    if name == "exp":
        outer = node
    elif name == "ln":
        return div(da, a)
    elif name == "sin":
        outer = call("cos", a)
    elif name == "cos":
        outer = neg(call("sin", a))
    elif name == "sinh":
        outer = call("cosh", a)
    elif name == "cosh":
        outer = call("sinh", a)
    elif name == "tanh":
        outer = sub(ONE, power(node, 2))
    elif name == "sqrt":
        return div(da, mul(2, node))
    elif name == "erf":
        outer = mul(_TWO_OVER_SQRT_PI, call("exp", neg(power(a, 2))))
    elif name == "abs":
        return div(call("re", mul(call("conj", a), da)), node)
    elif name == "re":
        return call("re", da)
    elif name == "im":
        return call("im", da)
    elif name == "conj":
        return call("conj", da)
    else:  # pragma: no cover - FUNCTIONS and this table are kept in sync
        raise ValueError(f"no derivative rule for {name}")
    return mul(outer, da)


def _d_node(node: Expr, d, var, holomorphic):
    op = node.op
    if op == "var":
        return ONE if node.name == var else ZERO
    if op == "add":
        return add(*(d[id(a)] for a in node.args))
    if op == "neg":
        return neg(d[id(node.args[0])])
    if op == "mul":
        terms = []
        args = node.args
        for i, a in enumerate(args):
            da = d[id(a)]
            if da is ZERO:
                continue
            terms.append(mul(*args[:i], da, *args[i + 1:]))
        return add(*terms)
    if op == "div":
        a, b = node.args
        da, db = d[id(a)], d[id(b)]
        if db is ZERO:
            return div(da, b)
        return sub(div(da, b), div(mul(a, db), power(b, 2)))
    if op == "pow":
        a, b = node.args
        da, db = d[id(a)], d[id(b)]
        if db is ZERO:
            return mul(b, power(a, sub(b, ONE)), da)
        return mul(node, add(mul(db, call("ln", a)), div(mul(b, da), a)))
    if op == "call":
        return _d_call(node, d, var, holomorphic)
    raise ValueError(f"unexpected node {op}")


def differentiate(e, var: str, registry: Registry | None = None) -> Expr:
    """Exact partial derivative of `e` with respect to the variable `var`."""
    registry = registry or DEFAULT
    holomorphic = registry.is_complex(var)
    e = simplify(as_expr(e))
    key = (var, holomorphic)
    cache = _CACHE.get(e)
    if cache is not None and key in cache:
        return cache[key]
    d: dict[int, Expr] = {}
    for node in walk(e):
        if var not in node.free_vars:
            d[id(node)] = ZERO
            continue
        c = _CACHE.get(node)
        if c is not None and key in c:
            d[id(node)] = c[key]
            continue
        out = _d_node(node, d, var, holomorphic)
        d[id(node)] = out
        _CACHE.setdefault(node, {})[key] = out
    return d[id(e)]


def gradient(e, variables, registry: Registry | None = None):
    return [differentiate(e, v, registry) for v in variables]


def laplacian(e, variables=("x", "y"), registry: Registry | None = None) -> Expr:
    return add(*(differentiate(differentiate(e, v, registry), v, registry) for v in variables))


__all__ = ["differentiate", "gradient", "laplacian", "NonHolomorphicError"]
