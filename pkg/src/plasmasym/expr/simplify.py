"""Structural simplification.

Only local, always-valid rewrites: constant folding, neutral and absorbing
elements, flattening of sums and products, and collection of like terms or
like powers within a single sum/product. Terms and factors are ordered by a
process-independent structural digest, so the output is canonical enough for
`simplify` to be idempotent. Nothing here is used to decide semantic equality.
"""
from __future__ import annotations

import math
import numbers
from weakref import WeakKeyDictionary

from .nodes import (
    Add,
    Call,
    Const,
    Div,
    Expr,
    Mul,
    Neg,
    ONE,
    Pow,
    ZERO,
    as_expr,
    walk,
)

_MEMO: "WeakKeyDictionary[Expr, Expr]" = WeakKeyDictionary()


def _is_int_value(v) -> bool:
    if isinstance(v, bool):
        return False
    if isinstance(v, int):
        return True
    if isinstance(v, float):
        return v.is_integer()
    return False


def _finite(v) -> bool:
    if isinstance(v, complex):
        return math.isfinite(v.real) and math.isfinite(v.imag)
    try:
        return math.isfinite(v)
    except OverflowError:
        return False


def _const_div(a, b):
    if isinstance(a, int) and isinstance(b, int) and b != 0 and a % b == 0:
        return a // b
    return a / b


# ---------------------------------------------------------------- sums


def _split_coeff(term: Expr):
    if term.op == "neg":
        c, t = _split_coeff(term.args[0])
        return -c, t
    if term.op == "mul" and term.args[0].op == "const":
        rest = term.args[1:]
        return term.args[0].value, rest[0] if len(rest) == 1 else Mul(*rest)
    return 1, term


def _make_term(c, t: Expr) -> Expr:
    if c == 1:
        return t
    factors = t.args if t.op == "mul" else (t,)
    return _simp_mul((Const(c),) + tuple(factors))


def _simp_add(args) -> Expr:
    terms = []
    const = 0
    for a in args:
        if a.op == "add":
            items = a.args
        else:
            items = (a,)
        for t in items:
            if t.op == "const":
                const = const + t.value
            else:
                terms.append(t)
    coeffs: dict[Expr, object] = {}
    for t in terms:
        c, base = _split_coeff(t)
        if base in coeffs:
            coeffs[base] = coeffs[base] + c
        else:
            coeffs[base] = c
    out = []
    for base, c in coeffs.items():
        if c == 0:
            continue
        out.append(_make_term(c, base))
    out.sort(key=lambda e: e.sort_key)
    if const != 0 or not out:
        out.append(Const(const))
    if len(out) == 1:
        return out[0]
    return Add(*out)


# ---------------------------------------------------------------- products


def _simp_mul(args) -> Expr:
    coeff = 1
    factors = []
    stack = list(reversed(args))
    while stack:
        f = stack.pop()
        if f.op == "const":
            coeff = coeff * f.value
        elif f.op == "neg":
            coeff = -coeff
            stack.append(f.args[0])
        elif f.op == "mul":
            stack.extend(reversed(f.args))
        else:
            factors.append(f)
    if coeff == 0:
        return ZERO
    powers: dict[Expr, list] = {}
    for f in factors:
        if f.op == "pow":
            base, e = f.args
        else:
            base, e = f, ONE
        powers.setdefault(base, []).append(e)
    merged = []
    for base, exps in powers.items():
        if len(exps) == 1 and exps[0] is ONE:
            merged.append(base)
            continue
        e = exps[0] if len(exps) == 1 else _simp_add(tuple(exps))
        p = _simp_pow(base, e)
        if p.op == "const":
            coeff = coeff * p.value
        elif p.op == "neg":
            coeff = -coeff
            p = p.args[0]
            if p.op == "mul":
                merged.extend(p.args)
            else:
                merged.append(p)
        elif p.op == "mul":
            for g in p.args:
                if g.op == "const":
                    coeff = coeff * g.value
                else:
                    merged.append(g)
        else:
            merged.append(p)
    if coeff == 0:
        return ZERO
    merged.sort(key=lambda e: e.sort_key)
    if not merged:
        return Const(coeff)
    body = merged[0] if len(merged) == 1 else Mul(*merged)
    if coeff == 1:
        return body
    if coeff == -1:
        return Neg(body)
    return Mul(Const(coeff), *merged)


# ---------------------------------------------------------------- quotients


def _simp_div(a: Expr, b: Expr) -> Expr:
    if b.op == "const":
        if b.value == 1:
            return a
        if b.value == -1:
            return _simp_neg(a)
        if a.op == "const" and b.value != 0:
            v = _const_div(a.value, b.value)
            if _finite(v):
                return Const(v)
    if a.op == "const" and a.value == 0:
        return ZERO
    if a.op == "neg":
        return _simp_neg(_simp_div(a.args[0], b))
    if b.op == "neg":
        return _simp_neg(_simp_div(a, b.args[0]))
    if a.op == "mul" and a.args[0].op == "const":
        rest = a.args[1:]
        inner = rest[0] if len(rest) == 1 else Mul(*rest)
        return _simp_mul((a.args[0], _simp_div(inner, b)))
    if a.op == "div":
        return _simp_div(a.args[0], _simp_mul((a.args[1], b)))
    if b.op == "div":
        return _simp_div(_simp_mul((a, b.args[1])), b.args[0])
    return Div(a, b)


# ---------------------------------------------------------------- negation


def _simp_neg(a: Expr) -> Expr:
    if a.op == "const":
        return Const(-a.value)
    if a.op == "neg":
        return a.args[0]
    if a.op == "mul" and a.args[0].op == "const":
        return _simp_mul((Const(-a.args[0].value),) + a.args[1:])
    return Neg(a)


# ---------------------------------------------------------------- powers


def _fold_pow(b, e):
    if isinstance(b, complex) or isinstance(e, complex):
        if b == 0:
            return None
        v = complex(b) ** complex(e)
        return v if _finite(v) else None
    if b < 0 and not _is_int_value(e):
        return None
    if b == 0 and e < 0:
        return None
    if _is_int_value(e) and abs(e) > 256:
        return None
    try:
        v = b ** e
    except (OverflowError, ZeroDivisionError):
        return None
    if isinstance(e, float) and _is_int_value(e) and isinstance(b, int):
        v = float(v)
    return v if _finite(v) else None


def _simp_pow(b: Expr, e: Expr) -> Expr:
    if e.op == "const":
        ev = e.value
        if ev == 0:
            return ONE
        if ev == 1:
            return b
        if b.op == "const":
            v = _fold_pow(b.value, ev)
            if v is not None:
                return Const(v)
        if _is_int_value(ev):
            n = int(ev)
            if b.op == "pow":
                return _simp_pow(b.args[0], _simp_mul((b.args[1], Const(n))))
            if b.op == "neg":
                inner = _simp_pow(b.args[0], e)
                return inner if n % 2 == 0 else _simp_neg(inner)
    if b.op == "const" and b.value == 1:
        return ONE
    return Pow(b, e)


# ---------------------------------------------------------------- calls


def _simp_call(name: str, args) -> Expr:
    if all(a.op == "const" for a in args):
        from .evaluate import apply_function, DomainError

        try:
            v = apply_function(name, [a.value for a in args])
        except DomainError:
            v = None
        if v is not None:
            v = v.item() if hasattr(v, "item") else v
            if isinstance(v, numbers.Number) and _finite(v):
                return Const(v)
    a = args[0]
    if name == "abs" and a.op == "neg":
        return Call("abs", a.args[0])
    if name == "conj" and a.op == "call" and a.name == "conj":
        return a.args[0]
    return Call(name, *args)


# ---------------------------------------------------------------- entry points


def rebuild(node: Expr, args) -> Expr:
    """Rebuild `node` with new (already simplified) children, applying local rules."""
    op = node.op
    if op == "add":
        return _simp_add(args)
    if op == "mul":
        return _simp_mul(args)
    if op == "div":
        return _simp_div(*args)
    if op == "neg":
        return _simp_neg(args[0])
    if op == "pow":
        return _simp_pow(*args)
    if op == "call":
        return _simp_call(node.name, args)
    return node


def simplify(e: Expr) -> Expr:
    """Bottom-up local simplification; idempotent."""
    e = as_expr(e)
    hit = _MEMO.get(e)
    if hit is not None:
        return hit
    memo: dict[int, Expr] = {}
    for node in walk(e):
        cached = _MEMO.get(node)
        if cached is not None:
            memo[id(node)] = cached
            continue
        if not node.args:
            out = node
        else:
            out = rebuild(node, tuple(memo[id(a)] for a in node.args))
        memo[id(node)] = out
        _MEMO[node] = out
    return memo[id(e)]


# smart constructors: children are simplified first


def add(*args) -> Expr:
    args = tuple(simplify(as_expr(a)) for a in args)
    if not args:
        return ZERO
    if len(args) == 1:
        return args[0]
    return _simp_add(args)


def sub(a, b) -> Expr:
    return add(a, neg(b))


def mul(*args) -> Expr:
    args = tuple(simplify(as_expr(a)) for a in args)
    if not args:
        return ONE
    if len(args) == 1:
        return args[0]
    return _simp_mul(args)


def div(a, b) -> Expr:
    return _simp_div(simplify(as_expr(a)), simplify(as_expr(b)))


def neg(a) -> Expr:
    return _simp_neg(simplify(as_expr(a)))


def power(b, e) -> Expr:
    return _simp_pow(simplify(as_expr(b)), simplify(as_expr(e)))


def call(name: str, *args) -> Expr:
    return _simp_call(name, tuple(simplify(as_expr(a)) for a in args))
