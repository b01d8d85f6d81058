"""Infix and canonical prefix text forms."""
from __future__ import annotations

import math

from .nodes import Expr

_PREC = {"add": 10, "mul": 20, "div": 20, "neg": 30, "pow": 40}
_ATOM = 100


def _real_text(v: float | int) -> str:
    if isinstance(v, int):
        return str(v)
    if not math.isfinite(v):
        raise ValueError(f"cannot print non-finite constant {v!r}")
    return repr(float(v))


def _const_infix(v):
    if isinstance(v, complex):
        re_, im_ = _real_text(v.real), _real_text(abs(v.imag))
        sign = "-" if math.copysign(1.0, v.imag) < 0 else "+"
        return f"({re_} {sign} {im_}*I)", _ATOM
    if v < 0 or (isinstance(v, float) and math.copysign(1.0, v) < 0):
        return f"(-{_real_text(-v)})", _ATOM
    return _real_text(v), _ATOM


def _infix(e: Expr, memo) -> tuple[str, int]:
    hit = memo.get(id(e))
    if hit is not None:
        return hit
    op = e.op
    if op == "const":
        out = _const_infix(e.value)
    elif op == "var":
        out = (e.name, _ATOM)
    elif op == "call":
        out = (f"{e.name}(" + ", ".join(_infix(a, memo)[0] for a in e.args) + ")", _ATOM)
    elif op == "add":
        parts = [_wrap(e.args[0], 10, memo)]
        for a in e.args[1:]:
            if a.op == "neg":
                parts.append(" - " + _wrap(a.args[0], 11, memo, neg_parens=True))
            else:
                parts.append(" + " + _wrap(a, 11, memo, neg_parens=True))
        out = ("".join(parts), 10)
    elif op == "mul":
        parts = [_wrap(e.args[0], 20, memo, neg_parens=True)]
        parts += [_wrap(a, 21, memo, neg_parens=True) for a in e.args[1:]]
        out = ("*".join(parts), 20)
    elif op == "div":
        out = (
            _wrap(e.args[0], 20, memo, neg_parens=True) + "/" + _wrap(e.args[1], 21, memo, neg_parens=True),
            20,
        )
    elif op == "neg":
        out = ("-" + _wrap(e.args[0], 31, memo), 30)
    elif op == "pow":
        out = (_wrap(e.args[0], 41, memo) + "^" + _wrap(e.args[1], 40, memo, neg_parens=True), 40)
    else:  # pragma: no cover
        raise ValueError(op)
    memo[id(e)] = out
    return out


def _wrap(e: Expr, min_prec: int, memo, neg_parens=False) -> str:
    text, prec = _infix(e, memo)
    if prec < min_prec or (neg_parens and e.op == "neg"):
        return f"({text})"
    return text


def to_infix(e: Expr) -> str:
    """Infix text that `parse` reads back to the same tree (up to simplify)."""
    return _infix(e, {})[0]


def _const_prefix(v) -> str:
    if isinstance(v, complex):
        return f"(complex {_real_text(v.real)} {_real_text(v.imag)})"
    return _real_text(v)


def to_prefix(e: Expr) -> str:
    """Canonical parenthesized prefix form, e.g. `(add x (mul 2 y))`."""
    memo: dict[int, str] = {}

    def go(n: Expr) -> str:
        hit = memo.get(id(n))
        if hit is not None:
            return hit
        if n.op == "const":
            s = _const_prefix(n.value)
        elif n.op == "var":
            s = n.name
        elif n.op == "call":
            s = f"({n.name} " + " ".join(go(a) for a in n.args) + ")"
        else:
            s = f"({n.op} " + " ".join(go(a) for a in n.args) + ")"
        memo[id(n)] = s
        return s

    return go(e)
