"""Immutable, hash-consed expression trees.

Nodes are interned: building the same tree twice returns the same object, so
shared subexpressions produced by differentiation are stored once and the
evaluator can treat the tree as a DAG.
"""
from __future__ import annotations

import hashlib
import numbers
import struct
import weakref

# function tag -> arity
FUNCTIONS = {
    "exp": 1,
    "ln": 1,
    "sin": 1,
    "cos": 1,
    "sinh": 1,
    "cosh": 1,
    "tanh": 1,
    "arctan2": 2,
    "erf": 1,
    "abs": 1,
    "re": 1,
    "im": 1,
    "conj": 1,
    "sqrt": 1,
}

# functions that are not complex-differentiable
NON_HOLOMORPHIC = frozenset({"abs", "re", "im", "conj", "arctan2"})

OPS = ("const", "var", "add", "mul", "pow", "neg", "div", "call")

_INTERN: "weakref.WeakValueDictionary[tuple, Expr]" = weakref.WeakValueDictionary()


def _value_key(value):
    return (type(value).__name__, value)


def _value_digest(value) -> bytes:
    if isinstance(value, complex):
        return b"c" + struct.pack("<dd", value.real, value.imag)
    if isinstance(value, bool):
        value = int(value)
    if isinstance(value, int):
        if float(value) == value:
            return b"r" + struct.pack("<d", float(value) + 0.0)
        return b"i" + str(value).encode()
    return b"r" + struct.pack("<d", float(value) + 0.0)


class Expr:
    """A node of an expression tree. Build with the module-level constructors."""

    __slots__ = ("op", "args", "value", "name", "_hash", "_key", "_free", "__weakref__")

    op: str
    args: tuple
    value: object
    name: str | None

    def __init__(self):  # pragma: no cover - guarded
        raise TypeError("use the constructor functions in plasmasym.expr")

    @classmethod
    def _make(cls, op, args=(), value=None, name=None):
        key = (op, name, _value_key(value) if op == "const" else None, args)
        node = _INTERN.get(key)
        if node is not None:
            return node
        node = object.__new__(cls)
        object.__setattr__(node, "op", op)
        object.__setattr__(node, "args", args)
        object.__setattr__(node, "value", value)
        object.__setattr__(node, "name", name)
        object.__setattr__(node, "_hash", hash((op, name, value, args)))
        object.__setattr__(node, "_key", None)
        object.__setattr__(node, "_free", None)
        _INTERN[key] = node
        return node

    def __setattr__(self, name, value):
        raise AttributeError("Expr is immutable")

    def __hash__(self):
        return self._hash

    def __eq__(self, other):
        # nodes are hash-consed, so structural equality is identity
        if not isinstance(other, Expr):
            return NotImplemented
        return self is other

    def __reduce__(self):
        return (_rebuild, (self.op, self.args, self.value, self.name))

    @property
    def sort_key(self) -> bytes:
        """Deterministic structural digest, stable across processes."""
        k = self._key
        if k is None:
            h = hashlib.blake2b(digest_size=12)
            h.update(self.op.encode())
            if self.name is not None:
                h.update(b"\x00" + self.name.encode())
            if self.op == "const":
                h.update(_value_digest(self.value))
            for a in self.args:
                h.update(a.sort_key)
            k = h.digest()
            object.__setattr__(self, "_key", k)
        return k

    @property
    def free_vars(self) -> frozenset:
        f = self._free
        if f is None:
            if self.op == "var":
                f = frozenset((self.name,))
            elif not self.args:
                f = frozenset()
            else:
                f = frozenset().union(*(a.free_vars for a in self.args))
            object.__setattr__(self, "_free", f)
        return f

    def depends_on(self, name: str) -> bool:
        return name in self.free_vars

    @property
    def is_const(self) -> bool:
        return self.op == "const"

    # arithmetic builds lightly simplified nodes
    def __add__(self, other):
        from .simplify import add
        return add(self, as_expr(other))

    def __radd__(self, other):
        from .simplify import add
        return add(as_expr(other), self)

    def __sub__(self, other):
        from .simplify import sub
        return sub(self, as_expr(other))

    def __rsub__(self, other):
        from .simplify import sub
        return sub(as_expr(other), self)

    def __mul__(self, other):
        from .simplify import mul
        return mul(self, as_expr(other))

    def __rmul__(self, other):
        from .simplify import mul
        return mul(as_expr(other), self)

    def __truediv__(self, other):
        from .simplify import div
        return div(self, as_expr(other))

    def __rtruediv__(self, other):
        from .simplify import div
        return div(as_expr(other), self)

    def __pow__(self, other):
        from .simplify import power
        return power(self, as_expr(other))

    def __rpow__(self, other):
        from .simplify import power
        return power(as_expr(other), self)

    def __neg__(self):
        from .simplify import neg
        return neg(self)

    def __repr__(self):
        from .printer import to_infix
        text = to_infix(self)
        if len(text) > 200:
            text = text[:197] + "..."
        return f"Expr({text})"

    def __str__(self):
        from .printer import to_infix
        return to_infix(self)


def _rebuild(op, args, value, name):
    return Expr._make(op, args, value, name)


# raw constructors: no simplification at all


def Const(value) -> Expr:
    if isinstance(value, Expr):
        return value
    if isinstance(value, bool) or not isinstance(value, numbers.Number):
        raise TypeError(f"not a number: {value!r}")
    if isinstance(value, numbers.Integral):
        value = int(value)
    elif isinstance(value, numbers.Real):
        value = float(value)
    else:
        value = complex(value)
    return Expr._make("const", (), value)


def Var(name: str) -> Expr:
    if not isinstance(name, str) or not name:
        raise TypeError("variable name must be a non-empty string")
    return Expr._make("var", (), None, name)


def Add(*args) -> Expr:
    if len(args) < 2:
        raise ValueError("Add needs at least two terms")
    return Expr._make("add", tuple(as_expr(a) for a in args))


def Mul(*args) -> Expr:
    if len(args) < 2:
        raise ValueError("Mul needs at least two factors")
    return Expr._make("mul", tuple(as_expr(a) for a in args))


def Pow(base, exponent) -> Expr:
    return Expr._make("pow", (as_expr(base), as_expr(exponent)))


def Neg(arg) -> Expr:
    return Expr._make("neg", (as_expr(arg),))


def Div(num, den) -> Expr:
    return Expr._make("div", (as_expr(num), as_expr(den)))


def Call(func: str, *args) -> Expr:
    arity = FUNCTIONS.get(func)
    if arity is None:
        raise ValueError(f"unknown function {func!r}")
    if len(args) != arity:
        raise ValueError(f"{func} takes {arity} argument(s), got {len(args)}")
    return Expr._make("call", tuple(as_expr(a) for a in args), None, func)


def as_expr(obj) -> Expr:
    if isinstance(obj, Expr):
        return obj
    return Const(obj)


ZERO = Const(0)
ONE = Const(1)
I = Const(1j)


def walk(e: Expr):
    """Post-order traversal of the DAG, each distinct node once."""
    seen = set()
    order = []
    stack = [(e, False)]
    while stack:
        node, expanded = stack.pop()
        if expanded:
            order.append(node)
            continue
        if id(node) in seen:
            continue
        seen.add(id(node))
        stack.append((node, True))
        for a in reversed(node.args):
            if id(a) not in seen:
                stack.append((a, False))
    return order


def size(e: Expr) -> int:
    """Number of distinct nodes."""
    return len(walk(e))


def substitute(e: Expr, mapping: dict) -> Expr:
    """Replace variables by expressions (simultaneously)."""
    from .simplify import rebuild

    mapping = {k: as_expr(v) for k, v in mapping.items()}
    if not mapping or not (e.free_vars & mapping.keys()):
        return e
    memo: dict[int, Expr] = {}
    for node in walk(e):
        if node.op == "var":
            out = mapping.get(node.name, node)
        elif not node.args or not (node.free_vars & mapping.keys()):
            out = node
        else:
            out = rebuild(node, tuple(memo[id(a)] for a in node.args))
        memo[id(node)] = out
    return memo[id(e)]
