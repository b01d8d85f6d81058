"""Hypothesis strategies for random expression trees."""
from hypothesis import strategies as st

from plasmasym.expr import Add, Call, Const, Div, Mul, Neg, Pow, Var

UNARY = ["exp", "sin", "cos", "sinh", "cosh", "tanh", "erf"]

leaves = st.one_of(
    st.sampled_from([Var("x"), Var("y")]),
    st.integers(-5, 5).map(Const),
    st.floats(-3, 3, allow_nan=False, allow_infinity=False).map(lambda v: Const(round(v, 3))),
)


def _extend(children):
    return st.one_of(
        st.tuples(children, children).map(lambda ab: Add(*ab)),
        st.tuples(children, children).map(lambda ab: Mul(*ab)),
        st.tuples(children, children).map(lambda ab: Div(*ab)),
        children.map(Neg),
        st.tuples(children, st.integers(0, 3)).map(lambda ab: Pow(ab[0], Const(ab[1]))),
        st.tuples(st.sampled_from(UNARY), children).map(lambda fa: Call(fa[0], fa[1])),
    )


def trees(max_leaves=12):
    return st.recursive(leaves, _extend, max_leaves=max_leaves)
