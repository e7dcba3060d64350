"""Expressions, dual numbers and chart-level calculus."""

from .calculus import (
    BracketVectorField,
    OneFormDef,
    Point,
    ScalarField,
    TwoFormMatrix,
    VectorFieldDef,
    antisym_pair,
    as_coords,
    d_oneform,
    eval_jet,
    lie_bracket,
)
from .chart import TWO_PI, Chart, sample_box
from .expr import BinOp, Call, Compiled, Expr, Neg, Num, Var, parse, to_text
from .jet import Jet

__all__ = [
    "BinOp",
    "BracketVectorField",
    "Call",
    "Chart",
    "Compiled",
    "Expr",
    "Jet",
    "Neg",
    "Num",
    "OneFormDef",
    "Point",
    "ScalarField",
    "TWO_PI",
    "TwoFormMatrix",
    "Var",
    "VectorFieldDef",
    "antisym_pair",
    "as_coords",
    "d_oneform",
    "eval_jet",
    "lie_bracket",
    "parse",
    "sample_box",
    "to_text",
]
