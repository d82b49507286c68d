"""Computable hyperreal arithmetic.

Numbers are finite truncated series over an infinite unit H and the
infinitesimal eps = 10^(-H), with exact rational or high-precision
decimal coefficients.  On top of the field sit the standard-part map,
infinitesimal derivatives and limits, extended decimal expansions with
digits beyond every standard place, a climbing Newton iteration whose
truncating display never reaches 1, and an expression language with a
CLI.
"""

from .errors import (
    AssertionFailed,
    ContextMismatch,
    DerivativeVanishes,
    DivisionByZero,
    DomainError,
    ExactTranscendental,
    FloorUndecidable,
    HyperError,
    InfiniteArgument,
    InvalidScale,
    NotFinite,
    ParseError,
    PositionOutOfModel,
    TruncationAmbiguous,
    UnknownIdentifier,
    UnsupportedNotation,
)
from .hyperfield import (
    Classification,
    HyperValue,
    NumContext,
    Ordering,
    approx_eq,
    classify,
    compare,
    format_value,
    from_json,
    nines,
    nines_hyper,
    standard_part,
    to_json,
)
from .transfer import (
    Add,
    Const,
    Cos,
    Div,
    Exp,
    FuncExpr,
    Log,
    Mul,
    NamedConst,
    NoDerivative,
    Pow10,
    PowInt,
    ProbeSet,
    Sin,
    Sqrt,
    Sub,
    Var,
    derivative,
    eval_real,
    eval_star,
    evt_demo,
    is_arithmetic,
    limit_fun,
    limit_seq,
    symbolic_derivative,
    uniform_continuity_probe,
)
from .lightstone import Position, digit_at
from .lightstone import parse as parse_lightstone
from .lightstone import render as render_lightstone
from .hypercalc import (
    CheckReport,
    NewtonTrace,
    calculator_display,
    newton_trace,
    theorem_check,
)
from .expr import (
    eval_command,
    evaluate,
    parse_command,
    parse_expr,
    print_command,
    print_expr,
    to_function,
)
from .microscope import MicroscopeScene, microscope, preset_scene, scene_positions
from .cli import run_cli

__version__ = "0.1.0"

__all__ = [
    "AssertionFailed",
    "ContextMismatch",
    "DerivativeVanishes",
    "DivisionByZero",
    "DomainError",
    "ExactTranscendental",
    "FloorUndecidable",
    "HyperError",
    "InfiniteArgument",
    "InvalidScale",
    "NotFinite",
    "ParseError",
    "PositionOutOfModel",
    "TruncationAmbiguous",
    "UnknownIdentifier",
    "UnsupportedNotation",
    "Classification",
    "HyperValue",
    "NumContext",
    "Ordering",
    "approx_eq",
    "classify",
    "compare",
    "format_value",
    "from_json",
    "nines",
    "nines_hyper",
    "standard_part",
    "to_json",
    "Add",
    "Const",
    "Cos",
    "Div",
    "Exp",
    "FuncExpr",
    "Log",
    "Mul",
    "NamedConst",
    "NoDerivative",
    "Pow10",
    "PowInt",
    "ProbeSet",
    "Sin",
    "Sqrt",
    "Sub",
    "Var",
    "derivative",
    "eval_real",
    "eval_star",
    "evt_demo",
    "is_arithmetic",
    "limit_fun",
    "limit_seq",
    "symbolic_derivative",
    "uniform_continuity_probe",
    "Position",
    "digit_at",
    "parse_lightstone",
    "render_lightstone",
    "CheckReport",
    "NewtonTrace",
    "calculator_display",
    "newton_trace",
    "theorem_check",
    "eval_command",
    "evaluate",
    "parse_command",
    "parse_expr",
    "print_command",
    "print_expr",
    "to_function",
    "MicroscopeScene",
    "microscope",
    "preset_scene",
    "scene_positions",
    "run_cli",
    "__version__",
]
