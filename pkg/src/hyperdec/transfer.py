"""Lifting real functions of one variable onto the truncated series field.

An expression tree built from the constructors below describes a real
function f.  ``eval_star`` extends f to hypervalues: arithmetic nodes
recurse directly, and the elementary functions (exp, log, sin, cos, sqrt)
expand as a Taylor series about the standard part of their argument, so
an argument ``s + delta`` with delta infinitesimal evaluates to

    sum_{k < K} g_k(s) * delta**k

where ``g_k = g^(k)/k!`` and K is the context's term budget.  The series
remainder is what the sticky ``truncated`` flag reports.

Everything downstream (slopes, limits, continuity probes) reduces to
evaluating f at finitely many hyperreal points and taking standard parts.
"""

import math
from dataclasses import dataclass
from decimal import Decimal, getcontext
from fractions import Fraction
from typing import Union

from .errors import (
    DomainError,
    ExactTranscendental,
    HyperError,
    InfiniteArgument,
    NotFinite,
)
from .hyperfield import HyperValue, NumContext, UNIT_PAIR, ExponentPair


# --------------------------------------------------------------------------
# expression trees
# --------------------------------------------------------------------------

class FuncExpr:
    """Base class for function expression nodes."""

    __slots__ = ()


@dataclass(frozen=True)
class Var(FuncExpr):
    name: str = "x"


@dataclass(frozen=True)
class Const(FuncExpr):
    value: Fraction

    def __post_init__(self):
        object.__setattr__(self, "value", Fraction(self.value))


@dataclass(frozen=True)
class NamedConst(FuncExpr):
    """One of the built-in constants: pi, e, ln10."""

    name: str

    def __post_init__(self):
        if self.name not in ("pi", "e", "ln10"):
            raise ValueError(f"unknown constant {self.name!r}")


@dataclass(frozen=True)
class Add(FuncExpr):
    left: FuncExpr
    right: FuncExpr


@dataclass(frozen=True)
class Sub(FuncExpr):
    left: FuncExpr
    right: FuncExpr


@dataclass(frozen=True)
class Mul(FuncExpr):
    left: FuncExpr
    right: FuncExpr


@dataclass(frozen=True)
class Div(FuncExpr):
    left: FuncExpr
    right: FuncExpr


@dataclass(frozen=True)
class PowInt(FuncExpr):
    """Integer power of a subexpression."""

    base: FuncExpr
    power: int

    def __post_init__(self):
        if not isinstance(self.power, int):
            raise ValueError("power must be a plain integer")


@dataclass(frozen=True)
class Pow10(FuncExpr):
    """10 raised to a subexpression.

    Evaluation only accepts exponents of the shape k*H + j with k, j
    integers; the result is then the exact monomial 10**j * eps**(-k).
    """

    exponent: FuncExpr


@dataclass(frozen=True)
class Exp(FuncExpr):
    arg: FuncExpr


@dataclass(frozen=True)
class Log(FuncExpr):
    arg: FuncExpr


@dataclass(frozen=True)
class Sin(FuncExpr):
    arg: FuncExpr


@dataclass(frozen=True)
class Cos(FuncExpr):
    arg: FuncExpr


@dataclass(frozen=True)
class Sqrt(FuncExpr):
    arg: FuncExpr


_ELEMENTARY = {Exp: "exp", Log: "log", Sin: "sin", Cos: "cos", Sqrt: "sqrt"}


def const(v) -> Const:
    return Const(Fraction(v))


def is_arithmetic(f: FuncExpr) -> bool:
    """True when f uses only field operations and rational constants."""
    if isinstance(f, (Var, Const)):
        return True
    if isinstance(f, (Add, Sub, Mul, Div)):
        return is_arithmetic(f.left) and is_arithmetic(f.right)
    if isinstance(f, PowInt):
        return is_arithmetic(f.base)
    return False


def symbolic_derivative(f: FuncExpr) -> FuncExpr:
    """Derivative of f as a new expression tree.

    Used as the independent oracle for the probe-based slope below; no
    simplification is attempted.
    """
    if isinstance(f, Var):
        return Const(Fraction(1))
    if isinstance(f, (Const, NamedConst)):
        return Const(Fraction(0))
    if isinstance(f, Add):
        return Add(symbolic_derivative(f.left), symbolic_derivative(f.right))
    if isinstance(f, Sub):
        return Sub(symbolic_derivative(f.left), symbolic_derivative(f.right))
    if isinstance(f, Mul):
        return Add(
            Mul(symbolic_derivative(f.left), f.right),
            Mul(f.left, symbolic_derivative(f.right)),
        )
    if isinstance(f, Div):
        num = Sub(
            Mul(symbolic_derivative(f.left), f.right),
            Mul(f.left, symbolic_derivative(f.right)),
        )
        return Div(num, PowInt(f.right, 2))
    if isinstance(f, PowInt):
        if f.power == 0:
            return Const(Fraction(0))
        return Mul(
            Mul(Const(Fraction(f.power)), PowInt(f.base, f.power - 1)),
            symbolic_derivative(f.base),
        )
    if isinstance(f, Pow10):
        return Mul(
            Mul(Pow10(f.exponent), NamedConst("ln10")),
            symbolic_derivative(f.exponent),
        )
    if isinstance(f, Exp):
        return Mul(Exp(f.arg), symbolic_derivative(f.arg))
    if isinstance(f, Log):
        return Div(symbolic_derivative(f.arg), f.arg)
    if isinstance(f, Sin):
        return Mul(Cos(f.arg), symbolic_derivative(f.arg))
    if isinstance(f, Cos):
        return Mul(Const(Fraction(-1)), Mul(Sin(f.arg), symbolic_derivative(f.arg)))
    if isinstance(f, Sqrt):
        return Div(symbolic_derivative(f.arg), Mul(Const(Fraction(2)), Sqrt(f.arg)))
    raise TypeError(f"cannot differentiate {type(f).__name__}")


# --------------------------------------------------------------------------
# numeric helpers (Decimal recipes)
# --------------------------------------------------------------------------

def _dec_pi() -> Decimal:
    """pi under the current decimal context (AGM-free series)."""
    ctx = getcontext()
    ctx.prec += 2
    three = Decimal(3)
    lasts, t, s, n, na, d, da = Decimal(0), three, Decimal(3), 1, 0, 0, 24
    while s != lasts:
        lasts = s
        n, na = n + na, na + 8
        d, da = d + da, da + 32
        t = (t * n) / d
        s += t
    ctx.prec -= 2
    return +s


def _dec_reduce(x: Decimal) -> Decimal:
    # bring the angle near zero so the alternating series converges fast
    if abs(x) <= 10:
        return x
    ctx = getcontext()
    ctx.prec += 12
    two_pi = 2 * _dec_pi()
    k = (x / two_pi).to_integral_value()
    r = x - k * two_pi
    ctx.prec -= 12
    return +r


def _dec_sin(x: Decimal) -> Decimal:
    x = _dec_reduce(x)
    ctx = getcontext()
    ctx.prec += 2
    i, lasts, s, fact, num, sign = 1, Decimal(0), x, 1, x, 1
    while s != lasts:
        lasts = s
        i += 2
        fact *= i * (i - 1)
        num *= x * x
        sign *= -1
        s += num / fact * sign
    ctx.prec -= 2
    return +s


def _dec_cos(x: Decimal) -> Decimal:
    x = _dec_reduce(x)
    ctx = getcontext()
    ctx.prec += 2
    i, lasts, s, fact, num, sign = 0, Decimal(0), Decimal(1), 1, Decimal(1), 1
    while s != lasts:
        lasts = s
        i += 2
        fact *= i * (i - 1)
        num *= x * x
        sign *= -1
        s += num / fact * sign
    ctx.prec -= 2
    return +s


def _named_decimal(name: str) -> Decimal:
    if name == "pi":
        return _dec_pi()
    if name == "e":
        return Decimal(1).exp()
    return Decimal(10).ln()


def _half_binomial(k: int) -> Fraction:
    # binomial coefficient (1/2 choose k)
    num = Fraction(1)
    for i in range(k):
        num *= Fraction(1, 2) - i
    return num / math.factorial(k)


# --------------------------------------------------------------------------
# Taylor coefficient streams
# --------------------------------------------------------------------------

def _taylor_exact(kind: str, s: Fraction, count: int) -> list:
    if kind == "exp":
        if s != 0:
            raise ExactTranscendental(
                "exp at a nonzero standard part has no rational value; "
                "use float mode"
            )
        return [Fraction(1, math.factorial(k)) for k in range(count)]
    if kind == "sin":
        if s != 0:
            raise ExactTranscendental(
                "sin away from 0 has no rational value; use float mode"
            )
        out = []
        for k in range(count):
            if k % 2 == 0:
                out.append(Fraction(0))
            else:
                sign = -1 if (k // 2) % 2 else 1
                out.append(Fraction(sign, math.factorial(k)))
        return out
    if kind == "cos":
        if s != 0:
            raise ExactTranscendental(
                "cos away from 0 has no rational value; use float mode"
            )
        out = []
        for k in range(count):
            if k % 2 == 1:
                out.append(Fraction(0))
            else:
                sign = -1 if (k // 2) % 2 else 1
                out.append(Fraction(sign, math.factorial(k)))
        return out
    if kind == "log":
        if s <= 0:
            raise DomainError("log needs a positive standard part")
        if s != 1:
            raise ExactTranscendental(
                "log at a standard part other than 1 has no rational value; "
                "use float mode"
            )
        out = [Fraction(0)]
        for k in range(1, count):
            sign = 1 if k % 2 else -1
            out.append(Fraction(sign, k))
        return out
    if kind == "sqrt":
        if s <= 0:
            raise DomainError("sqrt needs a positive standard part")
        root = _exact_sqrt(s)
        if root is None:
            raise ExactTranscendental(
                f"sqrt({s}) is irrational; use float mode"
            )
        return [_half_binomial(k) * root / s**k for k in range(count)]
    raise ValueError(kind)


def _exact_sqrt(s: Fraction):
    n = math.isqrt(s.numerator)
    d = math.isqrt(s.denominator)
    if n * n == s.numerator and d * d == s.denominator:
        return Fraction(n, d)
    return None


def _taylor_float(kind: str, s: Decimal, count: int) -> list:
    if kind == "exp":
        base = s.exp()
        return [base / math.factorial(k) for k in range(count)]
    if kind == "log":
        if s <= 0:
            raise DomainError("log needs a positive standard part")
        out = [s.ln()]
        p = Decimal(1)
        for k in range(1, count):
            p *= s
            sign = 1 if k % 2 else -1
            out.append(sign / (k * p))
        return out
    if kind == "sqrt":
        if s <= 0:
            raise DomainError("sqrt needs a positive standard part")
        root = s.sqrt()
        out = []
        p = Decimal(1)
        for k in range(count):
            c = _half_binomial(k)
            out.append(root * Decimal(c.numerator) / (Decimal(c.denominator) * p))
            p *= s
        return out
    if kind in ("sin", "cos"):
        sn, cs = _dec_sin(s), _dec_cos(s)
        cycle = (sn, cs, -sn, -cs) if kind == "sin" else (cs, -sn, -cs, sn)
        return [cycle[k % 4] / math.factorial(k) for k in range(count)]
    raise ValueError(kind)


def _apply_elementary(kind: str, u: HyperValue) -> HyperValue:
    ctx = u.ctx
    if not u.is_finite:
        side = u.sign()
        raise InfiniteArgument(
            f"{kind} of an infinite argument (sign {side:+d}) is outside "
            "the Taylor window"
        )
    s = u.standard_part()
    delta = u - s
    count = ctx.max_terms
    with ctx.arith():
        if ctx.mode == "exact":
            coeffs = _taylor_exact(kind, s, count)
        else:
            coeffs = _taylor_float(kind, s, count)
    acc = ctx.zero()
    power = ctx.constant(1)
    for k, c in enumerate(coeffs):
        if k:
            power = power * delta
        if c:
            acc = acc + power * c
    flag = acc.truncated or u.truncated or not delta.is_zero
    return HyperValue(ctx=ctx, terms=acc.terms, truncated=flag)


# --------------------------------------------------------------------------
# evaluation
# --------------------------------------------------------------------------

def eval_star(f: FuncExpr, x: HyperValue) -> HyperValue:
    """Evaluate the lifted function at a hypervalue.

    Every Var node binds to x; the model is single-variable.
    """
    ctx = x.ctx
    if isinstance(f, Var):
        return x
    if isinstance(f, Const):
        return ctx.constant(f.value)
    if isinstance(f, NamedConst):
        if ctx.mode == "exact":
            raise ExactTranscendental(
                f"{f.name} has no exact rational value; use float mode"
            )
        with ctx.arith():
            return ctx.constant(_named_decimal(f.name))
    if isinstance(f, Add):
        return eval_star(f.left, x) + eval_star(f.right, x)
    if isinstance(f, Sub):
        return eval_star(f.left, x) - eval_star(f.right, x)
    if isinstance(f, Mul):
        return eval_star(f.left, x) * eval_star(f.right, x)
    if isinstance(f, Div):
        return eval_star(f.left, x) / eval_star(f.right, x)
    if isinstance(f, PowInt):
        return eval_star(f.base, x) ** f.power
    if isinstance(f, Pow10):
        return _pow10_value(eval_star(f.exponent, x))
    kind = _ELEMENTARY.get(type(f))
    if kind is not None:
        return _apply_elementary(kind, eval_star(f.arg, x))
    raise TypeError(f"cannot evaluate {type(f).__name__}")


def _pow10_value(w: HyperValue) -> HyperValue:
    """10**w for exponents of the shape k*H + f, k integer, f finite.

    The H part maps to the exact monomial eps**(-k); the finite part f
    contributes 10**f, which in exact mode must be a plain integer and in
    float mode goes through exp(f * ln 10).
    """
    ctx = w.ctx
    if w.truncated:
        raise DomainError("pow10 exponent carries truncation; refusing")
    k = Fraction(0)
    finite_terms = []
    for c, pair in w.terms:
        if pair == ExponentPair(0, 1):
            k = Fraction(c)
        elif pair.is_infinite:
            raise DomainError(
                "pow10 exponent must have the shape k*H + finite; "
                f"found a term at eps^{pair.b}*H^{pair.a}"
            )
        else:
            finite_terms.append((c, pair))
    if k.denominator != 1:
        raise DomainError("pow10 needs an integer coefficient on H")
    grid = ctx.monomial(1, -int(k), 0)
    rest = ctx.from_terms(finite_terms)
    if rest.is_zero:
        return grid
    if ctx.mode == "exact":
        j = Fraction(rest.coefficient_at(UNIT_PAIR))
        if rest.infinitesimal_part().is_zero and j.denominator == 1:
            return ctx.monomial(Fraction(10) ** int(j), -int(k), 0)
        raise ExactTranscendental(
            "pow10 of a non-integer finite exponent has no exact rational "
            "value; use float mode"
        )
    with ctx.arith():
        ln10 = ctx.constant(Decimal(10).ln())
    return grid * _apply_elementary("exp", rest * ln10)


def eval_real(f: FuncExpr, x, ctx: NumContext):
    """Evaluate f at a standard point.

    A Fraction argument with an arithmetic-only tree stays exact;
    everything else runs in Decimal under the context precision.
    """
    if isinstance(x, Fraction) and is_arithmetic(f):
        return _eval_fraction(f, x)
    with ctx.arith():
        return _eval_decimal(f, _to_decimal(x))


def _to_decimal(x) -> Decimal:
    if isinstance(x, Decimal):
        return +x
    if isinstance(x, Fraction):
        return Decimal(x.numerator) / Decimal(x.denominator)
    return Decimal(x)


def _eval_fraction(f: FuncExpr, x: Fraction) -> Fraction:
    if isinstance(f, Var):
        return x
    if isinstance(f, Const):
        return f.value
    if isinstance(f, Add):
        return _eval_fraction(f.left, x) + _eval_fraction(f.right, x)
    if isinstance(f, Sub):
        return _eval_fraction(f.left, x) - _eval_fraction(f.right, x)
    if isinstance(f, Mul):
        return _eval_fraction(f.left, x) * _eval_fraction(f.right, x)
    if isinstance(f, Div):
        d = _eval_fraction(f.right, x)
        if d == 0:
            raise DomainError("division by zero at a sample point")
        return _eval_fraction(f.left, x) / d
    if isinstance(f, PowInt):
        return _eval_fraction(f.base, x) ** f.power
    raise TypeError(f"not arithmetic: {type(f).__name__}")


def _eval_decimal(f: FuncExpr, x: Decimal) -> Decimal:
    if isinstance(f, Var):
        return x
    if isinstance(f, Const):
        return Decimal(f.value.numerator) / Decimal(f.value.denominator)
    if isinstance(f, NamedConst):
        return _named_decimal(f.name)
    if isinstance(f, Add):
        return _eval_decimal(f.left, x) + _eval_decimal(f.right, x)
    if isinstance(f, Sub):
        return _eval_decimal(f.left, x) - _eval_decimal(f.right, x)
    if isinstance(f, Mul):
        return _eval_decimal(f.left, x) * _eval_decimal(f.right, x)
    if isinstance(f, Div):
        d = _eval_decimal(f.right, x)
        if d == 0:
            raise DomainError("division by zero at a sample point")
        return _eval_decimal(f.left, x) / d
    if isinstance(f, PowInt):
        return _eval_decimal(f.base, x) ** f.power
    if isinstance(f, Pow10):
        return Decimal(10) ** _eval_decimal(f.exponent, x)
    if isinstance(f, Exp):
        return _eval_decimal(f.arg, x).exp()
    if isinstance(f, Log):
        v = _eval_decimal(f.arg, x)
        if v <= 0:
            raise DomainError("log needs a positive argument")
        return v.ln()
    if isinstance(f, Sqrt):
        v = _eval_decimal(f.arg, x)
        if v < 0:
            raise DomainError("sqrt needs a nonnegative argument")
        return v.sqrt()
    if isinstance(f, Sin):
        return _dec_sin(_eval_decimal(f.arg, x))
    if isinstance(f, Cos):
        return _dec_cos(_eval_decimal(f.arg, x))
    raise TypeError(f"cannot evaluate {type(f).__name__}")


# --------------------------------------------------------------------------
# probe sets
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class ProbeSet:
    """Evaluation points used by the slope and limit routines.

    Order matters: the first witnesses found follow probe order, and the
    first infinite point is the one a sequence limit is read from.
    """

    infinitesimals: tuple
    infinite_points: tuple

    def __post_init__(self):
        if not self.infinitesimals:
            raise ValueError("need at least one infinitesimal probe")
        if not self.infinite_points:
            raise ValueError("need at least one infinite probe")
        for v in self.infinitesimals:
            if v.is_zero or not v.is_finite or v.standard_part() != 0:
                raise ValueError(f"not a nonzero infinitesimal: {v}")
        for v in self.infinite_points:
            if v.is_finite:
                raise ValueError(f"not an infinite point: {v}")

    @classmethod
    def default(cls, ctx: NumContext) -> "ProbeSet":
        return cls(
            infinitesimals=(
                ctx.tau(),
                2 * ctx.tau(),
                ctx.omega(-1),
                ctx.omega(-2),
            ),
            infinite_points=(ctx.omega(), ctx.omega(2), ctx.tau(-1)),
        )


# --------------------------------------------------------------------------
# slope at a point
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class NoDerivative:
    """Witness that the probe slopes did not settle on one value."""

    probe_a: HyperValue
    probe_b: HyperValue | None
    slope_a: object
    slope_b: object
    note: str


def derivative(
    f: FuncExpr,
    x0,
    ctx: NumContext,
    probes: ProbeSet | None = None,
) -> Union[Fraction, Decimal, NoDerivative]:
    """Slope of f at the standard point x0.

    Each infinitesimal probe e yields st((f(x0+e) - f(x0))/e); the probes
    must agree (exactly in exact mode, to half the working precision in
    float mode) or a NoDerivative witness is returned.
    """
    probes = probes or ProbeSet.default(ctx)
    base_point = ctx.constant(x0)
    base = eval_star(f, base_point)
    slopes = []
    for e in probes.infinitesimals:
        shifted = eval_star(f, base_point + e)
        quotient = (shifted - base) / e
        try:
            slopes.append((e, quotient.standard_part()))
        except NotFinite:
            return NoDerivative(
                probe_a=e,
                probe_b=None,
                slope_a=None,
                slope_b=None,
                note="difference quotient is infinite; no finite slope",
            )
    first_e, first = slopes[0]
    for e, s in slopes[1:]:
        if not _slopes_agree(first, s, ctx):
            return NoDerivative(
                probe_a=first_e,
                probe_b=e,
                slope_a=first,
                slope_b=s,
                note="probe slopes disagree",
            )
    return first


def _slopes_agree(a, b, ctx: NumContext) -> bool:
    if ctx.mode == "exact":
        return a == b
    with ctx.arith():
        return abs(a - b) <= Decimal(10) ** (-(ctx.prec // 2))


# --------------------------------------------------------------------------
# limits
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class SeqLimit:
    """Outcome of reading a sequence off at an infinite index."""

    outcome: str  # "converges" | "diverges" | "indeterminate"
    value: object = None
    sign: int | None = None
    cross_check_agrees: bool | None = None
    note: str = ""


def limit_seq(
    f: FuncExpr,
    ctx: NumContext,
    probes: ProbeSet | None = None,
) -> SeqLimit:
    """Limit of the sequence n -> f(n), read at an infinite index.

    The value comes from the first infinite probe; the second, when
    present, is evaluated as a consistency check and any disagreement is
    reported in ``cross_check_agrees``.
    """
    probes = probes or ProbeSet.default(ctx)
    point = probes.infinite_points[0]
    try:
        v = eval_star(f, point)
    except HyperError as exc:
        return SeqLimit(outcome="indeterminate", note=str(exc))
    if v.is_finite:
        result = SeqLimit(outcome="converges", value=v.standard_part())
    else:
        result = SeqLimit(outcome="diverges", sign=v.sign())
    if len(probes.infinite_points) < 2:
        return result
    agrees = _cross_check(f, probes.infinite_points[1], result, ctx)
    return SeqLimit(
        outcome=result.outcome,
        value=result.value,
        sign=result.sign,
        cross_check_agrees=agrees,
        note=result.note,
    )


def _cross_check(f, point, result: SeqLimit, ctx: NumContext):
    try:
        v = eval_star(f, point)
    except HyperError:
        return None
    if result.outcome == "converges":
        if not v.is_finite:
            return False
        return _slopes_agree(result.value, v.standard_part(), ctx)
    if result.outcome == "diverges":
        return (not v.is_finite) and v.sign() == result.sign
    return None


@dataclass(frozen=True)
class FunLimit:
    """Two-sided limit probe of f(x) as x approaches a standard point."""

    outcome: str  # "limit" | "no_limit"
    value: object = None
    witnesses: tuple = ()


def limit_fun(
    f: FuncExpr,
    a,
    ctx: NumContext,
    probes: ProbeSet | None = None,
) -> FunLimit:
    probes = probes or ProbeSet.default(ctx)
    base = ctx.constant(a)
    seen = []
    witnesses = []
    for e in probes.infinitesimals:
        for side in (1, -1):
            point = base + side * e
            label = f"x = {a} {'+' if side > 0 else '-'} ({e})"
            try:
                v = eval_star(f, point)
            except HyperError as exc:
                witnesses.append(f"{label}: evaluation failed ({exc})")
                return FunLimit(outcome="no_limit", witnesses=tuple(witnesses))
            if not v.is_finite:
                witnesses.append(f"{label}: value is infinite (sign {v.sign():+d})")
                return FunLimit(outcome="no_limit", witnesses=tuple(witnesses))
            seen.append((label, v.standard_part()))
    first_label, first = seen[0]
    for label, s in seen[1:]:
        if not _slopes_agree(first, s, ctx):
            witnesses.append(f"{first_label}: {first}")
            witnesses.append(f"{label}: {s}")
            return FunLimit(outcome="no_limit", witnesses=tuple(witnesses))
    return FunLimit(outcome="limit", value=first)


# --------------------------------------------------------------------------
# continuity probes
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class ContinuityReport:
    verdict: str  # "pass" | "fail" | "inconclusive"
    witness: HyperValue | None = None
    detail: str = ""


def continuity_probe(
    f: FuncExpr,
    x0,
    ctx: NumContext,
    probes: ProbeSet | None = None,
) -> ContinuityReport:
    """Check f(x0 + e) ~ f(x0) for every infinitesimal probe e, both sides.

    A pass is evidence over the probe set, not a proof.
    """
    probes = probes or ProbeSet.default(ctx)
    base_point = ctx.constant(x0)
    try:
        base = eval_star(f, base_point)
    except HyperError as exc:
        return ContinuityReport(
            verdict="inconclusive", detail=f"evaluation failed at x0: {exc}"
        )
    for e in probes.infinitesimals:
        for side in (1, -1):
            probe = side * e
            try:
                v = eval_star(f, base_point + probe)
                same = v.approx_eq(base)
            except HyperError as exc:
                return ContinuityReport(
                    verdict="inconclusive",
                    witness=probe,
                    detail=f"evaluation failed: {exc}",
                )
            if not same:
                gap = v - base
                return ContinuityReport(
                    verdict="fail",
                    witness=probe,
                    detail=f"f(x0 + e) - f(x0) = {gap} is not infinitesimal",
                )
    return ContinuityReport(verdict="pass", detail="all probes landed infinitely close")


@dataclass(frozen=True)
class UniformReport:
    """Outcome of the two-point uniform continuity probe."""

    verdict: str  # "fail" | "pass_all_probes" | "inconclusive"
    witness_x: HyperValue | None = None
    witness_y: HyperValue | None = None
    gap: HyperValue | None = None
    gap_standard: object = None
    note: str = ""


_STANDARD_SAMPLES = (0, 1, -1, Fraction(1, 2), 2)


def uniform_continuity_probe(
    f: FuncExpr,
    ctx: NumContext,
    probes: ProbeSet | None = None,
) -> UniformReport:
    """Look for x, y infinitely close with f(x), f(y) not infinitely close.

    Sample points run through a few standard values and then the infinite
    probes; a failure at an infinite point is the classic way uniform
    continuity breaks while plain continuity holds.  A pass verdict only
    says no probe pair separated the function, it is not a proof.
    """
    probes = probes or ProbeSet.default(ctx)
    points = [ctx.constant(s) for s in _STANDARD_SAMPLES]
    points.extend(probes.infinite_points)
    trouble = None
    for x in points:
        for e in probes.infinitesimals:
            y = x + e
            try:
                gap = eval_star(f, y) - eval_star(f, x)
            except HyperError as exc:
                trouble = trouble or f"evaluation failed near {x}: {exc}"
                continue
            cls, _ = gap.classify()
            if cls.name != "INFINITESIMAL":
                try:
                    std = gap.standard_part()
                except NotFinite:
                    std = None
                return UniformReport(
                    verdict="fail",
                    witness_x=x,
                    witness_y=y,
                    gap=gap,
                    gap_standard=std,
                    note="points are infinitely close but the values are not",
                )
    if trouble:
        return UniformReport(verdict="inconclusive", note=trouble)
    return UniformReport(
        verdict="pass_all_probes",
        note="no probe pair separated the values; evidence, not a proof",
    )


# --------------------------------------------------------------------------
# extreme value demo
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class EvtRow:
    n: int
    argmax: Fraction
    value: object


@dataclass(frozen=True)
class EvtReport:
    rows: tuple

    def stabilized(self) -> bool:
        if len(self.rows) < 2:
            return True
        return self.rows[-1].argmax == self.rows[-2].argmax


def evt_demo(
    f: FuncExpr,
    ctx: NumContext,
    n: int = 64,
    doublings: int = 3,
) -> EvtReport:
    """Maximum of f over the grid i/n on [0, 1], with grid doubling.

    Arithmetic trees with the exact context evaluate in Fractions, so the
    argmax comparisons are exact; ties keep the first (leftmost) index.
    """
    if n < 1:
        raise ValueError("need n >= 1")
    if n * 2**doublings > 1_000_000:
        raise ValueError("final grid exceeds 10^6 points")
    exact = ctx.mode == "exact" and is_arithmetic(f)
    rows = []
    m = n
    for _ in range(doublings + 1):
        best_i = 0
        best = None
        for i in range(m + 1):
            t = Fraction(i, m)
            v = eval_real(f, t, ctx) if exact else eval_real(f, _to_decimal(t), ctx)
            if best is None or v > best:
                best, best_i = v, i
        rows.append(EvtRow(n=m, argmax=Fraction(best_i, m), value=best))
        m *= 2
    return EvtReport(rows=tuple(rows))
