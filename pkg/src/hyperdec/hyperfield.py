"""Ordered-field arithmetic on truncated generalized power series.

A value is a finite sum of terms c * eps**b * H**a where H is an infinite
unit, eps = 10**(-H) is its reciprocal-exponential infinitesimal, and the
exponents a, b are rationals.  Because eps is exponentially small in H,
eps**b dominates every power of H: the single pair (b, a) fixes a term's
magnitude outright.  Arithmetic keeps at most K terms per value, always
the K largest, and raises a sticky `truncated` flag whenever anything
was dropped.  The flag is honest: comparisons refuse to certify equality
of flagged values instead of guessing.
"""

from __future__ import annotations

import math
from contextlib import nullcontext
from dataclasses import dataclass
from decimal import Context as _DecimalContext
from decimal import Decimal, ROUND_FLOOR, localcontext
from enum import Enum
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Union

from .errors import (
    ContextMismatch,
    DivisionByZero,
    FloorUndecidable,
    NotFinite,
    TruncationAmbiguous,
)

__all__ = [
    "ExponentPair",
    "NumContext",
    "HyperValue",
    "Ordering",
    "Classification",
    "UNIT_PAIR",
    "add",
    "sub",
    "neg",
    "mul",
    "div",
    "inv",
    "compare",
    "standard_part",
    "approx_eq",
    "classify",
    "decompose",
    "decompose_raw",
    "floor",
    "nines",
    "nines_hyper",
    "to_json",
    "from_json",
]

Coefficient = Union[Fraction, Decimal]
CoeffLike = Union[int, str, Fraction, Decimal]


@dataclass(frozen=True)
class ExponentPair:
    """Exponents (b, a) of a monomial eps**b * H**a.

    Magnitude order: a smaller power of eps always wins; among equal
    eps-powers a larger power of H wins.  (0, 0) is the unit monomial.
    """

    b: Fraction
    a: Fraction

    def __post_init__(self) -> None:
        object.__setattr__(self, "b", Fraction(self.b))
        object.__setattr__(self, "a", Fraction(self.a))

    # --- magnitude order ------------------------------------------------
    def _key(self) -> tuple[Fraction, Fraction]:
        return (-self.b, self.a)

    def __lt__(self, other: "ExponentPair") -> bool:
        return self._key() < other._key()

    def __le__(self, other: "ExponentPair") -> bool:
        return self._key() <= other._key()

    def __gt__(self, other: "ExponentPair") -> bool:
        return self._key() > other._key()

    def __ge__(self, other: "ExponentPair") -> bool:
        return self._key() >= other._key()

    # --- group structure -------------------------------------------------
    def __add__(self, other: "ExponentPair") -> "ExponentPair":
        return ExponentPair(self.b + other.b, self.a + other.a)

    def __sub__(self, other: "ExponentPair") -> "ExponentPair":
        return ExponentPair(self.b - other.b, self.a - other.a)

    def __neg__(self) -> "ExponentPair":
        return ExponentPair(-self.b, -self.a)

    def scaled(self, k: int) -> "ExponentPair":
        return ExponentPair(self.b * k, self.a * k)

    # --- classification ---------------------------------------------------
    @property
    def is_unit(self) -> bool:
        return self.b == 0 and self.a == 0

    @property
    def is_infinite(self) -> bool:
        return self.b < 0 or (self.b == 0 and self.a > 0)

    @property
    def is_infinitesimal(self) -> bool:
        return self.b > 0 or (self.b == 0 and self.a < 0)


UNIT_PAIR = ExponentPair(Fraction(0), Fraction(0))


@lru_cache(maxsize=None)
def _decimal_ctx(prec: int) -> _DecimalContext:
    return _DecimalContext(prec=prec)


@dataclass(frozen=True)
class NumContext:
    """Shared numeric policy: term budget K and coefficient arithmetic.

    mode "exact" keeps coefficients as Fractions and never rounds; mode
    "float" works in fixed-precision decimal with prec digits.
    """

    max_terms: int = 16
    mode: str = "exact"
    prec: int = 50

    def __post_init__(self) -> None:
        if self.max_terms < 2:
            raise ValueError("term budget must be at least 2")
        if self.mode not in ("exact", "float"):
            raise ValueError(f"unknown mode {self.mode!r}")
        if self.prec < 10:
            raise ValueError("precision must be at least 10 digits")

    # --- coefficient plumbing ---------------------------------------------
    def coeff(self, v: CoeffLike) -> Coefficient:
        """Coerce v into this context's coefficient type."""
        if self.mode == "exact":
            if isinstance(v, Fraction):
                return v
            if isinstance(v, Decimal):
                return Fraction(v)
            return Fraction(v)
        if isinstance(v, Decimal) and not v.is_finite():
            self._reject_nonfinite(v)
        with self.arith():
            if isinstance(v, Decimal):
                return +v
            if isinstance(v, Fraction):
                return Decimal(v.numerator) / Decimal(v.denominator)
            return +Decimal(v)

    @staticmethod
    def _reject_nonfinite(v: Decimal) -> Decimal:
        raise ValueError(f"non-finite coefficient {v}")

    def arith(self):
        """Context manager under which coefficient arithmetic runs."""
        if self.mode == "exact":
            return nullcontext()
        return localcontext(_decimal_ctx(self.prec))

    # --- constructors -----------------------------------------------------
    def zero(self) -> "HyperValue":
        return HyperValue(ctx=self, terms=(), truncated=False)

    def constant(self, v: CoeffLike) -> "HyperValue":
        return self.monomial(v, 0, 0)

    def monomial(self, c: CoeffLike, b, a) -> "HyperValue":
        cc = self.coeff(c)
        if cc == 0:
            return self.zero()
        pair = ExponentPair(Fraction(b), Fraction(a))
        return HyperValue(ctx=self, terms=((cc, pair),), truncated=False)

    def omega(self, power=1) -> "HyperValue":
        """The infinite unit H (or an integer power of it)."""
        return self.monomial(1, 0, power)

    def tau(self, power=1) -> "HyperValue":
        """The infinitesimal eps = 10**(-H) (or a power of it)."""
        return self.monomial(1, power, 0)

    def from_terms(
        self,
        items: Iterable[tuple[CoeffLike, ExponentPair]],
        truncated: bool = False,
    ) -> "HyperValue":
        acc: dict[ExponentPair, Coefficient] = {}
        with self.arith():
            for c, pair in items:
                cc = self.coeff(c)
                if pair in acc:
                    acc[pair] = acc[pair] + cc
                else:
                    acc[pair] = cc
        return _build(self, acc, truncated)


class Ordering(Enum):
    LESS = -1
    EQUAL = 0
    GREATER = 1


class Classification(Enum):
    INFINITESIMAL = "infinitesimal"
    APPRECIABLE = "appreciable"
    INFINITE = "infinite"


def _build(
    ctx: NumContext,
    acc: dict[ExponentPair, Coefficient],
    truncated: bool,
) -> "HyperValue":
    """Normalize a term map: drop zeros, sort by magnitude, enforce K."""
    live = [(pair, c) for pair, c in acc.items() if c != 0]
    live.sort(key=lambda item: item[0]._key(), reverse=True)
    if len(live) > ctx.max_terms:
        live = live[: ctx.max_terms]
        truncated = True
    return HyperValue(
        ctx=ctx,
        terms=tuple((c, pair) for pair, c in live),
        truncated=truncated,
    )


@dataclass(frozen=True)
class HyperValue:
    """An immutable truncated series, terms sorted largest-first."""

    ctx: NumContext
    terms: tuple[tuple[Coefficient, ExponentPair], ...]
    truncated: bool

    # --- inspection ---------------------------------------------------------
    @property
    def is_zero(self) -> bool:
        return not self.terms

    @property
    def is_finite(self) -> bool:
        return not any(pair.is_infinite for _, pair in self.terms)

    def leading(self) -> tuple[Coefficient, ExponentPair]:
        if not self.terms:
            raise ValueError("zero has no leading term")
        return self.terms[0]

    def sign(self) -> int:
        if not self.terms:
            return 0
        c = self.terms[0][0]
        return 1 if c > 0 else -1

    def coefficient_at(self, pair: ExponentPair) -> Coefficient:
        for c, p in self.terms:
            if p == pair:
                return c
        return self.ctx.coeff(0)

    def infinite_part(self) -> "HyperValue":
        kept = [(c, p) for c, p in self.terms if p.is_infinite]
        return HyperValue(ctx=self.ctx, terms=tuple(kept), truncated=False)

    def infinitesimal_part(self) -> "HyperValue":
        kept = [(c, p) for c, p in self.terms if p.is_infinitesimal]
        return HyperValue(ctx=self.ctx, terms=tuple(kept), truncated=False)

    # --- arithmetic -----------------------------------------------------------
    def _check(self, other: "HyperValue") -> None:
        if self.ctx != other.ctx:
            raise ContextMismatch(
                f"operands use different contexts: {self.ctx} vs {other.ctx}"
            )

    def _coerce(self, other) -> "HyperValue":
        if isinstance(other, HyperValue):
            self._check(other)
            return other
        if isinstance(other, (int, Fraction, Decimal)):
            return self.ctx.constant(other)
        return NotImplemented

    def __add__(self, other) -> "HyperValue":
        rhs = self._coerce(other)
        if rhs is NotImplemented:
            return NotImplemented
        acc: dict[ExponentPair, Coefficient] = {}
        with self.ctx.arith():
            for c, pair in self.terms:
                acc[pair] = c
            for c, pair in rhs.terms:
                acc[pair] = acc[pair] + c if pair in acc else c
        return _build(self.ctx, acc, self.truncated or rhs.truncated)

    __radd__ = __add__

    def __neg__(self) -> "HyperValue":
        # Decimal's unary minus rounds under the ambient context, which
        # would silently clip high-precision coefficients; copy_negate is
        # the quiet, exact flip.
        return HyperValue(
            ctx=self.ctx,
            terms=tuple(
                (c.copy_negate() if isinstance(c, Decimal) else -c, pair)
                for c, pair in self.terms
            ),
            truncated=self.truncated,
        )

    def __sub__(self, other) -> "HyperValue":
        rhs = self._coerce(other)
        if rhs is NotImplemented:
            return NotImplemented
        return self + (-rhs)

    def __rsub__(self, other) -> "HyperValue":
        rhs = self._coerce(other)
        if rhs is NotImplemented:
            return NotImplemented
        return rhs + (-self)

    def __mul__(self, other) -> "HyperValue":
        rhs = self._coerce(other)
        if rhs is NotImplemented:
            return NotImplemented
        acc: dict[ExponentPair, Coefficient] = {}
        with self.ctx.arith():
            for c1, p1 in self.terms:
                for c2, p2 in rhs.terms:
                    pair = p1 + p2
                    prod = c1 * c2
                    acc[pair] = acc[pair] + prod if pair in acc else prod
        return _build(self.ctx, acc, self.truncated or rhs.truncated)

    __rmul__ = __mul__

    def inv(self) -> "HyperValue":
        """Multiplicative inverse via the geometric series.

        Writing x = c*mu*(1 + r) with r strictly below unit magnitude,
        the inverse is (1/c)*mu**-1 * sum((-r)**k).  A one-term x inverts
        exactly; otherwise the series is infinite and the result is
        truncated to the K leading terms with the flag set.
        """
        if not self.terms:
            raise DivisionByZero("cannot invert zero")
        ctx = self.ctx
        c0, mu0 = self.terms[0]
        with ctx.arith():
            one = ctx.coeff(1)
            inv_c0 = one / c0
            if len(self.terms) == 1:
                return HyperValue(
                    ctx=ctx,
                    terms=((inv_c0, -mu0),),
                    truncated=self.truncated,
                )
            # minus_r maps monomial offsets (all below unit) to coefficients
            minus_r: dict[ExponentPair, Coefficient] = {
                (pair - mu0): -(c / c0) for c, pair in self.terms[1:]
            }
            acc: dict[ExponentPair, Coefficient] = {UNIT_PAIR: one}
            term: dict[ExponentPair, Coefficient] = {UNIT_PAIR: one}
            budget = ctx.max_terms
            for _ in range(4 * budget + 64):
                nxt: dict[ExponentPair, Coefficient] = {}
                for p1, c1 in term.items():
                    for p2, c2 in minus_r.items():
                        pair = p1 + p2
                        prod = c1 * c2
                        nxt[pair] = nxt[pair] + prod if pair in nxt else prod
                term = {p: c for p, c in nxt.items() if c != 0}
                if not term:
                    break
                for p, c in term.items():
                    acc[p] = acc[p] + c if p in acc else c
                live = sorted(
                    (p for p, c in acc.items() if c != 0),
                    key=lambda p: p._key(),
                    reverse=True,
                )
                if len(live) >= budget:
                    peak = max(term, key=lambda p: p._key())
                    if peak < live[budget - 1]:
                        break
            else:
                raise RuntimeError("inverse series failed to settle")
        series = _build(ctx, acc, truncated=True)
        scale = HyperValue(ctx=ctx, terms=((inv_c0, -mu0),), truncated=False)
        out = scale * series
        if self.truncated and not out.truncated:
            out = HyperValue(ctx=ctx, terms=out.terms, truncated=True)
        return out

    def __truediv__(self, other) -> "HyperValue":
        rhs = self._coerce(other)
        if rhs is NotImplemented:
            return NotImplemented
        return self * rhs.inv()

    def __rtruediv__(self, other) -> "HyperValue":
        rhs = self._coerce(other)
        if rhs is NotImplemented:
            return NotImplemented
        return rhs * self.inv()

    def __pow__(self, k: int) -> "HyperValue":
        if not isinstance(k, int):
            return NotImplemented
        if k == 0:
            return self.ctx.constant(1)
        base = self if k > 0 else self.inv()
        out = base
        for _ in range(abs(k) - 1):
            out = out * base
        return out

    def __abs__(self) -> "HyperValue":
        return -self if self.sign() < 0 else self

    # --- order ------------------------------------------------------------------
    def compare(self, other) -> Ordering:
        """Sign of self - other, from the leading surviving term.

        Nonzero differences order reliably even under truncation (the
        retained leading terms dominate anything dropped).  An exactly
        zero difference is only called Equal when neither side carries
        the truncated flag; otherwise equality is refused.
        """
        rhs = self._coerce(other)
        diff = self - rhs
        if diff.is_zero:
            if self.truncated or rhs.truncated:
                raise TruncationAmbiguous(
                    "difference vanished but a truncated tail could hide either way"
                )
            return Ordering.EQUAL
        return Ordering.LESS if diff.sign() < 0 else Ordering.GREATER

    def __lt__(self, other) -> bool:
        return self.compare(other) is Ordering.LESS

    def __le__(self, other) -> bool:
        return self.compare(other) is not Ordering.GREATER

    def __gt__(self, other) -> bool:
        return self.compare(other) is Ordering.GREATER

    def __ge__(self, other) -> bool:
        return self.compare(other) is not Ordering.LESS

    # --- standard structure ---------------------------------------------------
    def standard_part(self) -> Coefficient:
        """Coefficient of the unit monomial; requires a finite value."""
        if not self.is_finite:
            raise NotFinite("standard part undefined on infinite values")
        return self.coefficient_at(UNIT_PAIR)

    def approx_eq(self, other) -> bool:
        """True when self - other is zero or purely infinitesimal."""
        rhs = self._coerce(other)
        diff = self - rhs
        return all(pair.is_infinitesimal for _, pair in diff.terms)

    def classify(self) -> tuple[Classification, int]:
        """Coarse size class plus sign; zero counts as (infinitesimal, 0)."""
        if not self.terms:
            return (Classification.INFINITESIMAL, 0)
        _, pair = self.terms[0]
        if pair.is_infinite:
            kind = Classification.INFINITE
        elif pair.is_unit:
            kind = Classification.APPRECIABLE
        else:
            kind = Classification.INFINITESIMAL
        return (kind, self.sign())

    # --- floor -----------------------------------------------------------------
    def _hyperinteger_obstruction(self) -> str | None:
        """Why the infinite part fails to be a provable hyperinteger, or None.

        Terms eps**b * H**a with integer b <= 0 and integer a >= 0 are
        products of powers of H and 10**H.  Multiplied by a coefficient
        whose denominator divides a power of ten (when b < 0, the
        10**H factor absorbs it) they stay integers; anything else would
        need digits of H that the model does not determine.
        """
        for c, pair in self.terms:
            if not pair.is_infinite:
                continue
            if pair.b.denominator != 1 or pair.a.denominator != 1:
                return f"non-integer exponents {pair}"
            if pair.b > 0 or pair.a < 0:
                return f"mixed-scale monomial {pair}"
            if pair.b < 0:
                den = _denominator_of(c)
                if den is None or not _ten_smooth(den):
                    return f"coefficient {c} not a power-of-ten multiple"
            else:  # pure power of H
                if not _is_integral(c):
                    return f"coefficient {c} of a power of H is not an integer"
        return None

    def floor(self) -> "HyperValue":
        """Greatest hyperinteger <= self (within the representable class).

        The infinite part must already be a hyperinteger; the standard
        and infinitesimal parts then contribute an ordinary integer,
        with the infinitesimal's sign breaking the tie at integers.
        """
        reason = self._hyperinteger_obstruction()
        if reason is not None:
            raise FloorUndecidable(reason)
        f = self.coefficient_at(UNIT_PAIR)
        tail = self.infinitesimal_part()
        tail_sign = tail.sign()
        if _is_integral(f):
            if tail_sign == 0 and self.truncated:
                raise FloorUndecidable(
                    "integer standard part with a truncated tail of unknown sign"
                )
            q = f if tail_sign >= 0 else f - 1
        else:
            q = _coeff_floor(f)
        out = self.infinite_part() + self.ctx.constant(q)
        if self.truncated and not out.truncated:
            out = HyperValue(ctx=self.ctx, terms=out.terms, truncated=True)
        return out

    # --- decomposition ------------------------------------------------------------
    def decompose(self) -> tuple["HyperValue", Coefficient, "HyperValue"]:
        """Split into (whole, r, eps_part) with x = whole + r + eps_part.

        When the infinite part qualifies as a hyperinteger, the integer
        part of the standard coefficient is folded into `whole`, so that
        whole is a hyperinteger and r lands in [0, 1).  Note the whole
        part is chosen from the standard coefficient alone, not via
        floor(x): for 1 - eps this yields (1, 0, -eps), keeping r in
        range where a floor-based split could not.  Values whose
        infinite part is not a provable hyperinteger fall back to the
        raw split (see decompose_raw).
        """
        if self._hyperinteger_obstruction() is not None:
            return self.decompose_raw()
        whole_inf, f, tail = self.decompose_raw()
        q = _coeff_floor(f)
        with self.ctx.arith():
            r = f - self.ctx.coeff(q)
        return (whole_inf + self.ctx.constant(q), r, tail)

    def decompose_raw(self) -> tuple["HyperValue", Coefficient, "HyperValue"]:
        """(infinite part, unit coefficient, infinitesimal part), verbatim."""
        return (
            self.infinite_part(),
            self.coefficient_at(UNIT_PAIR),
            self.infinitesimal_part(),
        )

    # --- rendering -----------------------------------------------------------------
    def __str__(self) -> str:
        return format_value(self)

    def __repr__(self) -> str:
        flag = ", truncated" if self.truncated else ""
        return f"<HyperValue {format_value(self)}{flag}>"


def _denominator_of(c: Coefficient) -> int | None:
    if isinstance(c, Fraction):
        return c.denominator
    if isinstance(c, Decimal) and c.is_finite():
        return Fraction(c).denominator
    return None


def _ten_smooth(n: int) -> bool:
    for p in (2, 5):
        while n % p == 0:
            n //= p
    return n == 1


def _is_integral(c: Coefficient) -> bool:
    if isinstance(c, Fraction):
        return c.denominator == 1
    return c == c.to_integral_value()


def _coeff_floor(c: Coefficient):
    if isinstance(c, Fraction):
        return math.floor(c)
    return c.to_integral_value(rounding=ROUND_FLOOR)


# --- functional aliases mirroring the operation names -------------------------------

def add(x: HyperValue, y: HyperValue) -> HyperValue:
    return x + y


def sub(x: HyperValue, y: HyperValue) -> HyperValue:
    return x - y


def neg(x: HyperValue) -> HyperValue:
    return -x


def mul(x: HyperValue, y: HyperValue) -> HyperValue:
    return x * y


def div(x: HyperValue, y: HyperValue) -> HyperValue:
    return x / y


def inv(x: HyperValue) -> HyperValue:
    return x.inv()


def compare(x: HyperValue, y) -> Ordering:
    return x.compare(y)


def standard_part(x: HyperValue) -> Coefficient:
    return x.standard_part()


def approx_eq(x: HyperValue, y) -> bool:
    return x.approx_eq(y)


def classify(x: HyperValue) -> tuple[Classification, int]:
    return x.classify()


def decompose(x: HyperValue):
    return x.decompose()


def decompose_raw(x: HyperValue):
    return x.decompose_raw()


def floor(x: HyperValue) -> HyperValue:
    return x.floor()


def nines(ctx: NumContext, n: int) -> HyperValue:
    """0.99...9 with n nines, built by summing digit contributions."""
    if n < 0:
        raise ValueError("digit count must be non-negative")
    out = ctx.zero()
    for j in range(1, n + 1):
        out = out + ctx.monomial(Fraction(9, 10**j), 0, 0)
    return out


def nines_hyper(ctx: NumContext) -> HyperValue:
    """The extended string of nines running through the H-th place: 1 - eps."""
    return ctx.constant(1) - ctx.tau()


# --- canonical text form ------------------------------------------------------------

def _format_coeff(c: Coefficient) -> str:
    return str(c)


def _format_monomial(pair: ExponentPair) -> str:
    parts = []
    if pair.b != 0:
        parts.append("eps" if pair.b == 1 else f"eps^{pair.b}")
    if pair.a != 0:
        parts.append("H" if pair.a == 1 else f"H^{pair.a}")
    return "*".join(parts)


def format_value(x: HyperValue) -> str:
    """Canonical text: terms largest-first, e.g. '1 - eps' or '2*H + 1'.

    The printed form re-parses to the same value in the shell language.
    """
    if not x.terms:
        return "0"
    chunks: list[str] = []
    for i, (c, pair) in enumerate(x.terms):
        negative = c < 0
        mag = c.copy_abs() if isinstance(c, Decimal) else abs(c)
        mono = _format_monomial(pair)
        if mono and mag == 1:
            body = mono
        elif mono:
            body = f"{_format_coeff(mag)}*{mono}"
        else:
            body = _format_coeff(mag)
        if i == 0:
            chunks.append(f"-{body}" if negative else body)
        elif negative:
            chunks.append(f"- {body}")
        else:
            chunks.append(f"+ {body}")
    return " ".join(chunks)


# --- JSON round trip -----------------------------------------------------------------

def to_json(x: HyperValue) -> dict:
    """Serializable dict, terms leading-first; exact mode round-trips bit-for-bit."""
    return {
        "truncated": x.truncated,
        "terms": [
            {"c": str(c), "b": str(pair.b), "a": str(pair.a)}
            for c, pair in x.terms
        ],
    }


def from_json(ctx: NumContext, data: dict) -> HyperValue:
    terms = []
    for item in data["terms"]:
        if ctx.mode == "exact":
            c: Coefficient = Fraction(item["c"])
        else:
            c = Decimal(item["c"])
        pair = ExponentPair(Fraction(item["b"]), Fraction(item["a"]))
        terms.append((c, pair))
    out = ctx.from_terms(terms, truncated=bool(data["truncated"]))
    return out
