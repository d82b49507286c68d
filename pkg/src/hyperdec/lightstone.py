"""Extended decimal expansions over the H / eps grid.

A finite value whose terms sit on integer powers of eps has decimal
digits at three kinds of places: the standard fractional positions
1, 2, 3, ..., and for each block m >= 1 the positions m*H + j around the
m-th infinite stretch.  ``digit_at`` reads a single digit off with the
field floor; ``render`` prints the standard prefix plus one segment per
block, and ``parse`` inverts the printed form exactly.

Notation summary (one block shown):

    [sign] [int] "." prefix ["…"] [";" "…" digits]

Block digits carry their place implicitly: a digit marked with a
circumflex sits exactly at place m*H; with no mark the last digit does.
A leading "…" in a block means the first visible digit repeats over the
whole gap back to the end of the prefix.  The prefix "…" means the last
prefix digit repeats forever in the standard positions; blockless, that
is the classical reading (".999…" parses to 1).

Digits the floor cannot certify (an H-scaled coefficient, a coefficient
whose denominator is not supported by a power of ten) raise rather than
print something plausible.
"""

import math
import re
from dataclasses import dataclass
from fractions import Fraction

from .errors import (
    FloorUndecidable,
    NotFinite,
    PositionOutOfModel,
    UnsupportedNotation,
)
from .hyperfield import (
    ExponentPair,
    HyperValue,
    NumContext,
    UNIT_PAIR,
    nines,
    nines_hyper,
)

MINUS = "−"
HAT = "̂"
ELLIPSIS = "…"

_BLOCK_CAP = 40


@dataclass(frozen=True)
class Position:
    """Decimal place m*H + offset; block 0 is the standard prefix."""

    block: int
    offset: int

    def __post_init__(self):
        if self.block < 0:
            raise PositionOutOfModel("block index must be nonnegative")
        if self.block == 0 and self.offset < 1:
            raise PositionOutOfModel(
                "standard positions count fractional places and start at 1"
            )


def _as_position(position) -> Position:
    if isinstance(position, Position):
        return position
    if isinstance(position, int):
        return Position(0, position)
    if isinstance(position, tuple) and len(position) == 2:
        return Position(int(position[0]), int(position[1]))
    raise PositionOutOfModel(f"not a digit position: {position!r}")


def _place_scale(ctx: NumContext, pos: Position) -> HyperValue:
    # 10**(block*H + offset) as an exact monomial
    return ctx.monomial(Fraction(10) ** pos.offset, -pos.block, 0)


def digit_at(x: HyperValue, position) -> int:
    """Digit of x at the given place; x must lie in [0, 1).

    The digit is st(floor(x * 10^p) - 10 * floor(x * 10^(p-1))).  Values
    with fractional exponents live off the decimal grid entirely; values
    whose floor is not certifiable raise FloorUndecidable.
    """
    pos = _as_position(position)
    ctx = x.ctx
    for _, pair in x.terms:
        if pair.b.denominator != 1 or pair.a.denominator != 1:
            raise PositionOutOfModel(
                "fractional exponents have no decimal digit places"
            )
    if x.sign() < 0 or not (x < ctx.constant(1)):
        raise PositionOutOfModel("digit_at needs 0 <= x < 1")
    hi = _place_scale(ctx, pos)
    lo = ctx.monomial(Fraction(10) ** (pos.offset - 1), -pos.block, 0)
    d = ((x * hi).floor() - 10 * (x * lo).floor()).standard_part()
    q = int(d)
    if q != d or not 0 <= q <= 9:
        raise RuntimeError(f"digit extraction produced {d}; floor misbehaved")
    return q


# --------------------------------------------------------------------------
# rendering
# --------------------------------------------------------------------------

def _tail_run(r: Fraction):
    """(u, d) with the digits of r constant at d from position u+1 on.

    Exists iff the denominator divides 9 * 10^u for some u; d is then a
    single digit 0..8 (a rational's own expansion never ends in all 9s).
    Returns None when there is no single-digit tail.
    """
    q = r.denominator
    threes = 0
    while q % 3 == 0:
        q //= 3
        threes += 1
    if threes > 2:
        return None
    twos = 0
    while q % 2 == 0:
        q //= 2
        twos += 1
    fives = 0
    while q % 5 == 0:
        q //= 5
        fives += 1
    if q != 1:
        return None
    u = max(twos, fives)
    shifted = r * 10**u
    frac = shifted - math.floor(shifted)
    d = frac * 9
    assert d.denominator == 1 and 0 <= d <= 8
    return (u, int(d))


def _grid_check(x: HyperValue) -> None:
    for _, pair in x.terms:
        if pair.b.denominator != 1 or pair.a.denominator != 1:
            raise PositionOutOfModel(
                "fractional exponents sit off the decimal grid"
            )
        if pair.b < 0 or (pair.b == 0 and pair.a > 0):
            raise NotFinite("infinite values have no decimal rendering")
        if pair.a != 0:
            raise PositionOutOfModel(
                "H-scaled coefficients have no printable digit expansion"
            )


def render(x: HyperValue, window: int = 3) -> str:
    """Extended decimal string for a finite on-grid value.

    window sets how many places are shown before a repeating stretch is
    elided, both in the standard prefix and at each block boundary.
    """
    if window < 1:
        raise ValueError("window must be at least 1")
    _grid_check(x)
    if x.is_zero:
        return "0"
    ctx = x.ctx
    sign = MINUS if x.sign() < 0 else ""
    y0 = -x if x.sign() < 0 else x
    n = int(y0.floor().standard_part())
    y = y0 - n
    blocks_max = 0
    for _, pair in y.terms:
        if pair.b > 0:
            blocks_max = max(blocks_max, int(pair.b))
    r = Fraction(y.coefficient_at(UNIT_PAIR))
    tail = _tail_run(r)

    if blocks_max == 0:
        if tail is None:
            raise UnsupportedNotation(
                f"{r} has no terminating or single-repeating-digit "
                "expansion; this notation cannot spell it"
            )
        u, d = tail
        if d == 0:
            digits = [digit_at(y, j) for j in range(1, u + 1)]
            if not digits:
                return f"{sign}{n}"
            body = "".join(str(v) for v in digits)
            return f"{sign}{n if n else ''}.{body}"
        length = max(window, u + 3)
        digits = [digit_at(y, j) for j in range(1, length + 1)]
        body = "".join(str(v) for v in digits)
        return f"{sign}{n if n else ''}.{body}{ELLIPSIS}"

    if tail is None or tail[1] != 0:
        # the block digits would need the full expansion of r; force the
        # honest refusal out of the floor machinery
        digit_at(y, Position(1, 0))
        raise RuntimeError("block digits should have been undecidable")

    u, _ = tail
    length = max(window, u)
    digits = [digit_at(y, j) for j in range(1, length + 1)]
    ellipsis = False
    if len(digits) >= 3 and len(set(digits[-3:])) == 1:
        last = digits[-1]
        t = y - ctx.constant(r)
        scaled = r * 10**length
        if t.sign() < 0 and scaled.denominator == 1:
            ellipsis = last == 9
        elif last <= 8:
            ellipsis = scaled - math.floor(scaled) == Fraction(last, 9)
    body = "".join(str(v) for v in digits)
    segments = [
        _render_block(y, m, window) for m in range(1, blocks_max + 1)
    ]
    parts = "".join(";" + seg for seg in segments)
    dots = ELLIPSIS if ellipsis else ""
    return f"{sign}{n if n else ''}.{body}{dots}{parts}"


def _render_block(y: HyperValue, m: int, window: int) -> str:
    ctx = y.ctx
    shifted = y * ctx.monomial(1, -m, 0)
    c = Fraction(shifted.coefficient_at(UNIT_PAIR))
    width = len(str(int(abs(c)))) if abs(c) >= 1 else 1
    j_lo = min(-window, -(width + 1))

    j_hi = None
    for j in range(0, _BLOCK_CAP + 1):
        scale = ctx.monomial(Fraction(10) ** j, -m, 0)
        prod = y * scale
        rem = prod - prod.floor()
        if rem.coefficient_at(UNIT_PAIR) == 0:
            j_hi = j
            break
    open_ended = j_hi is None
    if open_ended:
        j_hi = _BLOCK_CAP

    digits = [digit_at(y, Position(m, j)) for j in range(j_lo, j_hi + 1)]
    run = 1
    # collapse the repeated stretch, but never past the place m*H digit:
    # everything after the anchor is positional
    limit = -j_lo + 1
    while run < limit and run < len(digits) and digits[run] == digits[0]:
        run += 1
    visible = digits[run - 1 :]
    hat_idx = -j_lo - (run - 1)  # index of the place m*H digit in visible
    use_hat = not (j_hi == 0 and hat_idx == len(visible) - 1 and len(visible) > 1)
    chars = []
    for i, v in enumerate(visible):
        chars.append(str(v))
        if use_hat and i == hat_idx:
            chars.append(HAT)
    tail_dots = ELLIPSIS if open_ended else ""
    return ELLIPSIS + "".join(chars) + tail_dots


# --------------------------------------------------------------------------
# parsing
# --------------------------------------------------------------------------

_MACRO = re.compile(r"nines\(\s*(H|\d+)\s*\)")
_HEAD = re.compile(r"(\d*)(?:\.(\d*)(…?))?")


def parse(ctx: NumContext, text: str) -> HyperValue:
    """Read an extended decimal string back into a value.

    Accepts the exact output of render plus ASCII conveniences: "..." for
    the ellipsis, "^" after a digit for the place mark, "-" for the sign.
    One block at most; strings whose digit places cannot be pinned down
    raise UnsupportedNotation.
    """
    s = text.strip().replace("...", ELLIPSIS)
    macro = _MACRO.fullmatch(s)
    if macro:
        arg = macro.group(1)
        return nines_hyper(ctx) if arg == "H" else nines(ctx, int(arg))
    negative = s.startswith(("-", MINUS))
    if negative:
        s = s[1:]
    if not s:
        raise UnsupportedNotation("empty string")
    segments = s.split(";")
    head = segments[0]
    block_texts = segments[1:]
    if len(block_texts) > 1:
        raise UnsupportedNotation(
            "multi-block strings are not supported; give one block"
        )

    match = _HEAD.fullmatch(head)
    if not match or (not match.group(1) and match.group(2) is None):
        raise UnsupportedNotation(f"not decimal notation: {text!r}")
    int_digits, frac_digits, head_dots = match.groups()
    if match.group(2) is None and block_texts:
        raise UnsupportedNotation("a block needs a decimal point in front")
    n = int(int_digits) if int_digits else 0
    frac_digits = frac_digits or ""
    repeat = bool(head_dots)
    if repeat and not frac_digits:
        raise UnsupportedNotation("a repeat mark needs a digit before it")

    length = len(frac_digits)
    base = Fraction(n)
    for i, ch in enumerate(frac_digits, start=1):
        base += Fraction(int(ch), 10**i)

    if not block_texts:
        if repeat:
            base += Fraction(int(frac_digits[-1]), 9) * Fraction(1, 10**length)
        value = ctx.from_terms([(base, UNIT_PAIR)])
        return -value if negative else value

    gap, digits, hat_idx = _parse_block(block_texts[0])
    anchor = hat_idx if hat_idx is not None else len(digits) - 1
    tau_coeff = Fraction(0)
    for i in range(1, len(digits)):
        tau_coeff += digits[i] * Fraction(10) ** (anchor - i)
    if gap:
        g = digits[0]
        if repeat and int(frac_digits[-1]) != g:
            raise UnsupportedNotation(
                "the prefix repeat digit conflicts with the block run digit"
            )
        # g fills every place from the end of the prefix through H - anchor
        base += Fraction(g, 9) * Fraction(1, 10**length)
        tau_coeff -= Fraction(g, 9) * Fraction(10) ** anchor
    else:
        if repeat:
            raise UnsupportedNotation(
                "a prefix repeat cannot meet a block with absolute places"
            )
        tau_coeff += digits[0] * Fraction(10) ** anchor
    value = ctx.from_terms(
        [(base, UNIT_PAIR), (tau_coeff, ExponentPair(1, 0))]
    )
    return -value if negative else value


def _parse_block(text: str):
    if not text:
        raise UnsupportedNotation("empty block")
    gap = text.startswith(ELLIPSIS)
    if gap:
        text = text[len(ELLIPSIS) :]
    if text.endswith(ELLIPSIS):
        raise UnsupportedNotation(
            "the block digits do not terminate; the value is not readable "
            "from this string"
        )
    digits = []
    hat_idx = None
    for ch in text:
        if ch.isdigit():
            digits.append(int(ch))
        elif ch in (HAT, "^"):
            if not digits:
                raise UnsupportedNotation("place mark with no digit before it")
            if hat_idx is not None:
                raise UnsupportedNotation("more than one place mark")
            hat_idx = len(digits) - 1
        else:
            raise UnsupportedNotation(f"unexpected character {ch!r} in block")
    if not digits:
        raise UnsupportedNotation("a block needs at least one digit")
    return gap, digits, hat_idx
