"""Market configuration: packed words, weights, token ordering, price band.

The circle configuration of a pair travels as one 224-bit word laid out

    ICO(8) | D0(56) | D1(56) | rSquare(16) | lambda0(16) | lambda1(16) | M(56)

with the radius parameter r = 10000 + rSquare (radius^2 = r * 10^14), the
decimal-compensation factors Di = 10^(18-di) for tokens with di decimals,
and the scaling variable stored as M = 10^7 * mu.  Reserves plus the last
update timestamp pack into a 224-bit word as well:

    reserve0(96) | reserve1(96) | blockTimestampLast(32)
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from decimal import Decimal, localcontext
from fractions import Fraction

from .errors import FieldOverflow, ZeroAmount
from .roots import isqrt256
from .wideint import check_u256

R_SQUARE_MIN = 1
R_SQUARE_MAX = 9999
# Di = 10^(18-di) for di in [2, 18]: tokens must have at least two decimals.
_DECIMAL_FACTORS = frozenset(10**i for i in range(17))
LAMBDA_MAX = (1 << 16) - 1
MU_MAX = (1 << 56) - 1
D_MAX = (1 << 56) - 1
RESERVE_MAX = (1 << 96) - 1
TIMESTAMP_MASK = (1 << 32) - 1


def _check_field(value: int, bits: int, name: str) -> int:
    if value < 0 or value >> bits:
        raise FieldOverflow(f"{name} does not fit {bits} bits: {value}")
    return value


@dataclass(frozen=True)
class CircleParams:
    """One pair's circle configuration (see module docstring for the layout)."""

    ico: int = 0
    d0: int = 1
    d1: int = 1
    r_square: int = 6000
    lambda0: int = 1
    lambda1: int = 1
    mu: int = 0  # stored M = ceil(10^7 * mu)

    def radius_param(self) -> int:
        """The r in radius^2 = r * 10^14."""
        return 10000 + self.r_square

    def validate(self) -> "CircleParams":
        """Semantic checks beyond raw bit widths, for live market use."""
        if not R_SQUARE_MIN <= self.r_square <= R_SQUARE_MAX:
            raise FieldOverflow(f"rSquare must be in [1, 9999], got {self.r_square}")
        if self.lambda0 < 1 or self.lambda1 < 1:
            raise FieldOverflow("lambda weights must be >= 1")
        for d in (self.d0, self.d1):
            if d not in _DECIMAL_FACTORS:
                raise FieldOverflow(f"decimal factor must be a power of ten < 2^56: {d}")
        return self


def pack_circle(p: CircleParams) -> int:
    """CircleParams -> 224-bit word (as a 256-bit value)."""
    word = (
        (_check_field(p.ico, 8, "ICO") << 216)
        | (_check_field(p.d0, 56, "D0") << 160)
        | (_check_field(p.d1, 56, "D1") << 104)
        | (_check_field(p.r_square, 16, "rSquare") << 88)
        | (_check_field(p.lambda0, 16, "lambda0") << 72)
        | (_check_field(p.lambda1, 16, "lambda1") << 56)
        | _check_field(p.mu, 56, "mu")
    )
    return check_u256(word)


def unpack_circle(word: int) -> CircleParams:
    """224-bit word -> CircleParams (inverse of pack_circle)."""
    _check_field(word, 224, "circle word")
    return CircleParams(
        ico=(word >> 216) & 0xFF,
        d0=(word >> 160) & D_MAX,
        d1=(word >> 104) & D_MAX,
        r_square=(word >> 88) & 0xFFFF,
        lambda0=(word >> 72) & LAMBDA_MAX,
        lambda1=(word >> 56) & LAMBDA_MAX,
        mu=word & MU_MAX,
    )


@dataclass(frozen=True)
class PackedReserves:
    """Reserves in raw token units plus the last oracle-update timestamp."""

    reserve0: int = 0
    reserve1: int = 0
    block_timestamp_last: int = 0


def pack_reserves(r: PackedReserves) -> int:
    word = (
        (_check_field(r.reserve0, 96, "reserve0") << 128)
        | (_check_field(r.reserve1, 96, "reserve1") << 32)
        | _check_field(r.block_timestamp_last, 32, "timestamp")
    )
    return word


def unpack_reserves(word: int) -> PackedReserves:
    _check_field(word, 224, "reserve word")
    return PackedReserves(
        reserve0=(word >> 128) & RESERVE_MAX,
        reserve1=(word >> 32) & RESERVE_MAX,
        block_timestamp_last=word & TIMESTAMP_MASK,
    )


def weighted_reserves(p: CircleParams) -> tuple[int, int]:
    """The packed-weight products (D0*lambda0*M, D1*lambda1*M).

    Each fits 128 bits by the field widths (56 + 16 + 56); the pair of
    them is what swap verification multiplies the raw reserves by.
    """
    w0 = p.d0 * p.lambda0 * p.mu
    w1 = p.d1 * p.lambda1 * p.mu
    for w in (w0, w1):
        if w >> 128:
            raise FieldOverflow(f"weight product exceeds 128 bits: {w}")
    return w0, w1


# Token ordering --------------------------------------------------------------

TOKEN_ID_MAX = (1 << 160) - 1


def order_tokens(
    a: int, b: int, lambda_a: int, lambda_b: int
) -> tuple[int, int, int, int]:
    """Canonical (token0, token1, lambda0, lambda1) with token0 < token1.

    Tokens are 160-bit opaque identifiers ordered numerically; the lambda
    weights follow their tokens when the pair is flipped.
    """
    for t in (a, b):
        if not 0 <= t <= TOKEN_ID_MAX:
            raise FieldOverflow(f"token id outside 160-bit range: {t}")
    if a == b:
        raise ValueError("identical tokens cannot form a pair")
    if a < b:
        return a, b, lambda_a, lambda_b
    return b, a, lambda_b, lambda_a


# Lambda derivation -----------------------------------------------------------


def derive_lambdas(x: int, y: int) -> tuple[int, int]:
    """Small weights (lambda_x, lambda_y) with lambda_x * x ~ lambda_y * y.

    x and y are deposits of equal market value, so the weights encode the
    value ratio y/x.  When the ratio reduces exactly to a fraction with
    both parts below 2^16 that reduction is returned; otherwise the best
    continued-fraction approximation with both parts below 2^16 is used
    (relative mismatch below 2^-15 for ratios inside the representable
    band [1/65535, 65535]).
    """
    if x <= 0 or y <= 0:
        raise ZeroAmount("deposits must be positive to derive weights")
    g = math.gcd(x, y)
    xr, yr = x // g, y // g
    if xr <= LAMBDA_MAX and yr <= LAMBDA_MAX:
        return yr, xr
    # Approximate the smaller/larger ratio so numerator <= denominator <= 2^16-1.
    if y <= x:
        frac = Fraction(y, x).limit_denominator(LAMBDA_MAX)
        lam_x, lam_y = frac.numerator, frac.denominator
    else:
        frac = Fraction(x, y).limit_denominator(LAMBDA_MAX)
        lam_x, lam_y = frac.denominator, frac.numerator
    return max(lam_x, 1), max(lam_y, 1)


# Router circle encoding ------------------------------------------------------


def router_circle_encoding(r_square: int, lambda0: int, lambda1: int) -> int:
    """The router's liquidity parameter rSquare*2^32 + lambda0*2^16 + lambda1."""
    return (
        (_check_field(r_square, 16, "rSquare") << 32)
        | (_check_field(lambda0, 16, "lambda0") << 16)
        | _check_field(lambda1, 16, "lambda1")
    )


def router_circle_decoding(word: int) -> tuple[int, int, int]:
    _check_field(word, 48, "router circle word")
    return (word >> 32) & 0xFFFF, (word >> 16) & 0xFFFF, word & 0xFFFF


# Boundary prices -------------------------------------------------------------

_PRICE_SIG_DIGITS = 10
_ROOT_GUARD_DIGITS = 30


def price_bounds(r: int) -> tuple[Decimal, Decimal]:
    """(min_price, max_price) of the band allowed by radius parameter r.

    The maximum relative price is reached when one balance hits zero:
    max = 100/sqrt(r - 10000), and min = sqrt(r - 10000)/100 = 1/max.
    Both are rounded half-up to 10 significant digits from a root carried
    with 30 guard digits, so min * max = 1 holds to within 1e-9 relative.
    """
    if not 10001 <= r <= 19999:
        raise ValueError(f"radius parameter must be in [10001, 19999], got {r}")
    k = r - 10000
    root = isqrt256(k * 10 ** (2 * _ROOT_GUARD_DIGITS))  # floor(sqrt(k)*10^30)
    with localcontext() as ctx:
        ctx.prec = _PRICE_SIG_DIGITS
        ctx.rounding = "ROUND_HALF_UP"
        scale = Decimal(10) ** _ROOT_GUARD_DIGITS
        min_price = Decimal(root) / (scale * 100)
        max_price = Decimal(100) * scale / Decimal(root)
    return min_price, max_price
