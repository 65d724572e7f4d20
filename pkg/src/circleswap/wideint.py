"""Unsigned 256/512-bit integer arithmetic.

All balances and scaled intermediates of the market math live in these
fixed widths.  Overflow is a signaled error, never a silent wrap: the
swap equations are only meaningful if every intermediate stays inside
its documented word size.

The 512-by-256 division runs a Newton-reciprocal iteration
(x' = x * (2 - d*x), quadratically convergent) instead of schoolbook
long division; the iteration count is exposed so tests can check the
digit-doubling behaviour.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import DivisionByZero, QuotientOverflow, WideOverflow

U256_BITS = 256
U256_MAX = (1 << 256) - 1
U512_MAX = (1 << 512) - 1


def check_u256(value: int, what: str = "value") -> int:
    """Return value unchanged, raising WideOverflow if outside [0, 2^256)."""
    if value < 0 or value > U256_MAX:
        raise WideOverflow(f"{what} outside 256-bit range: {value}")
    return value


@dataclass(frozen=True)
class Word512:
    """Unsigned 512-bit value as two 256-bit halves (value = hi*2^256 + lo)."""

    hi: int
    lo: int

    def __post_init__(self) -> None:
        check_u256(self.hi, "hi word")
        check_u256(self.lo, "lo word")

    @classmethod
    def from_int(cls, value: int) -> "Word512":
        if value < 0 or value > U512_MAX:
            raise WideOverflow(f"value outside 512-bit range: {value}")
        return cls(hi=value >> 256, lo=value & U256_MAX)

    def to_int(self) -> int:
        return (self.hi << 256) | self.lo

    def __int__(self) -> int:
        return self.to_int()


def mul_wide(a: int, b: int) -> Word512:
    """Full-width product of two 256-bit words; always exact."""
    check_u256(a, "multiplicand")
    check_u256(b, "multiplier")
    return Word512.from_int(a * b)


# Newton-reciprocal division -------------------------------------------------
#
# For a divisor normalized to [2^255, 2^256) we approximate
# R = floor(2^512 / d_norm) by iterating x' = x*(2*2^512 - d_norm*x) / 2^512,
# seeded from the top 16 bits of the divisor.  Each step roughly squares the
# relative error, so the correct-bit count at least doubles per step until
# the value is exact up to a couple of ulps, which a final correction fixes.
# From a 1-bit seed this takes at most 10 steps for 256-bit divisors; the
# 16-bit seed used here converges in about 6.

_SEED_BITS = 16
MAX_RECIPROCAL_ITERATIONS = 10


def _newton_reciprocal(d_norm: int) -> tuple[int, int]:
    """Return (floor(2^512 / d_norm), iterations) for 2^255 <= d_norm < 2^256."""
    top = d_norm >> (256 - _SEED_BITS)
    x = (1 << (256 + _SEED_BITS)) // top  # ~2^512/d_norm, >= SEED_BITS-1 bits correct
    iterations = 0
    while iterations < MAX_RECIPROCAL_ITERATIONS:
        iterations += 1
        e = (1 << 513) - ((d_norm * x) >> 255)  # 2 - d*x/2^512, scaled by 2^257
        x_next = (x * e) >> 257
        converged = -4 <= x_next - x <= 4  # floor rounding leaves a few-ulp wobble
        x = x_next
        if converged:
            break
    # Land exactly on floor(2^512 / d_norm); the loop leaves us within a few ulps.
    two512 = 1 << 512
    while x * d_norm > two512:
        x -= 1
    while (x + 1) * d_norm <= two512:
        x += 1
    return x, iterations


def divmod_512_by_256(n: Word512, d: int) -> tuple[int, int]:
    """Exact (quotient, remainder) of a 512-bit value by a 256-bit divisor.

    Raises DivisionByZero when d = 0 and QuotientOverflow when the quotient
    would not fit 256 bits (exactly when n.hi >= d).
    """
    check_u256(d, "divisor")
    if d == 0:
        raise DivisionByZero("divmod_512_by_256 by zero")
    if n.hi >= d:
        raise QuotientOverflow(f"quotient of {n.to_int()} / {d} exceeds 256 bits")
    value = n.to_int()
    if d & (d - 1) == 0:
        shift = d.bit_length() - 1
        return value >> shift, value & (d - 1)

    s = 256 - d.bit_length()
    d_norm = d << s
    recip, _ = _newton_reciprocal(d_norm)
    shifted = value << s  # < d_norm * 2^256 <= 2^512 by the overflow check
    q = (shifted * recip) >> 512
    r = shifted - q * d_norm
    while r >= d_norm:  # recip is a floor, so q can be short by a couple
        q += 1
        r -= d_norm
    return q, r >> s


def muldiv(a: int, b: int, c: int) -> int:
    """floor(a*b/c) computed through the 512-bit intermediate.

    Never truncates before the division; raises on c = 0 or a quotient
    that does not fit 256 bits.
    """
    q, _ = divmod_512_by_256(mul_wide(a, b), c)
    return q


def muldiv_ceil(a: int, b: int, c: int) -> int:
    """ceil(a*b/c), same domain rules as muldiv."""
    q, r = divmod_512_by_256(mul_wide(a, b), c)
    if r:
        q = check_u256(q + 1, "rounded quotient")
    return q
