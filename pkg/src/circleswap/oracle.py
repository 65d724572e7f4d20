"""Exact reference implementation of the market math.

Everything here runs in unbounded rational arithmetic.  Square roots are
never evaluated numerically: a value (p + q*sqrt(d))/s is carried as a
QuadraticSurd and every comparison resolves by sign analysis and
squaring, so the oracle itself is free of approximation error.  The
fixed-point engine is tested against these values within its documented
rounding envelope (1 base unit for amounts, 1 ulp for the scaling value).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from decimal import Decimal, localcontext
from fractions import Fraction

from .errors import NoAdmissibleRoot, QuadrantViolation

RationalLike = int | Fraction


def _sign_p_plus_q_root_d(p: int, q: int, d: int) -> int:
    """Sign of p + q*sqrt(d) for integers, exactly."""
    if q == 0 or d == 0:
        return (p > 0) - (p < 0)
    if q > 0:
        if p >= 0:
            return 1
        # p < 0: compare q*sqrt(d) with |p|
        lhs, rhs = q * q * d, p * p
        return (lhs > rhs) - (lhs < rhs)
    if p <= 0:
        return -1
    lhs, rhs = p * p, q * q * d
    return (lhs > rhs) - (lhs < rhs)


@dataclass(frozen=True)
class QuadraticSurd:
    """Exact value (p + q*sqrt(d)) / s with integer fields, s > 0, d >= 0.

    Perfect-square radicands collapse to the rational normal form (q = 0,
    d = 0); rational values therefore compare and hash like their Fraction
    counterparts would.
    """

    p: int
    q: int
    d: int
    s: int

    @staticmethod
    def make(p: int, q: int, d: int, s: int) -> "QuadraticSurd":
        if s == 0:
            raise ZeroDivisionError("surd denominator is zero")
        if d < 0:
            raise ValueError("negative radicand")
        if s < 0:
            p, q, s = -p, -q, -s
        root = math.isqrt(d)
        if q == 0 or d == 0 or root * root == d:
            p, q, d = p + q * root, 0, 0
        g = math.gcd(math.gcd(abs(p), abs(q)), s)
        if g > 1:
            p, q, s = p // g, q // g, s // g
        return QuadraticSurd(p, q, d, s)

    @staticmethod
    def from_rational(value: RationalLike) -> "QuadraticSurd":
        f = Fraction(value)
        return QuadraticSurd.make(f.numerator, 0, 0, f.denominator)

    @staticmethod
    def sqrt_of(value: RationalLike) -> "QuadraticSurd":
        f = Fraction(value)
        if f < 0:
            raise ValueError("negative radicand")
        # sqrt(n/m) = sqrt(n*m)/m
        return QuadraticSurd.make(0, 1, f.numerator * f.denominator, f.denominator)

    # -- predicates -------------------------------------------------------------

    def is_rational(self) -> bool:
        return self.q == 0

    def as_fraction(self) -> Fraction:
        if not self.is_rational():
            raise ValueError("value is irrational")
        return Fraction(self.p, self.s)

    def sign(self) -> int:
        return _sign_p_plus_q_root_d(self.p, self.q, self.d)

    # -- arithmetic ---------------------------------------------------------------

    def _coerce(self, other) -> "QuadraticSurd":
        if isinstance(other, QuadraticSurd):
            if other.q and self.q and other.d != self.d:
                raise ValueError("mixed radicands are not supported")
            return other
        return QuadraticSurd.from_rational(other)

    def __neg__(self) -> "QuadraticSurd":
        return QuadraticSurd.make(-self.p, -self.q, self.d, self.s)

    def __add__(self, other) -> "QuadraticSurd":
        o = self._coerce(other)
        d = self.d or o.d
        return QuadraticSurd.make(
            self.p * o.s + o.p * self.s,
            self.q * o.s + o.q * self.s,
            d,
            self.s * o.s,
        )

    __radd__ = __add__

    def __sub__(self, other) -> "QuadraticSurd":
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> "QuadraticSurd":
        return (-self) + other

    def __mul__(self, other) -> "QuadraticSurd":
        o = self._coerce(other)
        d = self.d or o.d
        return QuadraticSurd.make(
            self.p * o.p + self.q * o.q * d,
            self.p * o.q + self.q * o.p,
            d,
            self.s * o.s,
        )

    __rmul__ = __mul__

    def __truediv__(self, other) -> "QuadraticSurd":
        o = self._coerce(other)
        if o.sign() == 0:
            raise ZeroDivisionError("division by zero surd")
        # 1/((p + q*sqrt(d))/s) = s*(p - q*sqrt(d)) / (p^2 - q^2 d)
        d = self.d or o.d
        denom = o.p * o.p - o.q * o.q * d
        inv = QuadraticSurd.make(o.s * o.p, -o.s * o.q, d, denom)
        return self * inv

    # -- ordering -----------------------------------------------------------------

    def _diff_sign(self, other) -> int:
        return (self - other).sign()

    def __lt__(self, other) -> bool:
        return self._diff_sign(other) < 0

    def __le__(self, other) -> bool:
        return self._diff_sign(other) <= 0

    def __gt__(self, other) -> bool:
        return self._diff_sign(other) > 0

    def __ge__(self, other) -> bool:
        return self._diff_sign(other) >= 0

    def __eq__(self, other) -> bool:
        try:
            return self._diff_sign(other) == 0
        except (TypeError, ValueError):
            return NotImplemented

    def __hash__(self):
        if self.is_rational():
            return hash(self.as_fraction())
        return hash((self.p, self.q, self.d, self.s))

    # -- conversions ----------------------------------------------------------------

    def floor(self) -> int:
        if self.is_rational():
            return self.p // self.s
        # Seed from an integer-sqrt estimate with enough guard bits that the
        # truncation error stays below one, then pin with exact comparisons.
        g = max(32, (abs(self.q) // self.s).bit_length() + 2)
        guard = 1 << g
        est = (self.p * guard + self.q * math.isqrt(self.d * guard * guard)) // (
            self.s * guard
        )
        while self < est:
            est -= 1
        while self >= est + 1:
            est += 1
        return est

    def ceil(self) -> int:
        return -((-self).floor())

    def round_nearest(self) -> int:
        """Nearest integer, ties away from the floor."""
        return (self + Fraction(1, 2)).floor()

    def to_decimal(self, sig_digits: int) -> Decimal:
        """Correctly rounded Decimal with sig_digits significant digits."""
        guard = 10 ** (sig_digits + 10)
        scaled = (self * guard).floor()
        with localcontext() as ctx:
            ctx.prec = sig_digits
            ctx.rounding = "ROUND_HALF_UP"
            return +(Decimal(scaled) / Decimal(guard))

    def __float__(self) -> float:
        return (self.p + self.q * math.sqrt(self.d)) / self.s

    def __repr__(self) -> str:
        if self.is_rational():
            return f"QuadraticSurd({Fraction(self.p, self.s)})"
        return f"QuadraticSurd(({self.p} + {self.q}*sqrt({self.d}))/{self.s})"


# -- market ----------------------------------------------------------------------


@dataclass(frozen=True)
class RationalMarket:
    """A circle market in exact arithmetic.

    Reserves are base units; u0, u1 are the per-base-unit weights (the
    weighted coin coordinate is u * X), and the center is in coin units.
    For the scaled pair u_i = lambda_i * M / 10^25; for the flat pair
    u_i = lambda_i / 10^18.
    """

    x: Fraction
    y: Fraction
    u0: Fraction
    u1: Fraction
    center: Fraction = Fraction(10**9)

    @staticmethod
    def from_circle_pair(pair) -> "RationalMarket":
        c = pair.circle
        return RationalMarket(
            x=Fraction(pair.reserve0),
            y=Fraction(pair.reserve1),
            u0=Fraction(c.lambda0 * c.mu, 10**25),
            u1=Fraction(c.lambda1 * c.mu, 10**25),
        )

    @staticmethod
    def from_flat_pair(pair) -> "RationalMarket":
        return RationalMarket(
            x=Fraction(pair.reserve0),
            y=Fraction(pair.reserve1),
            u0=Fraction(pair.lambda0, 10**18),
            u1=Fraction(pair.lambda1, 10**18),
        )

    def cost(self) -> Fraction:
        return (self.u0 * self.x - self.center) ** 2 + (
            self.u1 * self.y - self.center
        ) ** 2

    def on_circle(self, radius_sq: RationalLike) -> bool:
        return self.cost() == Fraction(radius_sq)

    def _oriented(self, side_in: int) -> tuple[Fraction, Fraction, Fraction, Fraction]:
        if side_in == 0:
            return self.x, self.y, self.u0, self.u1
        if side_in == 1:
            return self.y, self.x, self.u1, self.u0
        raise ValueError(f"side must be 0 or 1, got {side_in}")

    def exact_swap(
        self,
        amount_in: RationalLike,
        side_in: int = 0,
        fee: RationalLike = Fraction(3, 1000),
    ) -> QuadraticSurd:
        """Exact output for amount_in on side_in, as the root of the circle."""
        amount_in = Fraction(amount_in)
        if amount_in == 0:
            return QuadraticSurd.from_rational(0)
        if amount_in < 0:
            raise ValueError("negative input")
        rin, rout, u_in, u_out = self._oriented(side_in)
        a1 = u_in * (rin + (1 - Fraction(fee)) * amount_in)
        if a1 >= self.center:
            raise QuadrantViolation("input pushes the weighted coordinate past center")
        rad = self.cost() - (a1 - self.center) ** 2
        if rad < 0:
            raise NoAdmissibleRoot("no real intersection in the quadrant")
        # u_out * (rout - dy) = center - sqrt(rad), the lower-left branch
        root = QuadraticSurd.sqrt_of(rad)
        return (root + u_out * rout - self.center) / u_out

    def exact_swap_in(
        self,
        amount_out: RationalLike,
        side_in: int = 0,
        fee: RationalLike = Fraction(3, 1000),
    ) -> QuadraticSurd:
        """Exact input on side_in required to withdraw amount_out."""
        amount_out = Fraction(amount_out)
        if amount_out == 0:
            return QuadraticSurd.from_rational(0)
        rin, rout, u_in, u_out = self._oriented(side_in)
        if amount_out < 0 or amount_out > rout:
            raise ValueError("output outside the reserve")
        b1 = u_out * (rout - amount_out)
        rad = self.cost() - (b1 - self.center) ** 2
        if rad < 0:
            raise QuadrantViolation("output unreachable inside the quadrant")
        root = QuadraticSurd.sqrt_of(rad)
        # u_in * (rin + (1-fee)*din) = center - sqrt(rad)
        return (self.center - root - u_in * rin) / (u_in * (1 - Fraction(fee)))

    def spot_price(self) -> Fraction:
        """Price of token0 in token1 per base unit, exact."""
        num = self.u0 * (self.center - self.u0 * self.x)
        den = self.u1 * (self.center - self.u1 * self.y)
        return num / den

    def boundary_slopes(self) -> tuple[QuadraticSurd, QuadraticSurd]:
        """Tangent-slope magnitudes at the two axis crossings of this cost.

        Returns (at y = 0, at x = 0) = (sqrt(cost - c^2)/c, c/sqrt(cost - c^2)),
        the price band the pool can span before one balance empties.
        """
        excess = self.cost() - self.center**2
        if excess < 0:
            raise NoAdmissibleRoot("circle does not reach the axes")
        root = QuadraticSurd.sqrt_of(excess)
        low = root / self.center
        high = QuadraticSurd.from_rational(self.center) / root
        return low, high


def exact_mu(
    x: RationalLike, y: RationalLike, lambda0: int, lambda1: int, r: int
) -> QuadraticSurd:
    """Exact admissible scaling value mu for reserves (x, y) in base units.

    The smaller quadratic root, rationalized so the surd sits in the
    denominator's conjugate: mu = 10^25 (20000-r) / (100 S + sqrt(Disc)).
    """
    x, y = Fraction(x), Fraction(y)
    if x < 0 or y < 0 or x + y == 0:
        raise ValueError("reserves must be nonnegative, not both zero")
    if not 10001 <= r <= 19999:
        raise ValueError(f"radius parameter out of range: {r}")
    s_lin = lambda0 * x + lambda1 * y
    q_sq = (lambda0 * x) ** 2 + (lambda1 * y) ** 2
    disc = 10**4 * s_lin * s_lin - (20000 - r) * q_sq
    if disc < 0:
        raise NoAdmissibleRoot("negative discriminant")
    numer = QuadraticSurd.from_rational(Fraction(10**25) * (20000 - r))
    denom = QuadraticSurd.sqrt_of(disc) + Fraction(100) * s_lin
    return numer / denom


def exact_mu_scaled_ceil(
    x: RationalLike, y: RationalLike, lambda0: int, lambda1: int, r: int
) -> int:
    """ceil(10^7 * exact_mu), the value the fixed-point engine must store."""
    return (exact_mu(x, y, lambda0, lambda1, r) * (10**7)).ceil()
