"""Circle pair with multiplicative scaling (Approach I).

The market lives on the lower-left arc of a circle centered at
(10^9, 10^9) in weighted coin coordinates (mu*lambda0*x, mu*lambda1*y).
All math here runs in one canonical integer scale

    W = M * lambda * X * 10^3        (X in base units, M = 10^7 * mu)

where the center becomes C = 10^37 and radius^2 = (10000 + rSquare) * 10^70.
That single scale is equivalent to multiplying the coin-unit circle
equation by 10^56 and absorbs both the 7 fractional digits of mu and the
18 fractional digits of the balances, so every check below is an exact
integer comparison.

A trade in dx (side 0) is accepted iff

    (Mλ0(1000X + 997dx) - C)^2 + (Mλ1(Y - dy)*10^3 - C)^2
        <= (Mλ0*X*10^3 - C)^2 + (Mλ1*Y*10^3 - C)^2

i.e. the cost never expands, with only 99.7% of the input credited to the
curve while the full input lands in reserves; the 0.3% gap is the trade
fee that mu-recalibration later converts into liquidity growth.

Tokens with fewer than 18 decimals are handled at the operation boundary:
amounts cross the API in base units (10^-18 coin) but must be whole raw
token units, and quote maximality is taken over raw units.  Internally
lambda*X(base) and (lambda*D)*x(raw) are the same number, so the curve
math is unchanged.

Rounding always favors the pool: liquidity mints and payouts floor,
required inputs ceil, and M is the exact ceiling of the admissible root.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from fractions import Fraction

from .errors import (
    BalanceDeficit,
    DegeneratePrice,
    DepositTooSmall,
    FieldOverflow,
    InsufficientLiquidity,
    InsufficientReserve,
    InvariantViolation,
    NoAdmissibleRoot,
    QuadrantViolation,
    RoundingToZero,
    UnestablishedPair,
    WideOverflow,
    ZeroAmount,
)
from .params import MU_MAX, RESERVE_MAX, TIMESTAMP_MASK, CircleParams
from .roots import isqrt512
from .wideint import Word512, muldiv, muldiv_ceil

BASE = 10**18  # base units per coin
M_SCALE = 10**7  # stored M = M_SCALE * mu
CENTER = 10**37  # circle center in canonical scale
RADIUS_UNIT = 10**70  # radius^2 = (10000 + rSquare) * RADIUS_UNIT
WEIGHTED_LIMIT = 10**34  # lambda * X bound keeping every square inside 256 bits
FEE_NUM = 997
FEE_DEN = 1000
PRICE_ONE = 10**18  # fixed-point unit of the cumulative price accumulator
ACC_MASK = (1 << 256) - 1


def _check_weighted_bounds(x: int, y: int, lambda0: int, lambda1: int) -> None:
    if lambda0 * x >= WEIGHTED_LIMIT or lambda1 * y >= WEIGHTED_LIMIT:
        raise WideOverflow(
            "weighted balance at or above 10^34 base units; squares would "
            "leave the 256-bit word"
        )


def revise_mu(x: int, y: int, lambda0: int, lambda1: int, r: int) -> int:
    """Minimal M = ceil(10^7 * mu) placing (x, y) on or inside the circle.

    Solves the quadratic for the scaling variable and takes the smaller
    root, the one landing on the lower-left arc.  Rationalizing the root
    to (20000 - r) * 10^32 / (100*S + sqrt(Disc)) removes the
    catastrophic cancellation of the textbook form; the ceiling is then
    pinned exactly with the integer predicate  m*(b + sqrt(d)) >= a,
    i.e.  a - m*b <= 0  or  m^2 * d >= (a - m*b)^2.
    """
    if x < 0 or y < 0 or x + y == 0:
        raise ZeroAmount("revise_mu needs nonnegative reserves, not both zero")
    if not 10001 <= r <= 19999:
        raise ValueError(f"radius parameter out of range: {r}")
    _check_weighted_bounds(x, y, lambda0, lambda1)

    s_lin = lambda0 * x + lambda1 * y
    q_sq = (lambda0 * x) ** 2 + (lambda1 * y) ** 2
    disc = 10**4 * s_lin * s_lin - (20000 - r) * q_sq  # > 0 for r > 10000
    a = 10**32 * (20000 - r)
    b = 100 * s_lin

    # Candidate from the 10^66-scaled root: 33 guard digits keep every digit
    # of the 56-bit result significant before the exact adjustment.
    sqrt_scaled = isqrt512(Word512.from_int(disc * 10**66))
    m = (a * 10**33) // (b * 10**33 + sqrt_scaled)

    def at_least_root(m: int) -> bool:
        t = a - m * b
        if t <= 0:
            return True
        return m * m * disc >= t * t

    while not at_least_root(m):
        m += 1
    while m > 1 and at_least_root(m - 1):
        m -= 1

    if m > MU_MAX:
        raise NoAdmissibleRoot(f"scaling value exceeds the 56-bit field: {m}")
    a_crd = 1000 * m * lambda0 * x
    b_crd = 1000 * m * lambda1 * y
    if a_crd >= CENTER or b_crd >= CENTER:
        raise NoAdmissibleRoot("ceiling of the root left the lower-left quadrant")
    if (a_crd - CENTER) ** 2 + (b_crd - CENTER) ** 2 > r * RADIUS_UNIT:
        raise NoAdmissibleRoot("no integer scaling lands on or inside the circle")
    return m


@dataclass(frozen=True)
class SwapQuote:
    """One priced trade: input, fee carved from it, and the matched output."""

    amount_in: int
    fee_amount: int
    amount_out: int
    side_in: int  # 0: token0 in / token1 out; 1: the reverse
    post_reserves: tuple[int, int]


@dataclass
class CirclePair:
    """One token-pair market (Approach I state machine).

    Reserves are kept in 18-decimal base units; the raw 96-bit token
    amounts are base // D_i.  Mutating operations follow the order:
    accumulate the price oracle, settle protocol fees, apply the
    operation, recalibrate mu.
    """

    circle: CircleParams
    fee_on: bool = False
    reserve0: int = 0  # base units
    reserve1: int = 0
    omega: int = 0
    price_cumulative: int = 0
    block_timestamp_last: int = 0
    fee_ledger: dict[str, int] = field(default_factory=dict)

    def __post_init__(self) -> None:
        self.circle.validate()

    # -- plumbing ---------------------------------------------------------------

    @property
    def established(self) -> bool:
        return self.omega > 0

    def _require_established(self) -> None:
        if not self.established:
            raise UnestablishedPair("pair has no liquidity")

    def _scaled(self, x: int, y: int, m: int | None = None) -> tuple[int, int]:
        m = self.circle.mu if m is None else m
        return (
            1000 * m * self.circle.lambda0 * x,
            1000 * m * self.circle.lambda1 * y,
        )

    def _cost(self) -> int:
        a, b = self._scaled(self.reserve0, self.reserve1)
        return (a - CENTER) ** 2 + (b - CENTER) ** 2

    def _check_amount_units(self, amount: int, d: int, what: str) -> int:
        if amount % d:
            raise FieldOverflow(
                f"{what} {amount} is not a multiple of the raw token unit {d}"
            )
        return amount // d

    def _check_reserve_widths(self, x: int, y: int) -> None:
        for amount, d in ((x, self.circle.d0), (y, self.circle.d1)):
            if self._check_amount_units(amount, d, "reserve") > RESERVE_MAX:
                raise FieldOverflow("raw reserve exceeds 96 bits")
        _check_weighted_bounds(x, y, self.circle.lambda0, self.circle.lambda1)

    def _set_mu(self, m: int) -> None:
        self.circle = replace(self.circle, mu=m)

    def _revise_mu(self) -> int:
        return revise_mu(
            self.reserve0,
            self.reserve1,
            self.circle.lambda0,
            self.circle.lambda1,
            self.circle.radius_param(),
        )

    def _assert_state_invariants(self) -> None:
        if (self.omega > 0) != (self.reserve0 > 0 and self.reserve1 > 0):
            raise InvariantViolation("liquidity supply and reserves disagree")
        if not self.established:
            return
        a, b = self._scaled(self.reserve0, self.reserve1)
        if a >= CENTER or b >= CENTER:
            raise QuadrantViolation("weighted coordinate reached the center")
        if self._cost() > self.circle.radius_param() * RADIUS_UNIT:
            raise InvariantViolation("state left the configured circle")

    # -- price oracle -------------------------------------------------------------

    def spot_price(self) -> Fraction:
        """Exact price of token0 in token1 (per base unit) at current reserves."""
        self._require_established()
        a, b = self._scaled(self.reserve0, self.reserve1)
        if b >= CENTER or a >= CENTER:
            raise DegeneratePrice("weighted coordinate at or past the center")
        return Fraction(
            self.circle.lambda0 * (CENTER - a), self.circle.lambda1 * (CENTER - b)
        )

    def update_cumulative(self, now: int) -> None:
        """Accumulate time-weighted price; 32-bit time, 256-bit accumulator."""
        dt = (now - self.block_timestamp_last) & TIMESTAMP_MASK
        if dt and self.established:
            p = self.spot_price()
            fixed = PRICE_ONE * p.numerator // p.denominator
            self.price_cumulative = (self.price_cumulative + dt * fixed) & ACC_MASK
        self.block_timestamp_last = now & TIMESTAMP_MASK

    def _update(self, now: int | None) -> None:
        if now is not None:
            self.update_cumulative(now)

    # -- liquidity ----------------------------------------------------------------

    def establish(self, x0: int, y0: int, now: int | None = None) -> int:
        """Seed the market; returns the minted liquidity (λ0*x0 + λ1*y0)/2."""
        if self.established:
            raise InvariantViolation("pair already established")
        if x0 < BASE or y0 < BASE:
            raise DepositTooSmall("at least one whole coin of each token required")
        self._check_reserve_widths(x0, y0)
        lambda0, lambda1 = self.circle.lambda0, self.circle.lambda1
        m = revise_mu(x0, y0, lambda0, lambda1, self.circle.radius_param())
        self.reserve0, self.reserve1 = x0, y0
        self.omega = (lambda0 * x0 + lambda1 * y0) // 2
        self._set_mu(m)
        if now is not None:
            self.block_timestamp_last = now & TIMESTAMP_MASK
        self._assert_state_invariants()
        return self.omega

    def add_liquidity(self, dx: int, now: int | None = None) -> tuple[int, int]:
        """Deposit dx of token0 plus the proportional token1.

        Returns (dy_required, omega_minted).  dy rounds up to whole raw
        units and the mint rounds down, both in the pool's favor.
        """
        self._require_established()
        if dx <= 0:
            raise ZeroAmount("deposit must be positive")
        dx_raw = self._check_amount_units(dx, self.circle.d0, "deposit")
        y_raw = self.reserve1 // self.circle.d1
        x_raw = self.reserve0 // self.circle.d0
        if muldiv(dx_raw, y_raw, x_raw) == 0:
            raise RoundingToZero("proportional counterpart deposit rounds to zero")
        dy = muldiv_ceil(dx_raw, y_raw, x_raw) * self.circle.d1

        self._update(now)
        self.mint_fee()
        x1, y1 = self.reserve0 + dx, self.reserve1 + dy
        self._check_reserve_widths(x1, y1)
        lambda0, lambda1 = self.circle.lambda0, self.circle.lambda1
        s0 = lambda0 * self.reserve0 + lambda1 * self.reserve1
        s1 = lambda0 * x1 + lambda1 * y1
        omega1 = muldiv(self.omega, s1, s0)
        minted = omega1 - self.omega
        if minted <= 0:
            raise RoundingToZero("liquidity mint rounds to zero")
        self.reserve0, self.reserve1 = x1, y1
        self.omega = omega1
        self._set_mu(self._revise_mu())
        self._assert_state_invariants()
        return dy, minted

    def remove_liquidity(self, d_omega: int, now: int | None = None) -> tuple[int, int]:
        """Burn d_omega liquidity for floored proportional payouts."""
        self._require_established()
        if d_omega <= 0:
            raise ZeroAmount("burn amount must be positive")
        self._update(now)
        self.mint_fee()  # settle first, so a "full" removal is truly full
        if d_omega > self.omega:
            raise InsufficientLiquidity(f"burning {d_omega} of {self.omega} outstanding")
        dx = muldiv(d_omega, self.reserve0 // self.circle.d0, self.omega) * self.circle.d0
        dy = muldiv(d_omega, self.reserve1 // self.circle.d1, self.omega) * self.circle.d1
        self.reserve0 -= dx
        self.reserve1 -= dy
        self.omega -= d_omega
        if self.omega == 0:
            # Full drain: whatever rounding left behind goes out with it.
            dx += self.reserve0
            dy += self.reserve1
            self.reserve0 = self.reserve1 = 0
            self._set_mu(0)
            self.fee_ledger.clear()
        else:
            self._set_mu(self._revise_mu())
        self._assert_state_invariants()
        return dx, dy

    def mint_fee(self, recipient: str = "protocol") -> int:
        """Settle the protocol's 1/6 of accumulated trade fees as liquidity.

        The drop of the admissible scaling value since the last settlement
        measures the fee growth; Delta = Omega*(M0 - M)/(5*M0 + M) gives the
        protocol exactly (M0 - M)/(6*M0) of the enlarged supply.  Always
        refreshes the stored M (with fees off that is all it does).
        """
        if not self.established:
            return 0
        m0 = self.circle.mu
        m_new = self._revise_mu()
        minted = 0
        # m_new > m0 only if balances were injected from outside; treat as sync.
        if self.fee_on and m_new < m0:
            minted = self.omega * (m0 - m_new) // (5 * m0 + m_new)
            if minted:
                self.fee_ledger[recipient] = self.fee_ledger.get(recipient, 0) + minted
                self.omega += minted
        self._set_mu(m_new)
        return minted

    # -- swapping -------------------------------------------------------------------

    def _oriented_raw(self, side_in: int) -> tuple[int, int, int, int, int, int]:
        c = self.circle
        if side_in == 0:
            return (
                self.reserve0 // c.d0,
                self.reserve1 // c.d1,
                c.lambda0 * c.d0,
                c.lambda1 * c.d1,
                c.d0,
                c.d1,
            )
        if side_in == 1:
            return (
                self.reserve1 // c.d1,
                self.reserve0 // c.d0,
                c.lambda1 * c.d1,
                c.lambda0 * c.d0,
                c.d1,
                c.d0,
            )
        raise ValueError(f"side must be 0 or 1, got {side_in}")

    def get_amount_out(self, amount_in: int, side_in: int = 0) -> SwapQuote:
        """Largest output (in whole raw units) the cost inequality admits."""
        self._require_established()
        if amount_in <= 0:
            raise ZeroAmount("swap input must be positive")
        rin, rout, win, wout, d_in, d_out = self._oriented_raw(side_in)
        dx_raw = self._check_amount_units(amount_in, d_in, "swap input")
        m = self.circle.mu
        if win * (rin + dx_raw) >= WEIGHTED_LIMIT:
            raise WideOverflow("input side would pass the 10^34 weighted bound")

        a0 = 1000 * m * win * rin
        b0 = 1000 * m * wout * rout
        a1 = m * win * (1000 * rin + FEE_NUM * dx_raw)
        if a1 >= CENTER:
            raise QuadrantViolation("input pushes the weighted coordinate past center")
        cost0 = (a0 - CENTER) ** 2 + (b0 - CENTER) ** 2
        r0 = cost0 - (a1 - CENTER) ** 2
        root = isqrt512(Word512.from_int(r0))
        denom = 1000 * m * wout

        def fits(dy: int) -> bool:
            if dy < 0 or dy > rout - 1:
                return False
            b1 = denom * (rout - dy)
            return (a1 - CENTER) ** 2 + (b1 - CENTER) ** 2 <= cost0

        dy = min(max((b0 + root - CENTER) // denom, 0), rout - 1)
        while not fits(dy):
            dy -= 1
        while fits(dy + 1):
            dy += 1

        fee = amount_in - FEE_NUM * amount_in // FEE_DEN
        out = dy * d_out
        post = (
            (self.reserve0 + amount_in, self.reserve1 - out)
            if side_in == 0
            else (self.reserve0 - out, self.reserve1 + amount_in)
        )
        return SwapQuote(amount_in, fee, out, side_in, post)

    def get_amount_in(self, amount_out: int, side_in: int = 0) -> SwapQuote:
        """Smallest input (whole raw units) whose quote covers amount_out."""
        self._require_established()
        if amount_out <= 0:
            raise ZeroAmount("requested output must be positive")
        rin, rout, win, wout, d_in, d_out = self._oriented_raw(side_in)
        dy_raw = self._check_amount_units(amount_out, d_out, "requested output")
        if dy_raw >= rout:
            raise InsufficientReserve(
                f"requested {dy_raw} of {rout} raw units in the output reserve"
            )
        m = self.circle.mu
        a0 = 1000 * m * win * rin
        b0 = 1000 * m * wout * rout
        b1 = 1000 * m * wout * (rout - dy_raw)
        cost0 = (a0 - CENTER) ** 2 + (b0 - CENTER) ** 2
        r1 = cost0 - (b1 - CENTER) ** 2
        if r1 < 0:
            raise QuadrantViolation("output unreachable inside the quadrant")
        root = isqrt512(Word512.from_int(r1))
        denom = FEE_NUM * m * win

        def covers(dx: int) -> bool:
            if dx < 1:
                return False
            a1 = m * win * (1000 * rin + FEE_NUM * dx)
            if a1 >= CENTER:
                raise QuadrantViolation(
                    "required input pushes the weighted coordinate past center"
                )
            return (a1 - CENTER) ** 2 + (b1 - CENTER) ** 2 <= cost0

        need = CENTER - root - a0  # > 0: r1 < (a0 - C)^2
        dx = max(-(-need // denom), 1)
        while not covers(dx):
            dx += 1
        while dx > 1 and covers(dx - 1):
            dx -= 1
        if win * (rin + dx) >= WEIGHTED_LIMIT:
            raise WideOverflow("required input passes the 10^34 weighted bound")

        amount_in = dx * d_in
        fee = amount_in - FEE_NUM * amount_in // FEE_DEN
        post = (
            (self.reserve0 + amount_in, self.reserve1 - amount_out)
            if side_in == 0
            else (self.reserve0 - amount_out, self.reserve1 + amount_in)
        )
        return SwapQuote(amount_in, fee, amount_out, side_in, post)

    def swap(
        self,
        amount0_out: int,
        amount1_out: int,
        amount0_in: int = 0,
        amount1_in: int = 0,
        now: int | None = None,
    ) -> None:
        """Verify and apply a trade given outputs and actually received inputs.

        The inequality is checked on post-trade balances with 0.3% of each
        input withheld from the curve; reserves take the full inputs.
        """
        self._require_established()
        if min(amount0_out, amount1_out, amount0_in, amount1_in) < 0:
            raise ZeroAmount("negative swap amounts")
        if amount0_out == 0 and amount1_out == 0:
            raise ZeroAmount("at least one output must be positive")
        if amount0_out >= self.reserve0 or amount1_out >= self.reserve1:
            raise InsufficientReserve("output exceeds reserves")
        for amount, d in (
            (amount0_out, self.circle.d0),
            (amount0_in, self.circle.d0),
            (amount1_out, self.circle.d1),
            (amount1_in, self.circle.d1),
        ):
            self._check_amount_units(amount, d, "swap amount")

        x1 = self.reserve0 + amount0_in - amount0_out
        y1 = self.reserve1 + amount1_in - amount1_out
        if x1 <= 0 or y1 <= 0:
            raise InsufficientReserve("trade empties a reserve")
        self._check_reserve_widths(x1, y1)

        m = self.circle.mu
        lambda0, lambda1 = self.circle.lambda0, self.circle.lambda1
        a0, b0 = self._scaled(self.reserve0, self.reserve1)
        a_adj = m * lambda0 * (1000 * x1 - 3 * amount0_in)
        b_adj = m * lambda1 * (1000 * y1 - 3 * amount1_in)
        a_full, b_full = self._scaled(x1, y1)
        if max(a_adj, b_adj, a_full, b_full) >= CENTER:
            raise QuadrantViolation("post-trade weighted coordinate past center")
        cost0 = (a0 - CENTER) ** 2 + (b0 - CENTER) ** 2
        cost1 = (a_adj - CENTER) ** 2 + (b_adj - CENTER) ** 2
        if cost1 > cost0:
            raise InvariantViolation("trade would expand the circle cost")

        self._update(now)
        self.reserve0, self.reserve1 = x1, y1
        self._assert_state_invariants()

    def execute_quote(self, quote: SwapQuote, now: int | None = None) -> None:
        """Apply a quote produced by get_amount_out / get_amount_in."""
        if quote.side_in == 0:
            self.swap(0, quote.amount_out, quote.amount_in, 0, now=now)
        else:
            self.swap(quote.amount_out, 0, 0, quote.amount_in, now=now)

    # -- reconciliation ----------------------------------------------------------

    def skim(
        self, balance0: int, balance1: int, now: int | None = None
    ) -> tuple[int, int]:
        """Transfer out balances beyond reserves and recalibrate the circle.

        Swaps leave the state strictly inside the configured circle (the
        working radius shrinks); refreshing M here restores the full
        radius so later quotes see the widest admissible price band.
        """
        self._require_established()
        if balance0 < self.reserve0 or balance1 < self.reserve1:
            raise BalanceDeficit("actual balances below recorded reserves")
        self._update(now)
        excess = (balance0 - self.reserve0, balance1 - self.reserve1)
        self.mint_fee()
        self._assert_state_invariants()
        return excess
