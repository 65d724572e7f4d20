"""Circle pair without the scaling variable (Approach II).

Same circle geometry as the scaled pair, but the weighted coordinates are
lambda * x directly: the market must satisfy lambda0*x < 10^9 and
lambda1*y < 10^9 in coin units at all times, and the trading curve is
whatever circle the current cost defines.  In base units the canonical
scale is G = lambda * X * 10^3 with center 10^30 (10^18 for the base
units, 10^3 for the 99.7% fee factor).

The protocol fee is charged per swap rather than lazily:
Omega_fee = 0.003 * Omega * lambda_in * dx / (lambda0*x + lambda1*y).
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import (
    DepositTooSmall,
    InsufficientLiquidity,
    InsufficientReserve,
    InvariantViolation,
    QuadrantViolation,
    RoundingToZero,
    UnestablishedPair,
    ZeroAmount,
)
from .roots import isqrt512
from .wideint import Word512, muldiv, muldiv_ceil

BASE = 10**18
FLAT_CENTER = 10**30  # lambda * X * 10^3 scale
FEE_NUM = 997
FEE_DEN = 1000
PROTOCOL_FEE_NUM = 3  # 0.003 of the input, pro-rated into liquidity
PROTOCOL_FEE_DEN = 1000


@dataclass
class FlatPair:
    """Approach-II pair: fixed weights, cost non-expansion, per-swap fee."""

    lambda0: int
    lambda1: int
    fee_on: bool = False
    reserve0: int = 0  # base units
    reserve1: int = 0
    omega: int = 0
    fee_ledger: dict[str, int] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if self.lambda0 < 1 or self.lambda1 < 1 or max(self.lambda0, self.lambda1) >> 16:
            raise ValueError("lambda weights must be 16-bit values >= 1")

    @property
    def established(self) -> bool:
        return self.omega > 0

    def _require_established(self) -> None:
        if not self.established:
            raise UnestablishedPair("pair has no liquidity")

    def _scaled(self, x: int, y: int) -> tuple[int, int]:
        return 1000 * self.lambda0 * x, 1000 * self.lambda1 * y

    def cost(self) -> int:
        """Current circle cost in the canonical scale."""
        a, b = self._scaled(self.reserve0, self.reserve1)
        return (a - FLAT_CENTER) ** 2 + (b - FLAT_CENTER) ** 2

    def _check_quadrant(self, x: int, y: int) -> None:
        a, b = self._scaled(x, y)
        if a >= FLAT_CENTER or b >= FLAT_CENTER:
            raise QuadrantViolation(
                "weighted balance at or past 10^9 coins; lower-left arc required"
            )

    def _assert_state_invariants(self) -> None:
        if (self.omega > 0) != (self.reserve0 > 0 and self.reserve1 > 0):
            raise InvariantViolation("liquidity supply and reserves disagree")
        if self.established:
            self._check_quadrant(self.reserve0, self.reserve1)

    # -- liquidity ---------------------------------------------------------------

    def establish(self, x0: int, y0: int) -> int:
        if self.established:
            raise InvariantViolation("pair already established")
        if x0 < BASE or y0 < BASE:
            raise DepositTooSmall("at least one whole coin of each token required")
        self._check_quadrant(x0, y0)
        self.reserve0, self.reserve1 = x0, y0
        self.omega = (self.lambda0 * x0 + self.lambda1 * y0) // 2
        self._assert_state_invariants()
        return self.omega

    def add_liquidity(self, dx: int) -> tuple[int, int]:
        """Deposit dx token0 plus proportional token1; returns (dy, minted)."""
        self._require_established()
        if dx <= 0:
            raise ZeroAmount("deposit must be positive")
        if muldiv(dx, self.reserve1, self.reserve0) == 0:
            raise RoundingToZero("proportional counterpart deposit rounds to zero")
        dy = muldiv_ceil(dx, self.reserve1, self.reserve0)
        x1, y1 = self.reserve0 + dx, self.reserve1 + dy
        self._check_quadrant(x1, y1)
        s0 = self.lambda0 * self.reserve0 + self.lambda1 * self.reserve1
        s1 = self.lambda0 * x1 + self.lambda1 * y1
        omega1 = muldiv(self.omega, s1, s0)
        minted = omega1 - self.omega
        if minted <= 0:
            raise RoundingToZero("liquidity mint rounds to zero")
        self.reserve0, self.reserve1 = x1, y1
        self.omega = omega1
        self._assert_state_invariants()
        return dy, minted

    def remove_liquidity(self, d_omega: int) -> tuple[int, int]:
        """Burn d_omega for floored proportional payouts."""
        self._require_established()
        if d_omega <= 0:
            raise ZeroAmount("burn amount must be positive")
        if d_omega > self.omega:
            raise InsufficientLiquidity(f"burning {d_omega} of {self.omega} outstanding")
        dx = muldiv(d_omega, self.reserve0, self.omega)
        dy = muldiv(d_omega, self.reserve1, self.omega)
        self.reserve0 -= dx
        self.reserve1 -= dy
        self.omega -= d_omega
        if self.omega == 0:
            dx += self.reserve0
            dy += self.reserve1
            self.reserve0 = self.reserve1 = 0
            self.fee_ledger.clear()
        self._assert_state_invariants()
        return dx, dy

    # -- swapping -----------------------------------------------------------------

    def _oriented(self, side_in: int) -> tuple[int, int, int, int]:
        if side_in == 0:
            return self.reserve0, self.reserve1, self.lambda0, self.lambda1
        if side_in == 1:
            return self.reserve1, self.reserve0, self.lambda1, self.lambda0
        raise ValueError(f"side must be 0 or 1, got {side_in}")

    def quote_out(self, amount_in: int, side_in: int = 0) -> int:
        """Largest output keeping the cost from expanding, fee included."""
        self._require_established()
        if amount_in <= 0:
            raise ZeroAmount("swap input must be positive")
        rin, rout, lam_in, lam_out = self._oriented(side_in)

        a0 = 1000 * lam_in * rin
        b0 = 1000 * lam_out * rout
        a1 = lam_in * (1000 * rin + FEE_NUM * amount_in)
        if a1 >= FLAT_CENTER:
            raise QuadrantViolation("input pushes the weighted coordinate past center")
        cost0 = (a0 - FLAT_CENTER) ** 2 + (b0 - FLAT_CENTER) ** 2
        r0 = cost0 - (a1 - FLAT_CENTER) ** 2
        root = isqrt512(Word512.from_int(r0))
        denom = 1000 * lam_out

        def fits(dy: int) -> bool:
            if dy < 0 or dy > rout - 1:
                return False
            b1 = denom * (rout - dy)
            return (a1 - FLAT_CENTER) ** 2 + (b1 - FLAT_CENTER) ** 2 <= cost0

        dy = min(max((b0 + root - FLAT_CENTER) // denom, 0), rout - 1)
        while not fits(dy):
            dy -= 1
        while fits(dy + 1):
            dy += 1
        return dy

    def protocol_fee(self, amount_in: int, side_in: int = 0) -> int:
        """Per-swap fee liquidity: 0.003*Omega*lambda_in*dx / (λ0x + λ1y)."""
        if amount_in < 0:
            raise ZeroAmount("negative swap input")
        lam_in = self.lambda0 if side_in == 0 else self.lambda1
        s = self.lambda0 * self.reserve0 + self.lambda1 * self.reserve1
        return PROTOCOL_FEE_NUM * self.omega * lam_in * amount_in // (
            PROTOCOL_FEE_DEN * s
        )

    def swap(self, amount_in: int, side_in: int = 0, recipient: str = "protocol") -> int:
        """Execute a swap of amount_in, returning the output amount.

        When the protocol fee is on, the fee liquidity for this swap is
        minted immediately against the pre-trade state.
        """
        dy = self.quote_out(amount_in, side_in)
        if dy <= 0:
            raise InsufficientReserve("input too small for any output")
        fee_omega = self.protocol_fee(amount_in, side_in) if self.fee_on else 0
        if side_in == 0:
            self.reserve0 += amount_in
            self.reserve1 -= dy
        else:
            self.reserve1 += amount_in
            self.reserve0 -= dy
        if fee_omega:
            self.fee_ledger[recipient] = self.fee_ledger.get(recipient, 0) + fee_omega
            self.omega += fee_omega
        self._assert_state_invariants()
        return dy
