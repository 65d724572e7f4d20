"""Exception types shared across the package.

Every failure mode of the market math raises a distinct subclass of
CircleSwapError so callers (and the scenario runner's exit-code mapping)
can tell overflow, bad trades, and accounting corruption apart.
"""


class CircleSwapError(Exception):
    """Base class for all errors raised by this package."""


class WideMathError(CircleSwapError):
    """Base class for wide-integer arithmetic failures."""


class DivisionByZero(WideMathError):
    pass


class QuotientOverflow(WideMathError):
    """floor(n/d) does not fit the 256-bit result word."""


class WideOverflow(WideMathError):
    """A value left the range of its fixed-width word."""


class FieldOverflow(CircleSwapError):
    """A packed-word field was given a value wider than its bit slot."""


class PairError(CircleSwapError):
    """Base class for pair state-machine rejections."""


class DepositTooSmall(PairError):
    """Establishment requires at least one whole coin of each token."""


class ZeroAmount(PairError):
    pass


class RoundingToZero(PairError):
    """Requested operation would mint or transfer a zero amount."""


class InsufficientLiquidity(PairError):
    pass


class InsufficientReserve(PairError):
    pass


class QuadrantViolation(PairError):
    """A weighted coordinate reached or passed the circle center."""


class InvariantViolation(PairError):
    """Post-trade state would increase the circle cost; trade rejected."""


class DegeneratePrice(PairError):
    """Spot price undefined: weighted coordinate equals the center."""


class NoAdmissibleRoot(PairError):
    """No scaling value places the reserves on the lower-left arc."""


class BalanceDeficit(PairError):
    """Actual balances below recorded reserves: accounting corruption."""


class UnestablishedPair(PairError):
    pass
