"""Constant-circle automated market maker, desk-scale.

Fixed-point wide-integer pair engines (with and without the mu scaling
variable), an exact rational reference oracle, and a deterministic
scenario simulator with differential verification.
"""

from .errors import CircleSwapError
from .flat import FlatPair
from .oracle import QuadraticSurd, RationalMarket, exact_mu, exact_mu_scaled_ceil
from .pair import CirclePair, SwapQuote, revise_mu
from .params import (
    CircleParams,
    PackedReserves,
    derive_lambdas,
    order_tokens,
    pack_circle,
    pack_reserves,
    price_bounds,
    router_circle_decoding,
    router_circle_encoding,
    unpack_circle,
    unpack_reserves,
    weighted_reserves,
)
from .roots import FixedRoot, isqrt256, isqrt512, sqrt_frac
from .wideint import Word512, divmod_512_by_256, mul_wide, muldiv

__version__ = "0.1.0"

__all__ = [
    "CircleSwapError",
    "CirclePair",
    "CircleParams",
    "FixedRoot",
    "FlatPair",
    "PackedReserves",
    "QuadraticSurd",
    "RationalMarket",
    "SwapQuote",
    "Word512",
    "derive_lambdas",
    "divmod_512_by_256",
    "exact_mu",
    "exact_mu_scaled_ceil",
    "isqrt256",
    "isqrt512",
    "mul_wide",
    "muldiv",
    "order_tokens",
    "pack_circle",
    "pack_reserves",
    "price_bounds",
    "revise_mu",
    "router_circle_decoding",
    "router_circle_encoding",
    "sqrt_frac",
    "unpack_circle",
    "unpack_reserves",
    "weighted_reserves",
]
