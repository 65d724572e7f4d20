"""Integer and fixed-point square roots via the Babylonian iteration.

The iteration x' = (x + a/x) / 2 is seeded at the power of two just above
the root (2^ceil(bitlen/2)), which is within a factor of two of the true
root.  Seeded that way the iterate sequence is strictly decreasing until
it reaches floor(sqrt(a)); a final correction step makes floor-correctness
unconditional.  Integer rounding degrades the quadratic convergence in the
last few ulps, so the documented iteration bound is frac_bits + 9 for
fractional roots and 9 plus a small rounding tail for integer roots.

Fractional roots use a binary split: the radicand is pre-shifted left by
2*frac_bits and rooted as an integer, which realizes "truncated to
frac_bits bits" exactly.  Roots of 512-bit radicands route the per-step
division through the wide divmod so quotient and remainder come from a
single pass.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import WideOverflow
from .wideint import U256_MAX, U512_MAX, Word512, divmod_512_by_256


@dataclass(frozen=True)
class FixedRoot:
    """A truncated fixed-point square root: value = int_part + frac_part/2^frac_bits."""

    int_part: int
    frac_bits: int
    frac_part: int

    def raw(self) -> int:
        """The root as a single integer scaled by 2^frac_bits."""
        return (self.int_part << self.frac_bits) | self.frac_part


def _div_narrow(n: int, x: int) -> int:
    return n // x


def _div_wide(n: int, x: int) -> int:
    if x > U256_MAX:
        # Only the power-of-two seed 2^256 can land here.
        return n >> 256
    if (n >> 256) >= x:
        # Radicand within 2 ulp of 2^512: the exact quotient would overflow
        # the 256-bit word.  Clamping keeps the mean within 1 of the true
        # iterate and the final correction step absorbs the difference.
        return U256_MAX
    # q and r arrive together from one division pass; only q feeds the mean.
    q, _ = divmod_512_by_256(Word512.from_int(n), x)
    return q


def _isqrt_core(a: int, div, trace: list | None = None) -> tuple[int, int]:
    """floor(sqrt(a)) plus the iteration count, using div(a, x) for a/x."""
    if a < 2:
        return a, 0
    x = 1 << ((a.bit_length() + 1) // 2)  # 2^ceil(L/2) >= sqrt(a) > half that
    if trace is not None:
        trace.append(x)
    iterations = 0
    while True:
        iterations += 1
        x_next = (x + div(a, x)) >> 1
        if trace is not None:
            trace.append(x_next)
        if x_next >= x:
            break
        x = x_next
    # The loop exits at floor(sqrt(a)); correct unconditionally anyway.
    while x * x > a:
        x -= 1
    while (x + 1) * (x + 1) <= a:
        x += 1
    return x, iterations


def babylonian_iterates(a: int) -> list[int]:
    """The raw iterate sequence (seed included), for convergence inspection."""
    trace: list[int] = []
    div = _div_narrow if a <= U256_MAX else _div_wide
    _isqrt_core(a, div, trace)
    return trace


def isqrt256(a: int) -> int:
    """floor(sqrt(a)) for a 256-bit radicand."""
    if a < 0 or a > U256_MAX:
        raise WideOverflow(f"radicand outside 256-bit range: {a}")
    root, _ = _isqrt_core(a, _div_narrow)
    return root


def isqrt512(a: Word512) -> int:
    """floor(sqrt(a)) for a 512-bit radicand; the result always fits 256 bits."""
    value = a.to_int()
    if value <= U256_MAX:
        return isqrt256(value)
    root, _ = _isqrt_core(value, _div_wide)
    return root


def _sqrt_shifted(a: int, frac_bits: int) -> tuple[int, int]:
    shifted = a << (2 * frac_bits)
    if shifted > U512_MAX:
        raise WideOverflow("shifted radicand exceeds 512 bits")
    if shifted <= U256_MAX:
        return _isqrt_core(shifted, _div_narrow)
    return _isqrt_core(shifted, _div_wide)


def sqrt_frac(a: int, frac_bits: int) -> FixedRoot:
    """sqrt(a) truncated to frac_bits binary fractional digits.

    The result satisfies root^2 <= a < (root + 2^-frac_bits)^2; the error
    against the true square root is below 2^-frac_bits.  Internally the
    iteration carries the full shifted radicand, i.e. strictly more
    precision than the truncated result exposes.
    """
    if a < 0 or a > U256_MAX:
        raise WideOverflow(f"radicand outside 256-bit range: {a}")
    if not 50 <= frac_bits <= 64:
        raise ValueError(f"frac_bits must be in [50, 64], got {frac_bits}")
    raw, _ = _sqrt_shifted(a, frac_bits)
    return FixedRoot(
        int_part=raw >> frac_bits,
        frac_bits=frac_bits,
        frac_part=raw & ((1 << frac_bits) - 1),
    )


def sqrt_frac_iterations(a: int, frac_bits: int) -> int:
    """Iteration count of sqrt_frac for the same inputs (bound: frac_bits + 9)."""
    _, iterations = _sqrt_shifted(a, frac_bits)
    return iterations


def isqrt_iterations(a: int) -> int:
    """Iteration count of the plain integer root."""
    if a <= U256_MAX:
        return _isqrt_core(a, _div_narrow)[1]
    return _isqrt_core(a, _div_wide)[1]
