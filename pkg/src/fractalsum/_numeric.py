"""128-bit logarithms with decimal rendering for certificates."""

from __future__ import annotations

from fractions import Fraction

import mpmath

PRECISION_BITS = 128
DECIMAL_DIGITS = 30

_ctx = mpmath.MPContext()
_ctx.prec = PRECISION_BITS

NEG_INF = _ctx.ninf


def mpf(x) -> "mpmath.mpf":
    if isinstance(x, Fraction):
        return _ctx.mpf(x.numerator) / x.denominator
    return _ctx.mpf(x)


def log(x) -> "mpmath.mpf":
    if x == 0:
        return _ctx.ninf
    return _ctx.log(mpf(x))


def decimal(x) -> str:
    """Stable decimal rendering; identical inputs give identical strings."""
    if x == _ctx.ninf:
        return "-inf"
    return _ctx.nstr(mpf(x), DECIMAL_DIGITS, strip_zeros=False)
