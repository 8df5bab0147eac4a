"""
Exact arithmetic helpers.

Every parameter in the package (rounding factors, ranges, hop bounds, list
sizes) is derived here from integers and Fractions. Nothing goes through a
float, so two runs on two machines agree bit for bit.
"""

import math
from fractions import Fraction
from numbers import Rational
from typing import Union

from .constants import INF, LN2_UPPER, LN_TABLE
from .exceptions import ConfigurationError

Number = Union[int, Fraction]


def as_fraction(x: Union[int, str, Fraction]) -> Fraction:
    """A Fraction from an int, a Fraction, or a ``num/den`` string."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise ConfigurationError(f"not a rational number: {x!r}")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        try:
            return Fraction(x.strip())
        except (ValueError, ZeroDivisionError) as e:
            raise ConfigurationError(f"not a rational number: {x!r}") from e
    if isinstance(x, Rational):
        return Fraction(x.numerator, x.denominator)
    raise ConfigurationError(f"not a rational number: {x!r}")


def parse_epsilon(text: Union[str, int, Fraction]) -> Fraction:
    """ε from ``num/den``; must lie in (0, 1]."""
    eps = as_fraction(text)
    if not 0 < eps <= 1:
        raise ConfigurationError(f"epsilon must lie in (0, 1], got {eps}")
    return eps


def normalize(x: Number) -> Number:
    """Integral Fractions become ints so equal weights print the same."""
    if isinstance(x, Fraction) and x.denominator == 1:
        return x.numerator
    return x


def ceil_log2(n: int) -> int:
    """Smallest k with 2**k >= n (0 for n <= 1)."""
    if n <= 1:
        return 0
    return (n - 1).bit_length()


def floor_log2(x: Number) -> int:
    """floor(log2 x) for a rational x >= 1."""
    if x < 1:
        raise ValueError(f"floor_log2 needs x >= 1, got {x}")
    return math.floor(x).bit_length() - 1


def iroot_ceil(n: int, p: int) -> int:
    """Smallest integer x with x**p >= n."""
    if p < 1:
        raise ValueError("root order must be positive")
    if n <= 1:
        return max(n, 0)
    x = max(1, int(round(n ** (1.0 / p))))
    while x ** p < n:
        x += 1
    while x > 1 and (x - 1) ** p >= n:
        x -= 1
    return x


def ceil_sqrt(n: int) -> int:
    """Smallest integer x with x*x >= n."""
    if n <= 0:
        return 0
    r = math.isqrt(n)
    return r if r * r == n else r + 1


def ln_upper(x: Number) -> Fraction:
    """An upper bound on ln x for rational x >= 1, from the fixed table."""
    x = Fraction(x)
    if x < 1:
        raise ValueError(f"ln_upper needs x >= 1, got {x}")
    k = floor_log2(x)
    y = x / (2 ** k)
    t, ln_t = LN_TABLE[0]
    for point, value in LN_TABLE:
        if point <= y:
            t, ln_t = point, value
    return k * LN2_UPPER + ln_t + (y - t) / t


def root_exponent(n: int, ratio: Fraction) -> int:
    """
    The clamped p = max(1, floor(sqrt(log n / log ratio))).

    Evaluated exactly as the largest p with ratio**(p*p) <= n.
    """
    if ratio <= 1:
        raise ValueError("ratio must exceed 1")
    p = 0
    while ratio ** ((p + 1) ** 2) <= n:
        p += 1
    return max(1, p)


def ceil_div(a: Number, b: Number) -> int:
    """ceil(a / b) for rationals."""
    return math.ceil(Fraction(a) / Fraction(b))


def is_integer(x) -> bool:
    if x == INF:
        return False
    if isinstance(x, int):
        return True
    if isinstance(x, Fraction):
        return x.denominator == 1
    return False
