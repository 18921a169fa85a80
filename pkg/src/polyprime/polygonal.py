"""Polygonal numbers T(r, m) = (r-2) m (m-1) / 2 + m."""
from __future__ import annotations

from math import isqrt
from typing import Iterator

from .errors import InvalidArgument

# Values beyond this are refused so bulk numpy paths (int64) stay exact.
MAX_VALUE = 2**63


def _check_r(r: int) -> None:
    if r < 3:
        raise InvalidArgument(f"r must be >= 3, got {r}")


def polygonal_number(r: int, m: int) -> int:
    """Return the m-th r-gonal number."""
    _check_r(r)
    if m < 0:
        raise InvalidArgument(f"m must be >= 0, got {m}")
    value = (r - 2) * m * (m - 1) // 2 + m
    if value > MAX_VALUE:
        raise InvalidArgument(f"T({r},{m}) exceeds 2**63")
    return value


def inverse_polygonal(r: int, n: int) -> int | None:
    """Return m >= 0 with T(r, m) == n, or None when n is not r-gonal.

    Solves (r-2) m^2 - (r-4) m - 2n = 0 with an exact integer square root.
    """
    _check_r(r)
    if n < 0:
        raise InvalidArgument(f"n must be >= 0, got {n}")
    if n == 0:
        # the other root, (r-4)/(r-2), is never a positive integer
        return 0
    disc = (r - 4) ** 2 + 8 * n * (r - 2)
    root = isqrt(disc)
    if root * root != disc:
        return None
    num = (r - 4) + root
    den = 2 * (r - 2)
    if num % den:
        return None
    return num // den


def polygonal_sequence(r: int, limit: int, min_index: int = 1) -> Iterator[int]:
    """Yield T(r, m) for m = min_index, min_index + 1, ... while T(r, m) <= limit."""
    _check_r(r)
    if limit < 0:
        raise InvalidArgument(f"limit must be >= 0, got {limit}")
    if min_index not in (0, 1):
        raise InvalidArgument(f"min_index must be 0 or 1, got {min_index}")
    m = min_index
    value = polygonal_number(r, m)
    while value <= limit:
        yield value
        # T(r, m+1) - T(r, m) = (r-2) m + 1
        value += (r - 2) * m + 1
        m += 1
