"""Which integers are mu*T(r,m) + nu*T(s,n), and the two-squares / two-triangulars predicates."""
from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from math import isqrt

import numpy as np

from .errors import InvalidArgument
from .polygonal import polygonal_number, polygonal_sequence
from .quadform import CombinationSpec, QuadraticForm
from .sieve import BitSet


@dataclass(frozen=True)
class ReprConfig:
    spec: CombinationSpec
    limit: int
    min_index: int = 1

    def __post_init__(self) -> None:
        if self.limit < 1:
            raise InvalidArgument(f"limit must be >= 1, got {self.limit}")
        if self.min_index not in (0, 1):
            raise InvalidArgument(f"min_index must be 0 or 1, got {self.min_index}")


def _scaled_polygonals(r: int, coef: int, limit: int, min_index: int) -> np.ndarray:
    return np.fromiter((coef * t for t in polygonal_sequence(r, limit // coef, min_index)),
                       dtype=np.int64)


def enumerate_combination_values(cfg: ReprConfig, workers: int = 1) -> BitSet:
    """Bitset of every n <= limit equal to mu*T(r,m) + nu*T(s,n') with m, n' >= min_index.

    The outer index m is split round-robin across ``workers`` threads. All
    threads only ever set flags to True, so the result is independent of
    scheduling.
    """
    if workers < 1:
        raise InvalidArgument("workers must be >= 1")
    spec, limit = cfg.spec, cfg.limit
    flags = np.zeros(limit + 1, dtype=bool)
    outer = _scaled_polygonals(spec.r, spec.mu, limit, cfg.min_index)
    inner = _scaled_polygonals(spec.s, spec.nu, limit, cfg.min_index)
    if inner.size:
        # inner is ascending, so each row stops at the first sum past the limit
        cut = np.searchsorted(inner, limit - outer, side="right")

        def fill(rows: range) -> None:
            for i in rows:
                k = cut[i]
                if k:
                    flags[outer[i] + inner[:k]] = True

        if workers == 1:
            fill(range(outer.size))
        else:
            with ThreadPoolExecutor(max_workers=workers) as pool:
                list(pool.map(fill, [range(w, outer.size, workers) for w in range(workers)]))
    return BitSet.from_bool(flags)


def enumerate_form_values(q: QuadraticForm, limit: int) -> BitSet:
    """Bitset of q(x, y) in [0, limit] over x >= x_origin, y >= y_origin.

    Requires a, c > 0 and b >= 0 with non-negative origins, which keeps the
    set of (x, y) with q(x, y) <= limit finite.
    """
    if q.a <= 0 or q.c <= 0 or q.b < 0:
        raise InvalidArgument("enumerate_form_values needs a > 0, c > 0 and b >= 0")
    if q.x_origin < 0 or q.y_origin < 0:
        raise InvalidArgument("origins must be non-negative")
    if limit < 0:
        raise InvalidArgument(f"limit must be >= 0, got {limit}")
    flags = np.zeros(limit + 1, dtype=bool)
    a, b, c, e, f, g = q.coefficients
    y0 = q.y_origin
    # b*x*y >= 0 on the quadrant, so q(x, y) >= a x^2 + e x + min_y(c y^2 + f y + g)
    y_star = max(y0, -f // (2 * c))
    floor_y = min(c * y * y + f * y + g for y in (y0, y_star, y_star + 1) if y >= y0)
    x = q.x_origin
    while True:
        if a * x * x + e * x + floor_y > limit and 2 * a * x + e >= 0:
            break
        lin = b * x + f
        const = a * x * x + e * x + g
        # c y^2 + lin y + const <= limit
        disc = lin * lin - 4 * c * (const - limit)
        if disc >= 0:
            root = isqrt(disc) + 1
            y_lo = max(y0, (-lin - root) // (2 * c))
            y_hi = (-lin + root) // (2 * c) + 1
            if y_hi >= y_lo:
                ys = np.arange(y_lo, y_hi + 1, dtype=np.int64)
                vals = c * ys * ys + lin * ys + const
                vals = vals[(vals >= 0) & (vals <= limit)]
                flags[vals] = True
        x += 1
    return BitSet.from_bool(flags)


def representable_primes(cfg: ReprConfig, sieve: BitSet, members: bool = False,
                         workers: int = 1) -> tuple[int, list[int] | None]:
    """Count (and optionally list) the primes <= limit of the combination's form."""
    if sieve.limit < cfg.limit:
        raise InvalidArgument(f"sieve limit {sieve.limit} is below the requested {cfg.limit}")
    hits = enumerate_combination_values(cfg, workers) & sieve
    return hits.count(), (hits.members() if members else None)


def sum_of_two_squares(n: int) -> bool:
    """True iff n = a^2 + b^2 with a, b >= 0.

    Every prime factor congruent to 3 mod 4 must appear to an even power.
    """
    if n < 0:
        raise InvalidArgument(f"n must be >= 0, got {n}")
    if n == 0:
        return True
    while n % 2 == 0:
        n //= 2
    p = 3
    while p * p <= n:
        if n % p == 0:
            k = 0
            while n % p == 0:
                n //= p
                k += 1
            if p % 4 == 3 and k % 2:
                return False
        p += 2
    return n % 4 != 3


def sum_of_two_triangulars(n: int, allow_zero: bool = True) -> bool:
    """True iff n = T(3, a) + T(3, b), with a, b >= 0 (or >= 1 when zero is excluded)."""
    if n < 0:
        raise InvalidArgument(f"n must be >= 0, got {n}")
    first = 0 if allow_zero else 1
    a = first
    t = polygonal_number(3, a)
    # by symmetry only T(a) <= n/2 needs checking
    while 2 * t <= n:
        rest = n - t
        # rest is triangular iff 8*rest + 1 is a square; its index is >= 1 iff rest >= 1
        d = 8 * rest + 1
        root = isqrt(d)
        if root * root == d and (allow_zero or rest >= 1):
            return True
        a += 1
        t += a
    return False


def corollary3_predicate(p: int) -> bool:
    """Whether 4p + 1 is a sum of two squares."""
    if p < 0:
        raise InvalidArgument(f"p must be >= 0, got {p}")
    return sum_of_two_squares(4 * p + 1)
