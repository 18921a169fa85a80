"""Density measurement: checkpoint counts, exponent fits, progression reports."""
from __future__ import annotations

from dataclasses import dataclass, field
from math import exp, gcd, log

import numpy as np

from .errors import FitError, InvalidArgument
from .quadform import CombinationSpec
from .representability import ReprConfig, enumerate_combination_values
from .sieve import BitSet

MIN_CHECKPOINT = 16


@dataclass(frozen=True)
class CountTable:
    """Rows of (N_i, count_i): how many members lie at or below each checkpoint."""

    rows: tuple[tuple[int, int], ...]

    def __post_init__(self) -> None:
        ns = [n for n, _ in self.rows]
        counts = [k for _, k in self.rows]
        if any(b <= a for a, b in zip(ns, ns[1:])):
            raise InvalidArgument("checkpoints must be strictly increasing")
        if any(b < a for a, b in zip(counts, counts[1:])):
            raise InvalidArgument("counts must be non-decreasing")
        if ns and ns[0] < MIN_CHECKPOINT:
            raise InvalidArgument(f"checkpoints must be >= {MIN_CHECKPOINT}")

    @property
    def checkpoints(self) -> list[int]:
        return [n for n, _ in self.rows]

    @property
    def counts(self) -> list[int]:
        return [k for _, k in self.rows]


@dataclass(frozen=True)
class FitResult:
    """count ~ scale * N / (log N)^exponent, fitted in log space."""

    exponent: float
    scale: float
    residual: float


@dataclass(frozen=True)
class APRow:
    residue: int
    admissible: bool
    primes: int
    representable_primes: int
    ratio: float
    # no primes in the class up to N; ratio is reported as 0
    empty: bool


@dataclass(frozen=True)
class APReport:
    modulus: int
    limit: int
    rows: tuple[APRow, ...]


@dataclass(frozen=True)
class OQTable:
    modulus: int
    checkpoints: tuple[int, ...]
    # residue -> count of representable primes at each checkpoint
    counts: dict[int, tuple[int, ...]] = field(default_factory=dict)
    empty_residues: tuple[int, ...] = ()


def _check_checkpoints(checkpoints, limit: int) -> list[int]:
    cps = [int(n) for n in checkpoints]
    if not cps:
        raise InvalidArgument("at least one checkpoint is required")
    if any(b <= a for a, b in zip(cps, cps[1:])):
        raise InvalidArgument("checkpoints must be strictly increasing")
    if cps[-1] > limit:
        raise InvalidArgument(f"largest checkpoint {cps[-1]} exceeds limit {limit}")
    return cps


def prefix_counts(bits: BitSet, checkpoints) -> list[int]:
    """Members <= N_i for each ascending N_i, in a single sweep over the bytes."""
    cps = _check_checkpoints(checkpoints, bits.limit)
    out, total, pos = [], 0, 0
    for n in cps:
        full, rem = divmod(n + 1, 8)
        total += int(np.bitwise_count(bits.data[pos:full]).sum(dtype=np.int64))
        pos = full
        extra = int(bits.data[full] & ((1 << rem) - 1)).bit_count() if rem else 0
        out.append(total + extra)
    return out


def count_checkpoints(cfg: ReprConfig, sieve: BitSet, checkpoints, workers: int = 1) -> CountTable:
    """Representable primes <= N_i for each checkpoint N_i."""
    cps = _check_checkpoints(checkpoints, cfg.limit)
    if sieve.limit < cfg.limit:
        raise InvalidArgument(f"sieve limit {sieve.limit} is below the requested {cfg.limit}")
    hits = enumerate_combination_values(cfg, workers) & sieve
    return CountTable(tuple(zip(cps, prefix_counts(hits, cps))))


def fit_exponent(table: CountTable) -> FitResult:
    """Least-squares fit of log(count) = log(scale) + log N - exponent * log log N.

    Regresses log(count/N) on log log N; the slope is -exponent.
    """
    if len(table.rows) < 3:
        raise FitError("need at least 3 rows to fit")
    if any(k < 1 for k in table.counts):
        raise FitError("all counts must be >= 1")
    xs = [log(log(n)) for n in table.checkpoints]
    ys = [log(k) - log(n) for n, k in table.rows]
    n = len(xs)
    mx, my = sum(xs) / n, sum(ys) / n
    sxx = sum((x - mx) ** 2 for x in xs)
    if sxx <= 1e-12 * max(1.0, mx * mx):
        raise FitError("degenerate design: checkpoints share log log N")
    slope = sum((x - mx) * (y - my) for x, y in zip(xs, ys)) / sxx
    intercept = my - slope * mx
    rms = (sum((y - intercept - slope * x) ** 2 for x, y in zip(xs, ys)) / n) ** 0.5
    return FitResult(exponent=-slope, scale=exp(intercept), residual=rms)


def admissible_ap(a: int, d: int) -> bool:
    """Does {a + k d : k >= 0} contain two coprime terms?

    gcd(a, d) divides every term, and gcd(a, a + d) = gcd(a, d), so this is
    exactly gcd(a, d) == 1.
    """
    if d < 1:
        raise InvalidArgument(f"d must be >= 1, got {d}")
    return gcd(a, d) == 1


def _residue_counts(flags: np.ndarray, q: int, cps: list[int]) -> np.ndarray:
    """counts[i, a] = #{k <= cps[i] : flags[k], k = a mod q}."""
    out = np.zeros((len(cps), q), dtype=np.int64)
    for a in range(q):
        view = flags[a::q]
        prev, running = 0, 0
        for i, n in enumerate(cps):
            stop = 0 if n < a else (n - a) // q + 1
            running += int(np.count_nonzero(view[prev:stop]))
            prev = stop
            out[i, a] = running
    return out


def ap_report(cfg: ReprConfig, sieve: BitSet, q: int, checkpoints, workers: int = 1) -> list[APReport]:
    """Per-residue prime and representable-prime counts mod q at each checkpoint."""
    if q < 2:
        raise InvalidArgument(f"modulus must be >= 2, got {q}")
    cps = _check_checkpoints(checkpoints, cfg.limit)
    if sieve.limit < cfg.limit:
        raise InvalidArgument(f"sieve limit {sieve.limit} is below the requested {cfg.limit}")
    top = cps[-1]
    prime_flags = sieve.to_bool(top)
    hits = enumerate_combination_values(cfg, workers).to_bool(top) & prime_flags
    primes = _residue_counts(prime_flags, q, cps)
    reps = _residue_counts(hits, q, cps)
    reports = []
    for i, n in enumerate(cps):
        rows = []
        for a in range(q):
            p, rp = int(primes[i, a]), int(reps[i, a])
            rows.append(APRow(a, admissible_ap(a, q), p, rp, rp / p if p else 0.0, p == 0))
        reports.append(APReport(q, n, tuple(rows)))
    return reports


def oq_explore(q: int, sieve: BitSet, checkpoints, workers: int = 1) -> OQTable:
    """Primes that are sums of two positive triangular numbers, per admissible class mod q."""
    if q < 2:
        raise InvalidArgument(f"modulus must be >= 2, got {q}")
    cps = _check_checkpoints(checkpoints, sieve.limit)
    top = cps[-1]
    cfg = ReprConfig(CombinationSpec(3, 3, 1, 1), max(top, 1), min_index=1)
    hits = enumerate_combination_values(cfg, workers).to_bool(top) & sieve.to_bool(top)
    table = _residue_counts(hits, q, cps)
    counts = {a: tuple(int(k) for k in table[:, a]) for a in range(q) if admissible_ap(a, q)}
    empty = tuple(a for a, ks in counts.items() if ks[-1] == 0)
    return OQTable(q, tuple(cps), counts, empty)
