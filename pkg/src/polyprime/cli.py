"""polyprime command-line interface.

Subcommands::

    classify        regime of every parity case and the overall combination
    count           representable primes up to --limit (or at --checkpoints)
    fit             exponent fit of count ~ N / (log N)^e over --checkpoints
    ap              per-residue representable-prime ratios modulo --modulus
    oq              sums of two triangular numbers per admissible residue class
    identity-check  two-triangulars vs 4n+1 two-squares identity, two-squares prime law
    sieve           build (and optionally cache) the primality bitset

Exit codes: 0 success, 2 invalid arguments, 3 resource or cache errors.
Defaults for --cache, --workers, --format and the limit ceiling may be put in a
key=value file named by the POLYPRIME_CONFIG environment variable.
"""
from __future__ import annotations

import argparse
import logging
import os
import sys
from dataclasses import dataclass, replace
from pathlib import Path

from .analysis import ap_report, count_checkpoints, fit_exponent, oq_explore
from .errors import CorruptCache, InvalidArgument, ResourceError
from .quadform import CombinationSpec, classify_combination
from .report import FORMATS, Tabular, emit_report, plot_csv
from .representability import (ReprConfig, corollary3_predicate, representable_primes,
                               sum_of_two_squares, sum_of_two_triangulars)
from .sieve import MAX_LIMIT, BitSet, build_sieve, load_cache, primes_in_progression, save_cache

log = logging.getLogger("polyprime")

CONFIG_ENV = "POLYPRIME_CONFIG"
CACHE_FILE = "primes.pgprime"
DEFAULT_CHECKPOINTS = (10**4, 10**5, 10**6, 10**7)

EXIT_OK, EXIT_USAGE, EXIT_RESOURCE = 0, 2, 3


@dataclass(frozen=True)
class RunConfig:
    cache_dir: Path | None = None
    max_limit: int = MAX_LIMIT
    workers: int = 1
    output_format: str = "text"

    def __post_init__(self) -> None:
        if self.workers < 1:
            raise InvalidArgument("workers must be >= 1")
        if not 2 <= self.max_limit <= MAX_LIMIT:
            raise InvalidArgument(f"max_limit must be in [2, {MAX_LIMIT}]")
        if self.output_format not in FORMATS:
            raise InvalidArgument(f"unknown format {self.output_format!r}")


_CONFIG_KEYS = {
    "cache_dir": Path,
    "max_limit": int,
    "workers": int,
    "format": str,
    "output_format": str,
}


def load_config(path: str | os.PathLike | None) -> RunConfig:
    """Read a key=value config file; blank lines and # comments are ignored."""
    if not path:
        return RunConfig()
    values: dict = {}
    for lineno, raw in enumerate(Path(path).read_text().splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        key, value = key.strip(), value.strip()
        if not sep or key not in _CONFIG_KEYS:
            raise InvalidArgument(f"{path}:{lineno}: unrecognised config line {raw!r}")
        try:
            parsed = _CONFIG_KEYS[key](value)
        except ValueError as exc:
            raise InvalidArgument(f"{path}:{lineno}: bad value for {key}") from exc
        values["output_format" if key == "format" else key] = parsed
    return RunConfig(**values)


def _checkpoints(text: str) -> list[int]:
    return [_int(tok.strip()) for tok in text.split(",") if tok.strip()]


def _int(text: str) -> int:
    # accepts 10**7 written as 1e7 or 10_000_000
    try:
        if "e" in text.lower():
            value = float(text)
            if value != int(value):
                raise ValueError
            return int(value)
        return int(text.replace("_", ""))
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from exc


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--cache", metavar="DIR", help="directory holding the sieve cache")
    common.add_argument("--workers", type=int, help="worker threads for sieving and enumeration")
    common.add_argument("--format", choices=FORMATS, help="output format (default text)")
    common.add_argument("--out", metavar="PATH", help="write the report here instead of stdout")
    common.add_argument("-v", "--verbose", action="store_true")

    combo = argparse.ArgumentParser(add_help=False)
    combo.add_argument("--r", type=int, required=True, help="gonality of the first term")
    combo.add_argument("--s", type=int, required=True, help="gonality of the second term")
    combo.add_argument("--mu", type=int, default=1)
    combo.add_argument("--nu", type=int, default=1)

    index = argparse.ArgumentParser(add_help=False)
    index.add_argument("--min-index", type=int, choices=(0, 1), default=1)

    parser = argparse.ArgumentParser(prog="polyprime",
                                     description="Primes of the form mu*T(r,m) + nu*T(s,n).")
    sub = parser.add_subparsers(dest="command", required=True)

    sub.add_parser("classify", parents=[common, combo], help="symbolic regime classification")

    p = sub.add_parser("count", parents=[common, combo, index], help="count representable primes")
    p.add_argument("--limit", type=_int, required=True)
    p.add_argument("--checkpoints", type=_checkpoints)
    p.add_argument("--list", action="store_true", help="also list the primes")

    p = sub.add_parser("fit", parents=[common, combo, index], help="fit the density exponent")
    p.add_argument("--checkpoints", type=_checkpoints, default=list(DEFAULT_CHECKPOINTS))
    p.add_argument("--plot", metavar="PATH", help="write N,count,model curves as CSV")

    p = sub.add_parser("ap", parents=[common, combo, index], help="arithmetic-progression report")
    p.add_argument("--modulus", type=int, required=True)
    p.add_argument("--checkpoints", type=_checkpoints)
    p.add_argument("--limit", type=_int)

    p = sub.add_parser("oq", parents=[common], help="two-triangular primes per residue class")
    p.add_argument("--modulus", type=int, required=True)
    p.add_argument("--checkpoints", type=_checkpoints)
    p.add_argument("--limit", type=_int)

    p = sub.add_parser("identity-check", parents=[common], help="check the 4n+1 identity")
    p.add_argument("--limit", type=_int, default=10**5)

    p = sub.add_parser("sieve", parents=[common], help="build or refresh the prime sieve")
    p.add_argument("--limit", type=_int, required=True)
    p.add_argument("--modulus", type=int, help="also report prime counts per residue")
    return parser


def get_sieve(limit: int, run: RunConfig) -> BitSet:
    """Load a cached sieve covering ``limit``, or build one (and cache it)."""
    if limit > run.max_limit:
        raise InvalidArgument(f"limit {limit} exceeds the configured max_limit {run.max_limit}")
    path = run.cache_dir / CACHE_FILE if run.cache_dir else None
    if path is not None and path.exists():
        cached = load_cache(path)
        if cached.limit >= limit:
            log.info("reusing cached sieve %s (limit %d)", path, cached.limit)
            return cached
        log.info("cached sieve limit %d < %d; rebuilding", cached.limit, limit)
    sieve = build_sieve(max(limit, 2), workers=run.workers)
    if path is not None:
        path.parent.mkdir(parents=True, exist_ok=True)
        save_cache(sieve, path)
    return sieve


def _spec(args) -> CombinationSpec:
    return CombinationSpec(args.r, args.s, args.mu, args.nu)


def _spec_meta(args) -> dict:
    return {"r": args.r, "s": args.s, "mu": args.mu, "nu": args.nu}


def _limit_and_checkpoints(args) -> tuple[int, list[int]]:
    cps = args.checkpoints
    limit = getattr(args, "limit", None)
    if cps is None:
        if limit is None:
            raise InvalidArgument("give --limit or --checkpoints")
        cps = [limit]
    if limit is None:
        limit = max(cps)
    return limit, cps


def cmd_classify(args, run: RunConfig):
    report = classify_combination(_spec(args))
    meta = _spec_meta(args)
    if run.output_format == "text":
        meta["overall"] = report.overall.name
    return report, meta


def cmd_count(args, run: RunConfig):
    spec = _spec(args)
    cfg = ReprConfig(spec, args.limit, args.min_index)
    sieve = get_sieve(args.limit, run)
    meta = {**_spec_meta(args), "min_index": args.min_index}
    if args.checkpoints:
        return count_checkpoints(cfg, sieve, args.checkpoints, run.workers), meta
    count, members = representable_primes(cfg, sieve, members=args.list, workers=run.workers)
    record = {**meta, "N": args.limit, "count": count}
    rows = [(args.limit, count)]
    header: tuple[str, ...] = ("N", "count")
    if members is not None:
        record["primes"] = members
        header = ("N", "count", "primes")
        rows = [(args.limit, count, " ".join(map(str, members)))]
    if run.output_format == "text":
        # bare number for the common case, primes on a second line
        text = f"{count}\n" + (" ".join(map(str, members)) + "\n" if members is not None else "")
        return text, None
    return Tabular(header, tuple(rows), record), None


def cmd_fit(args, run: RunConfig):
    spec = _spec(args)
    limit = max(args.checkpoints)
    cfg = ReprConfig(spec, limit, args.min_index)
    table = count_checkpoints(cfg, get_sieve(limit, run), args.checkpoints, run.workers)
    fit = fit_exponent(table)
    if args.plot:
        Path(args.plot).write_text(plot_csv(table))
    predicted = classify_combination(spec).overall
    meta = {**_spec_meta(args), "min_index": args.min_index, "predicted_regime": predicted.name,
            "predicted_exponent": 1.0 if predicted.name == "Dense" else 1.5}
    if run.output_format == "json":
        meta["rows"] = [{"N": n, "count": k} for n, k in table.rows]
    elif run.output_format == "text":
        meta["counts"] = ", ".join(f"{n}:{k}" for n, k in table.rows)
    return fit, meta


def cmd_ap(args, run: RunConfig):
    limit, cps = _limit_and_checkpoints(args)
    cfg = ReprConfig(_spec(args), limit, args.min_index)
    reports = ap_report(cfg, get_sieve(limit, run), args.modulus, cps, run.workers)
    return reports, {**_spec_meta(args), "min_index": args.min_index}


def cmd_oq(args, run: RunConfig):
    limit, cps = _limit_and_checkpoints(args)
    table = oq_explore(args.modulus, get_sieve(limit, run), cps, run.workers)
    return table, None


def cmd_identity_check(args, run: RunConfig):
    if args.limit < 0:
        raise InvalidArgument("limit must be >= 0")
    identity_bad = [n for n in range(args.limit + 1)
                    if sum_of_two_triangulars(n, allow_zero=True) != corollary3_predicate(n)]
    sieve = get_sieve(max(args.limit, 2), run)
    law_bad = [p for p in sieve.members(args.limit)
               if sum_of_two_squares(p) != (p == 2 or p % 4 == 1)]
    record = {
        "N": args.limit,
        "identity_mismatches": len(identity_bad),
        "identity_first_mismatches": identity_bad[:10],
        "two_squares_prime_law_mismatches": len(law_bad),
        "ok": not identity_bad and not law_bad,
    }
    rows = ((args.limit, len(identity_bad), len(law_bad), not identity_bad and not law_bad),)
    return Tabular(("N", "identity_mismatches", "prime_law_mismatches", "ok"), rows, record), None


def cmd_sieve(args, run: RunConfig):
    sieve = get_sieve(args.limit, run)
    n = args.limit
    if args.modulus:
        q = args.modulus
        rows = tuple((a, primes_in_progression(sieve, a, q, n)) for a in range(q))
        record = {"N": n, "modulus": q, "primes": sieve.count(n),
                  "residues": [{"residue": a, "primes": k} for a, k in rows]}
        return Tabular(("residue", "primes"), rows, record), {"N": n, "primes": sieve.count(n)}
    record = {"N": n, "primes": sieve.count(n)}
    return Tabular(("N", "primes"), ((n, sieve.count(n)),), record), None


COMMANDS = {
    "classify": cmd_classify,
    "count": cmd_count,
    "fit": cmd_fit,
    "ap": cmd_ap,
    "oq": cmd_oq,
    "identity-check": cmd_identity_check,
    "sieve": cmd_sieve,
}


def _run_config(args) -> RunConfig:
    run = load_config(os.environ.get(CONFIG_ENV))
    overrides = {}
    if args.cache is not None:
        overrides["cache_dir"] = Path(args.cache)
    if args.workers is not None:
        overrides["workers"] = args.workers
    if args.format is not None:
        overrides["output_format"] = args.format
    return replace(run, **overrides)


def dispatch(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s", stream=sys.stderr)
    try:
        run = _run_config(args)
        result, meta = COMMANDS[args.command](args, run)
        text = result if isinstance(result, str) else emit_report(result, run.output_format, meta)
        if args.out:
            Path(args.out).write_text(text)
        else:
            sys.stdout.write(text)
    except InvalidArgument as exc:
        print(f"polyprime: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (CorruptCache, ResourceError, MemoryError, OSError) as exc:
        print(f"polyprime: error: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    return EXIT_OK


def main() -> None:
    sys.exit(dispatch())
