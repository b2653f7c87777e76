"""``cover-mi``: compare two cover files.

Prints one JSON object on stdout and a short summary on stderr.

Exit status: 0 success, 1 Monte Carlo did not converge within
``--max-events`` (report still printed), 2 parse or validation error,
3 node sets differ.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import asdict, dataclass, field

from .covers import (CoverError, DomainMismatchError, align, find_duplicate_modules,
                     is_partition, load_cover)
from .estimator import (DEFAULT_BATCH_SIZE, DEFAULT_MAX_EVENTS, DEFAULT_RISK,
                        DEFAULT_TOLERANCE, estimate_nmi)
from .oracle import DEFAULT_NODE_LIMIT, bruteforce_nmi
from .partition import exact_partition_nmi, joint_from_counting

EXIT_OK = 0
EXIT_NOT_CONVERGED = 1
EXIT_INVALID = 2
EXIT_DOMAIN = 3

METHODS = ("counting", "bruteforce", "montecarlo")


@dataclass
class RunReport:
    method: str
    mi_bits: float
    h_x_bits: float
    h_y_bits: float
    nmi_max: float | None
    nmi_avg: float | None
    n_events: int | None = None
    n_pairs: int | None = None
    error_bound: float | None = None
    risk: float | None = None
    tolerance: float | None = None
    seed: int | None = None
    converged: bool = True
    warnings: list[str] = field(default_factory=list)

    def to_json(self) -> str:
        if self.method not in METHODS:
            raise ValueError(f"unknown method {self.method!r}")
        return json.dumps(asdict(self), allow_nan=False)


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="cover-mi",
        description="Normalized mutual information between two (possibly overlapping) covers.")
    p.add_argument("cover_a", help="first cover file (node<TAB>module per line)")
    p.add_argument("cover_b", help="second cover file")
    p.add_argument("--risk", type=float, default=DEFAULT_RISK,
                   help="probability that the error exceeds the bound (default %(default)s)")
    p.add_argument("--tolerance", type=float, default=DEFAULT_TOLERANCE,
                   help="target error bound on the NMI (default %(default)s)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--max-events", type=int, default=DEFAULT_MAX_EVENTS)
    p.add_argument("--batch-size", type=int, default=DEFAULT_BATCH_SIZE)
    p.add_argument("--exact", action="store_true",
                   help="enumerate all interleavings when the node set is small enough")
    p.add_argument("--exact-limit", type=int, default=DEFAULT_NODE_LIMIT,
                   help="largest node count for --exact (default %(default)s)")
    p.add_argument("--merge-duplicates", action="store_true",
                   help="merge modules with identical node sets instead of failing")
    p.add_argument("--norm", choices=("max", "avg", "both"), default="both")
    p.add_argument("--threads", type=int, default=1)
    return p


def _load(path: str, merge: bool, warnings: list[str]):
    if merge:
        from .covers import parse_cover
        with open(path, encoding="utf-8") as fh:
            groups = find_duplicate_modules(parse_cover(fh, source=path))
        for g in groups:
            warnings.append(f"{path}: merged identical modules {', '.join(g)} into {g[0]}")
    return load_cover(path, merge_duplicates=merge)


def compute(args: argparse.Namespace, progress=None) -> RunReport:
    warnings: list[str] = []
    a = _load(args.cover_a, args.merge_duplicates, warnings)
    b = _load(args.cover_b, args.merge_duplicates, warnings)
    a, b = align(a, b)
    n = len(a.nodes)

    if is_partition(a) and is_partition(b):
        res = exact_partition_nmi(a, b)
        n_pairs = int((joint_from_counting(a, b).table > 0).sum())
        report = RunReport("counting", res.mi, res.h_x, res.h_y, res.nmi_max, res.nmi_avg,
                           n_pairs=n_pairs, error_bound=0.0)
    elif args.exact and n <= args.exact_limit:
        exact = bruteforce_nmi(a, b, node_limit=args.exact_limit)
        res = exact.mi
        report = RunReport("bruteforce", res.mi, res.h_x, res.h_y, res.nmi_max, res.nmi_avg,
                           n_pairs=len(exact.counts), error_bound=0.0)
    else:
        if args.exact:
            warnings.append(f"{n} nodes exceed --exact-limit {args.exact_limit}; using Monte Carlo")
        est = estimate_nmi(a, b, risk=args.risk, tolerance=args.tolerance, seed=args.seed,
                           max_events=args.max_events, batch_size=args.batch_size,
                           threads=args.threads, callback=progress)
        res = est.mi
        report = RunReport("montecarlo", res.mi, res.h_x, res.h_y, res.nmi_max, res.nmi_avg,
                           n_events=est.n_events, n_pairs=est.n_pairs, error_bound=est.error_bound,
                           risk=args.risk, tolerance=args.tolerance, seed=args.seed,
                           converged=est.converged)
        if not est.converged:
            warnings.append(f"error bound {est.error_bound:.6g} did not reach tolerance "
                            f"{args.tolerance} within {est.n_events} events")
    if args.norm == "max":
        report.nmi_avg = None
    elif args.norm == "avg":
        report.nmi_max = None
    report.warnings = warnings
    return report


def _summary(r: RunReport) -> str:
    parts = [f"method={r.method}", f"I={r.mi_bits:.6f} bits",
             f"H_X={r.h_x_bits:.6f}", f"H_Y={r.h_y_bits:.6f}"]
    if r.nmi_max is not None:
        parts.append(f"NMI_max={r.nmi_max:.6f}")
    if r.nmi_avg is not None:
        parts.append(f"NMI_avg={r.nmi_avg:.6f}")
    if r.method == "montecarlo":
        parts.append(f"N={r.n_events} bound={r.error_bound:.3g} converged={r.converged}")
    return " ".join(parts)


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    if not 0 < args.risk < 1 or args.tolerance <= 0 or args.batch_size < 1 or args.max_events < 1:
        print("cover-mi: --risk must be in (0, 1); --tolerance, --batch-size and "
              "--max-events must be positive", file=sys.stderr)
        return EXIT_INVALID

    progress = None
    if sys.stderr.isatty():
        def progress(n, bound, nmi):
            print(f"\rN={n} bound={bound:.4g} nmi={nmi:.6f}", end="", file=sys.stderr, flush=True)

    try:
        report = compute(args, progress)
    except DomainMismatchError as exc:
        print(f"cover-mi: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except (CoverError, OSError, UnicodeDecodeError) as exc:
        print(f"cover-mi: {exc}", file=sys.stderr)
        return EXIT_INVALID
    if progress is not None:
        print(file=sys.stderr)

    print(report.to_json())
    print(_summary(report), file=sys.stderr)
    for w in report.warnings:
        print(f"warning: {w}", file=sys.stderr)
    return EXIT_OK if report.converged else EXIT_NOT_CONVERGED


if __name__ == "__main__":
    sys.exit(main())
