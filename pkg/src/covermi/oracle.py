"""Exact NMI of two covers by enumerating interleavings.

:func:`bruteforce_nmi` walks every permutation and every bit vector and runs
the full fold for each one, with exact integer tallies.  It is the reference
the sampler is tested against and is limited to tiny node sets.

:func:`prefix_enumeration_nmi` enumerates interleaving prefixes instead and
stops a branch once both covers hold a single module; the
``(n - d)! * 2**(n - d)`` completions of a resolved ``d``-node prefix all
give the same pair.  This reaches larger node sets whenever the covers resolve
quickly (partitions resolve at the first node).
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np
from numba import njit

from .covers import Cover, CoverError, align, check_well_defined
from .partition import JointDistribution, MiResult, mutual_information

DEFAULT_NODE_LIMIT = 8


class EnumerationTooLarge(ValueError):
    pass


@dataclass(frozen=True)
class ExactCoverResult:
    """Exact pair tallies over the whole interleaving space of size ``total``."""

    counts: dict[tuple[str, str], int]
    total: int
    joint: JointDistribution
    mi: MiResult

    def probability(self, x: str, y: str) -> Fraction:
        return Fraction(self.counts.get((x, y), 0), self.total)


def interleaving_count(n: int) -> int:
    return math.factorial(n) * 2 ** (n - 1)


def _result(a: Cover, b: Cover, counts: dict[tuple[int, int], int], total: int) -> ExactCoverResult:
    if sum(counts.values()) != total:
        raise AssertionError("tallies do not cover the interleaving space")
    table = np.zeros((len(a.modules), len(b.modules)))
    for (x, y), c in counts.items():
        table[x, y] = float(Fraction(c, total))
    rows = [i for i in range(table.shape[0]) if table[i].any()]
    cols = [j for j in range(table.shape[1]) if table[:, j].any()]
    joint = JointDistribution(table[np.ix_(rows, cols)],
                              tuple(a.modules[i] for i in rows), tuple(b.modules[j] for j in cols))
    labelled = {(a.modules[x], b.modules[y]): c for (x, y), c in counts.items()}
    return ExactCoverResult(labelled, total, joint, mutual_information(joint))


@njit(cache=True)
def _single(s):
    # index of the only member of a multi-word set, or -1
    found = -1
    for w in range(s.shape[0]):
        x = s[w]
        if x == 0:
            continue
        if found >= 0 or (x & (x - np.uint64(1))) != 0:
            return -1
        j = 0
        while x != np.uint64(1):
            x >>= np.uint64(1)
            j += 1
        found = 64 * w + j
    return found


@njit(cache=True)
def _enumerate_all(perms, mem_a, mem_b, counts):
    """Run the full fold on every (permutation, bit vector); tally final pairs.

    Module sets are bit masks split over 64-bit words.  Returns the number of
    interleavings that left more than one module on either side.
    """
    n = perms.shape[1]
    wa = mem_a.shape[1]
    wb = mem_b.shape[1]
    sa = np.empty(wa, np.uint64)
    sb = np.empty(wb, np.uint64)
    ca = np.empty_like(sa)
    cb = np.empty_like(sb)
    failures = 0
    for p in range(perms.shape[0]):
        e0 = perms[p, 0]
        for bits in range(1 << (n - 1)):
            for w in range(wa):
                sa[w] = mem_a[e0, w]
            for w in range(wb):
                sb[w] = mem_b[e0, w]
            for k in range(1, n):
                e = perms[p, k]
                bit = (bits >> (k - 1)) & 1
                # S <- S & l(e) or S & ~l(e), kept only if non-empty
                nonzero = False
                for w in range(wa):
                    ca[w] = sa[w] & mem_a[e, w] if bit == 1 else sa[w] & ~mem_a[e, w]
                    if ca[w] != 0:
                        nonzero = True
                if nonzero:
                    for w in range(wa):
                        sa[w] = ca[w]
                nonzero = False
                for w in range(wb):
                    cb[w] = sb[w] & mem_b[e, w] if bit == 1 else sb[w] & ~mem_b[e, w]
                    if cb[w] != 0:
                        nonzero = True
                if nonzero:
                    for w in range(wb):
                        sb[w] = cb[w]
            x = _single(sa)
            y = _single(sb)
            if x < 0 or y < 0:
                failures += 1
            else:
                counts[x, y] += 1
    return failures


def _membership_masks(c: Cover) -> np.ndarray:
    """Row ``i`` is the module set of node ``i`` as 64-bit words."""
    words = (len(c.modules) + 63) // 64
    m = np.zeros((len(c.nodes), words), dtype=np.uint64)
    for i, mods in enumerate(c.node_modules):
        for j in mods:
            m[i, j // 64] |= np.uint64(1) << np.uint64(j % 64)
    return m


def bruteforce_nmi(a: Cover, b: Cover, node_limit: int = DEFAULT_NODE_LIMIT) -> ExactCoverResult:
    """Exact NMI over all ``n! * 2**(n-1)`` interleavings."""
    check_well_defined(a)
    check_well_defined(b)
    a, b = align(a, b)
    n = len(a.nodes)
    if n > node_limit:
        raise EnumerationTooLarge(
            f"{n} nodes exceed the enumeration limit of {node_limit} "
            f"({interleaving_count(n)} interleavings); use estimate_nmi instead")
    perms = np.array(list(itertools.permutations(range(n))), dtype=np.int64).reshape(-1, n)
    counts = np.zeros((len(a.modules), len(b.modules)), dtype=np.int64)
    failures = _enumerate_all(perms, _membership_masks(a), _membership_masks(b), counts)
    if failures:
        raise CoverError(f"{failures} interleavings did not resolve to a single module")
    tally = {(int(x), int(y)): int(counts[x, y]) for x, y in zip(*np.nonzero(counts))}
    return _result(a, b, tally, interleaving_count(n))


def prefix_enumeration_nmi(a: Cover, b: Cover, max_leaves: int = 10**7) -> ExactCoverResult:
    """Exact NMI by enumerating interleaving prefixes until both sides resolve."""
    check_well_defined(a)
    check_well_defined(b)
    a, b = align(a, b)
    n = len(a.nodes)
    ell_a = [frozenset(m) for m in a.node_modules]
    ell_b = [frozenset(m) for m in b.node_modules]
    weight = [math.factorial(n - d) * 2 ** (n - d) for d in range(n + 1)]
    tally: dict[tuple[int, int], int] = {}
    leaves = 0

    def walk(remaining: list[int], sa: frozenset, sb: frozenset) -> None:
        nonlocal leaves
        d = n - len(remaining)
        if len(sa) == 1 and len(sb) == 1:
            leaves += 1
            if leaves > max_leaves:
                raise EnumerationTooLarge(f"more than {max_leaves} resolved prefixes")
            key = (next(iter(sa)), next(iter(sb)))
            tally[key] = tally.get(key, 0) + weight[d]
            return
        if not remaining:
            raise CoverError("interleaving did not resolve to a single module")
        for pos, e in enumerate(remaining):
            rest = remaining[:pos] + remaining[pos + 1:]
            for bit in (0, 1):
                if bit:
                    na, nb = sa & ell_a[e], sb & ell_b[e]
                else:
                    na, nb = sa - ell_a[e], sb - ell_b[e]
                walk(rest, na or sa, nb or sb)

    for e0 in range(n):
        walk([e for e in range(n) if e != e0], ell_a[e0], ell_b[e0])
    return _result(a, b, tally, interleaving_count(n))
