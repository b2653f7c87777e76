"""Monte Carlo estimation of cover NMI with a probabilistic error bound.

Events (sampled interleavings) are tallied per module pair.  The plug-in NMI
of the observed frequencies is the estimate.  Its error is bounded by
perturbing each observed frequency, one at a time, to the farthest binomial
probability still compatible with the observed count at component risk
``risk / m`` and summing the absolute changes of the NMI.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field
from typing import Callable, Hashable, Iterable

import numpy as np
from scipy import special

from .covers import Cover, align, check_well_defined
from .interleaving import EventSampler
from .partition import JointDistribution, MiResult, mutual_information

DEFAULT_RISK = 0.05
DEFAULT_TOLERANCE = 0.01
DEFAULT_BATCH_SIZE = 10_000
DEFAULT_MAX_EVENTS = 10**8

_THETA_TOL = 1e-10
_BISECTION_STEPS = 40  # 2**-40 < 1e-12
_DEGENERATE_H = 1e-12


class JointCounts:
    """Event counts per observed (module of A, module of B) pair."""

    def __init__(self, counts: dict[tuple[Hashable, Hashable], int] | Iterable | None = None):
        self.counts: Counter = Counter()
        if counts is not None:
            self.counts.update(counts)
        if any(v < 0 for v in self.counts.values()):
            raise ValueError("negative count")
        self.counts = +self.counts  # drop zero entries

    @property
    def total(self) -> int:
        return sum(self.counts.values())

    @property
    def n_pairs(self) -> int:
        return len(self.counts)

    def add(self, pair: tuple[Hashable, Hashable], k: int = 1) -> "JointCounts":
        if k < 0:
            raise ValueError("negative count")
        if k:
            self.counts[pair] += k
        return self

    def __add__(self, other: "JointCounts") -> "JointCounts":
        return JointCounts(self.counts + other.counts)

    merge = __add__

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, JointCounts):
            return NotImplemented
        return self.counts == other.counts

    def __repr__(self) -> str:
        return f"JointCounts(n_events={self.total}, n_pairs={self.n_pairs})"

    def transpose(self) -> "JointCounts":
        return JointCounts({(y, x): v for (x, y), v in self.counts.items()})

    def arrays(self):
        """``(zeta, rows, cols, row_labels, col_labels)`` with dense label indices."""
        row_labels: dict = {}
        col_labels: dict = {}
        zeta = np.empty(len(self.counts), np.int64)
        rows = np.empty(len(self.counts), np.int64)
        cols = np.empty(len(self.counts), np.int64)
        for i, ((x, y), v) in enumerate(self.counts.items()):
            rows[i] = row_labels.setdefault(x, len(row_labels))
            cols[i] = col_labels.setdefault(y, len(col_labels))
            zeta[i] = v
        return zeta, rows, cols, tuple(row_labels), tuple(col_labels)


def accumulate(counts: JointCounts, pair: tuple[Hashable, Hashable]) -> JointCounts:
    """Copy of ``counts`` with one more event for ``pair``."""
    return JointCounts(counts.counts).add(pair)


def nmi_from_counts(counts: JointCounts) -> MiResult:
    """Plug-in mutual information of the observed pair frequencies."""
    n = counts.total
    if n < 1:
        raise ValueError("no events counted")
    zeta, rows, cols, row_labels, col_labels = counts.arrays()
    table = np.zeros((len(row_labels), len(col_labels)))
    table[rows, cols] = zeta / n
    return mutual_information(JointDistribution(table, row_labels, col_labels))


def theta_far(zeta, n, xi):
    """Farthest binomial probabilities compatible with ``zeta`` successes of ``n``.

    ``high`` solves ``P(X <= zeta) = xi/2`` and ``low`` solves
    ``P(X >= zeta) = xi/2`` for ``X ~ Binomial(n, theta)``, by bisection to
    better than 1e-10.  ``high = 1`` when ``zeta == n`` and ``low = 0`` when
    ``zeta == 0``.  Accepts scalars or arrays.
    """
    scalar = np.ndim(zeta) == 0
    zeta = np.atleast_1d(np.asarray(zeta, dtype=np.int64))
    n = int(n)
    if not 0 < xi < 1:
        raise ValueError(f"component risk must be in (0, 1), got {xi!r}")
    if n < 1 or (zeta < 0).any() or (zeta > n).any():
        raise ValueError("counts must satisfy 0 <= zeta <= n, n >= 1")
    target = xi / 2
    k = zeta.astype(float)

    # P(X <= zeta) decreases in theta
    lo = np.zeros(zeta.shape)
    hi = np.ones(zeta.shape)
    for _ in range(_BISECTION_STEPS):
        mid = 0.5 * (lo + hi)
        above = special.bdtr(k, n, mid) > target
        lo = np.where(above, mid, lo)
        hi = np.where(above, hi, mid)
    high = np.where(zeta == n, 1.0, 0.5 * (lo + hi))

    # P(X >= zeta) = P(X > zeta - 1) increases in theta
    lo = np.zeros(zeta.shape)
    hi = np.ones(zeta.shape)
    km1 = np.maximum(k - 1, 0)
    for _ in range(_BISECTION_STEPS):
        mid = 0.5 * (lo + hi)
        below = special.bdtrc(km1, n, mid) < target
        lo = np.where(below, mid, lo)
        hi = np.where(below, hi, mid)
    low = np.where(zeta == 0, 0.0, 0.5 * (lo + hi))

    if scalar:
        return float(low[0]), float(high[0])
    return low, high


def _xlogx(x):
    x = np.asarray(x, dtype=float)
    out = np.zeros_like(x)
    pos = x > 0
    out[pos] = x[pos] * np.log2(x[pos])
    return out


def perturbed_nmi(freq, rows, cols, t):
    """Max-normalized NMI after replacing ``freq[i]`` by ``t[i]``, for every ``i``.

    ``freq`` holds the joint weights of the observed pairs at ``(rows, cols)``.
    The perturbed vector is renormalized to total mass 1 before evaluating the
    entropies.  Only the touched cell, row and column change, so all ``m``
    perturbations cost O(m) together.
    """
    freq = np.asarray(freq, dtype=float)
    t = np.asarray(t, dtype=float)
    px = np.bincount(rows, weights=freq)
    py = np.bincount(cols, weights=freq)
    g_xy = math.fsum(_xlogx(freq))
    g_x = math.fsum(_xlogx(px))
    g_y = math.fsum(_xlogx(py))
    total = math.fsum(freq)

    s = total - freq + t
    gxy = g_xy - _xlogx(freq) + _xlogx(t)
    pr = px[rows]
    pc = py[cols]
    gx = g_x - _xlogx(pr) + _xlogx(np.maximum(pr - freq + t, 0.0))
    gy = g_y - _xlogx(pc) + _xlogx(np.maximum(pc - freq + t, 0.0))

    with np.errstate(divide="ignore", invalid="ignore"):
        ls = np.log2(s)
        h_xy = ls - gxy / s
        h_x = np.maximum(ls - gx / s, 0.0)
        h_y = np.maximum(ls - gy / s, 0.0)
        mi = np.clip(h_x + h_y - h_xy, 0.0, np.minimum(h_x, h_y))
        hmax = np.maximum(h_x, h_y)
        nmi = np.where(hmax < _DEGENERATE_H, 1.0, mi / np.where(hmax > 0, hmax, 1.0))
    return nmi


def _bound_from_arrays(zeta, rows, cols, n, risk):
    m = len(zeta)
    xi = risk / m
    low, high = theta_far(zeta, n, xi)
    freq = zeta / n
    f0 = perturbed_nmi(freq, rows, cols, freq)
    d_low = np.abs(f0 - perturbed_nmi(freq, rows, cols, low))
    d_high = np.abs(f0 - perturbed_nmi(freq, rows, cols, high))
    return math.fsum(np.maximum(d_low, d_high))


def error_bound(counts: JointCounts, risk: float = DEFAULT_RISK) -> float:
    """Worst-case first-order bound on ``|estimate - true NMI|`` at risk ``risk``."""
    if not 0 < risk < 1:
        raise ValueError(f"risk must be in (0, 1), got {risk!r}")
    n = counts.total
    if n < 1:
        raise ValueError("no events counted")
    zeta, rows, cols, _, _ = counts.arrays()
    return _bound_from_arrays(zeta, rows, cols, n, risk)


@dataclass(frozen=True)
class NmiEstimate:
    nmi: float
    error_bound: float
    n_events: int
    n_pairs: int
    mi: MiResult
    converged: bool
    risk: float
    tolerance: float
    seed: int
    counts: JointCounts = field(repr=False, compare=False)


def estimate_nmi(
    a: Cover,
    b: Cover,
    risk: float = DEFAULT_RISK,
    tolerance: float = DEFAULT_TOLERANCE,
    seed: int = 0,
    max_events: int = DEFAULT_MAX_EVENTS,
    batch_size: int = DEFAULT_BATCH_SIZE,
    threads: int = 1,
    callback: Callable[[int, float, float], None] | None = None,
) -> NmiEstimate:
    """Sample events in batches until the error bound drops below ``tolerance``.

    Sampling stops early with ``converged=False`` once ``max_events`` events
    have been drawn.  ``callback(n_events, bound, nmi)`` runs after each batch.
    """
    if not 0 < risk < 1:
        raise ValueError(f"risk must be in (0, 1), got {risk!r}")
    if not tolerance > 0:
        raise ValueError(f"tolerance must be positive, got {tolerance!r}")
    if batch_size < 1 or max_events < 1:
        raise ValueError("batch_size and max_events must be positive")
    check_well_defined(a)
    check_well_defined(b)
    a, b = align(a, b)
    sampler = EventSampler(a, b, seed=seed, threads=threads)
    width = len(b.modules)

    tally: dict[int, int] = {}
    n = 0
    batch = 0
    while True:
        size = min(batch_size, max_events - n)
        ia, ib = sampler.sample(batch, size)
        codes, freq = np.unique(ia * width + ib, return_counts=True)
        for code, k in zip(codes.tolist(), freq.tolist()):
            tally[code] = tally.get(code, 0) + k
        n += size
        batch += 1

        codes = np.fromiter(tally, np.int64, len(tally))
        zeta = np.fromiter(tally.values(), np.int64, len(tally))
        rows, cols = np.divmod(codes, width)
        bound = _bound_from_arrays(zeta, np.unique(rows, return_inverse=True)[1],
                                   np.unique(cols, return_inverse=True)[1], n, risk)
        counts = JointCounts({(a.modules[r], b.modules[c]): int(z)
                              for r, c, z in zip(rows.tolist(), cols.tolist(), zeta.tolist())})
        mi = nmi_from_counts(counts)
        if callback is not None:
            callback(n, bound, mi.nmi_max)
        converged = bound < tolerance
        if converged or n >= max_events:
            break

    return NmiEstimate(
        nmi=mi.nmi_max,
        error_bound=bound,
        n_events=n,
        n_pairs=len(tally),
        mi=mi,
        converged=converged,
        risk=risk,
        tolerance=tolerance,
        seed=seed,
        counts=counts,
    )
