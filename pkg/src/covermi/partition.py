"""Mutual information of module-pair distributions and exact partition NMI.

All information quantities are in bits.  Entropies are always taken from the
marginals of the joint table so that ``I <= min(H_X, H_Y)`` holds as computed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Hashable, Sequence

import numpy as np

from .covers import Cover, align, require_partition


@dataclass(frozen=True)
class JointDistribution:
    """Joint probabilities of (module of A, module of B); rows index A."""

    table: np.ndarray
    row_labels: tuple[Hashable, ...]
    col_labels: tuple[Hashable, ...]

    def __post_init__(self):
        t = np.asarray(self.table, dtype=float)
        if t.ndim != 2 or t.shape != (len(self.row_labels), len(self.col_labels)):
            raise ValueError("table shape does not match labels")
        if (t < 0).any():
            raise ValueError("negative probability")
        if abs(math.fsum(t.ravel()) - 1.0) > 1e-12:
            raise ValueError(f"probabilities sum to {t.sum()!r}, not 1")
        object.__setattr__(self, "table", t)

    # summing in sorted order keeps marginals bit-identical under relabeling
    @property
    def px(self) -> np.ndarray:
        return np.sort(self.table, axis=1).sum(axis=1)

    @property
    def py(self) -> np.ndarray:
        return np.sort(self.table, axis=0).sum(axis=0)

    def __getitem__(self, key: tuple[Hashable, Hashable]) -> float:
        x, y = key
        return float(self.table[self.row_labels.index(x), self.col_labels.index(y)])

    def transpose(self) -> "JointDistribution":
        return JointDistribution(self.table.T, self.col_labels, self.row_labels)


@dataclass(frozen=True)
class MiResult:
    mi: float
    h_x: float
    h_y: float
    nmi_max: float
    nmi_avg: float


def entropy(p) -> float:
    """Shannon entropy in bits of ``p / sum(p)``; zeros contribute nothing.

    A single non-zero mass gives exactly 0 even when rounding left its value
    slightly off 1.
    """
    p = np.asarray(p, dtype=float).ravel()
    p = p[p > 0]
    # fsum makes the result independent of term order
    total = math.fsum(p)
    h = math.log2(total) - math.fsum(p * np.log2(p)) / total
    return h if h > 0 else 0.0


def normalize(mi, h_x, h_y):
    """Max- and average-normalized MI ``(I_n, I_a)``.

    If both entropies are zero the variables are constant, hence equivalent,
    and both normalizations are 1.  Works on floats and on ``Fraction`` s.
    """
    hmax = max(h_x, h_y)
    hsum = h_x + h_y
    if hmax == 0:
        one = Fraction(1) if isinstance(mi, Fraction) else 1.0
        return one, one
    return mi / hmax, 2 * mi / hsum


def _mi_from_entropies(h_x: float, h_y: float, h_xy: float) -> float:
    # I = H_X + H_Y - H_XY; when one side determines the other
    # (H_XY == H_Y or H_XY == H_X) the result is exact.
    if h_xy == h_y:
        mi = h_x
    elif h_xy == h_x:
        mi = h_y
    else:
        mi = (h_x + h_y) - h_xy
    if mi <= 0:
        return 0.0
    return min(mi, h_x, h_y)


def mutual_information(joint: JointDistribution) -> MiResult:
    t = joint.table
    h_x = entropy(joint.px)
    h_y = entropy(joint.py)
    mi = _mi_from_entropies(h_x, h_y, entropy(t))
    nmi_max, nmi_avg = normalize(mi, h_x, h_y)
    return MiResult(mi, h_x, h_y, float(nmi_max), float(nmi_avg))


def overlap_counts(a: Cover, b: Cover) -> tuple[np.ndarray, tuple[str, ...], tuple[str, ...]]:
    """Number of common nodes for every (module of a, module of b)."""
    a, b = align(a, b)
    counts = np.zeros((len(a.modules), len(b.modules)), dtype=np.int64)
    for ma, mb in zip(a.node_modules, b.node_modules):
        for x in ma:
            for y in mb:
                counts[x, y] += 1
    return counts, a.modules, b.modules


def joint_from_counting(a: Cover, b: Cover) -> JointDistribution:
    """Fraction of nodes shared by each pair of partition blocks."""
    require_partition(a, "first cover")
    require_partition(b, "second cover")
    counts, rows, cols = overlap_counts(a, b)
    return JointDistribution(counts / len(a.nodes), rows, cols)


def joint_from_table(table, row_labels: Sequence[Hashable] | None = None,
                     col_labels: Sequence[Hashable] | None = None) -> JointDistribution:
    t = np.asarray(table, dtype=float)
    rows = tuple(row_labels) if row_labels is not None else tuple(range(t.shape[0]))
    cols = tuple(col_labels) if col_labels is not None else tuple(range(t.shape[1]))
    return JointDistribution(t / math.fsum(t.ravel()), rows, cols)


def exact_partition_nmi(a: Cover, b: Cover) -> MiResult:
    return mutual_information(joint_from_counting(a, b))
