"""Interleavings and the disambiguation of multiple memberships.

An interleaving is a permutation of the nodes with an operation bit between
consecutive nodes (1 = intersection, 0 = difference).  Folding the bits over
the module sets of the nodes, starting from the modules of the first node and
only accepting non-empty results, reduces a cover to a single module.

Two implementations live here: :func:`disambiguate`, a plain Python fold over
a materialized :class:`Interleaving`, and a compiled sampler that draws the
interleaving lazily (partial Fisher-Yates) and stops once both covers have
resolved to one module.  Stopping early is exact because a singleton set is a
fixed point of the fold.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np
from numba import njit

from .covers import Cover, CoverError, align

#: Events per independently seeded chunk.  Part of the reproducibility
#: contract: a batch of ``k`` events is split into ``ceil(k / CHUNK_SIZE)``
#: chunks, chunk ``c`` of batch ``b`` draws from the stream keyed ``(b, c)``.
CHUNK_SIZE = 4096


class IllDefinedCoverError(CoverError):
    """Disambiguation ended with more than one module."""


@dataclass(frozen=True)
class Interleaving:
    """Node order (indices into a node tuple) and the ``n - 1`` operation bits.

    ``bits[k - 1]`` is applied together with ``order[k]``.
    """

    order: tuple[int, ...]
    bits: tuple[int, ...]

    def __post_init__(self):
        n = len(self.order)
        if n == 0:
            raise ValueError("empty interleaving")
        if sorted(self.order) != list(range(n)):
            raise ValueError("node order is not a permutation")
        if len(self.bits) != n - 1:
            raise ValueError(f"expected {n - 1} operation bits, got {len(self.bits)}")
        if any(b not in (0, 1) for b in self.bits):
            raise ValueError("operation bits must be 0 or 1")

    @classmethod
    def from_nodes(cls, cover: Cover, seq) -> "Interleaving":
        """Build from an alternating sequence ``[node, op, node, op, ...]``.

        ``op`` is ``1``/``"&"``/``"∩"`` for intersection and ``0``/``"-"``/``"\\"``
        /``"∖"`` for difference.  Nodes not listed are appended in index order
        with intersection bits.
        """
        ops = {1: 1, "&": 1, "∩": 1, 0: 0, "-": 0, "\\": 0, "∖": 0}
        nodes = [cover.node_id(x) for x in seq[0::2]]
        bits = [ops[x] for x in seq[1::2]]
        if len(bits) >= len(nodes):
            raise ValueError("sequence must start and end with a node")
        rest = [i for i in range(len(cover.nodes)) if i not in set(nodes)]
        return cls(tuple(nodes + rest), tuple(bits + [1] * len(rest)))


def make_rng(seed=None) -> np.random.Generator:
    return np.random.default_rng(seed)


def chunk_rng(seed: int, batch: int, chunk: int) -> np.random.Generator:
    """Deterministic substream for chunk ``chunk`` of batch ``batch``."""
    ss = np.random.SeedSequence(seed, spawn_key=(batch, chunk))
    return np.random.Generator(np.random.PCG64(ss))


def sample_interleaving(rng: np.random.Generator, n: int) -> Interleaving:
    """Uniform interleaving of ``n`` nodes: a random permutation and fair bits."""
    if n < 1:
        raise ValueError("cannot interleave an empty node set")
    order = rng.permutation(n)
    bits = rng.integers(0, 2, size=n - 1)
    return Interleaving(tuple(int(i) for i in order), tuple(int(b) for b in bits))


def _intersect(s: tuple[int, ...], t: tuple[int, ...]) -> tuple[int, ...]:
    out = []
    i = j = 0
    while i < len(s) and j < len(t):
        if s[i] == t[j]:
            out.append(s[i])
            i += 1
            j += 1
        elif s[i] < t[j]:
            i += 1
        else:
            j += 1
    return tuple(out)


def _difference(s: tuple[int, ...], t: tuple[int, ...]) -> tuple[int, ...]:
    out = []
    i = j = 0
    while i < len(s):
        if j >= len(t) or s[i] < t[j]:
            out.append(s[i])
            i += 1
        elif s[i] == t[j]:
            i += 1
            j += 1
        else:
            j += 1
    return tuple(out)


def disambiguate_index(cover: Cover, il: Interleaving, early_exit: bool = True,
                       trace: list | None = None) -> int:
    """Module index selected by ``cover`` for interleaving ``il``.

    ``trace``, if given, receives the candidate set after every step.
    """
    if len(il.order) != len(cover.nodes):
        raise ValueError("interleaving and cover have different node counts")
    ell = cover.node_modules
    s = ell[il.order[0]]
    if trace is not None:
        trace.append(s)
    for node, bit in zip(il.order[1:], il.bits):
        if early_exit and len(s) == 1:
            break
        cand = _intersect(s, ell[node]) if bit else _difference(s, ell[node])
        if cand:
            s = cand
        if trace is not None:
            trace.append(s)
    if len(s) != 1:
        raise IllDefinedCoverError(
            "cover not well-defined: disambiguation left modules "
            + ", ".join(cover.modules[j] for j in s))
    return s[0]


def disambiguate(cover: Cover, il: Interleaving, early_exit: bool = True) -> str:
    """Module id selected by ``cover`` for interleaving ``il``."""
    return cover.modules[disambiguate_index(cover, il, early_exit)]


def run_event(a: Cover, b: Cover, rng: np.random.Generator) -> tuple[str, str]:
    """One event: a shared random interleaving disambiguated by both covers."""
    a, b = align(a, b)
    il = sample_interleaving(rng, len(a.nodes))
    return disambiguate(a, il), disambiguate(b, il)


# ---------------------------------------------------------------------------
# compiled path


@njit(cache=True, nogil=True)
def _fold(s, ls, mods, bit, tmp):
    # s[:ls] and mods are sorted; result overwrites s only if non-empty
    i = 0
    j = 0
    t = 0
    nm = mods.shape[0]
    if bit == 1:
        while i < ls and j < nm:
            if s[i] == mods[j]:
                tmp[t] = s[i]
                t += 1
                i += 1
                j += 1
            elif s[i] < mods[j]:
                i += 1
            else:
                j += 1
    else:
        while i < ls:
            if j >= nm or s[i] < mods[j]:
                tmp[t] = s[i]
                t += 1
                i += 1
            elif s[i] == mods[j]:
                i += 1
                j += 1
            else:
                j += 1
    if t == 0:
        return ls
    for q in range(t):
        s[q] = tmp[q]
    return t


@njit(cache=True, nogil=True)
def _max_degree(indptr):
    d = 0
    for i in range(indptr.shape[0] - 1):
        if indptr[i + 1] - indptr[i] > d:
            d = indptr[i + 1] - indptr[i]
    return d


@njit(cache=True, nogil=True)
def _disambiguate_given(indptr, indices, order, bits, early_exit):
    """Fold over a materialized interleaving; returns (module, final size)."""
    d = _max_degree(indptr)
    s = np.empty(d, np.int64)
    tmp = np.empty(d, np.int64)
    e = order[0]
    ls = indptr[e + 1] - indptr[e]
    for q in range(ls):
        s[q] = indices[indptr[e] + q]
    for k in range(1, order.shape[0]):
        if early_exit and ls == 1:
            break
        e = order[k]
        ls = _fold(s, ls, indices[indptr[e]:indptr[e + 1]], bits[k - 1], tmp)
    return s[0], ls


@njit(cache=True, nogil=True)
def _sample_pairs(indptr_a, idx_a, indptr_b, idx_b, rng, out_a, out_b):
    """Fill ``out_a``/``out_b`` with module pairs of independent events.

    Per step ``k`` the node is drawn first (``perm[k]`` swapped with a uniform
    position in ``[k, n)``) and then the operation bit.  Returns the number of
    events that did not resolve to a single module on both sides.
    """
    n = indptr_a.shape[0] - 1
    sa = np.empty(_max_degree(indptr_a), np.int64)
    sb = np.empty(_max_degree(indptr_b), np.int64)
    tmp = np.empty(max(sa.shape[0], sb.shape[0]), np.int64)
    perm = np.arange(n)
    bad = 0
    for ev in range(out_a.shape[0]):
        j = rng.integers(0, n)
        e = perm[j]
        perm[j] = perm[0]
        perm[0] = e
        la = indptr_a[e + 1] - indptr_a[e]
        for q in range(la):
            sa[q] = idx_a[indptr_a[e] + q]
        lb = indptr_b[e + 1] - indptr_b[e]
        for q in range(lb):
            sb[q] = idx_b[indptr_b[e] + q]
        k = 1
        while (la > 1 or lb > 1) and k < n:
            j = rng.integers(k, n)
            e = perm[j]
            perm[j] = perm[k]
            perm[k] = e
            bit = rng.integers(0, 2)
            if la > 1:
                la = _fold(sa, la, idx_a[indptr_a[e]:indptr_a[e + 1]], bit, tmp)
            if lb > 1:
                lb = _fold(sb, lb, idx_b[indptr_b[e]:indptr_b[e + 1]], bit, tmp)
            k += 1
        if la != 1 or lb != 1:
            bad += 1
            out_a[ev] = -1
            out_b[ev] = -1
        else:
            out_a[ev] = sa[0]
            out_b[ev] = sb[0]
    return bad


def disambiguate_compiled(cover: Cover, il: Interleaving, early_exit: bool = True) -> str:
    """Compiled counterpart of :func:`disambiguate`."""
    indptr, indices = cover.csr()
    j, size = _disambiguate_given(indptr, indices, np.asarray(il.order, np.int64),
                                  np.asarray(il.bits, np.int64), early_exit)
    if size != 1:
        raise IllDefinedCoverError("cover not well-defined: disambiguation left several modules")
    return cover.modules[j]


class EventSampler:
    """Draws batches of events for a pair of covers on a shared node order.

    Results depend only on ``seed``, the batch index and the batch size, never
    on ``threads``.
    """

    def __init__(self, a: Cover, b: Cover, seed: int = 0, threads: int = 1):
        self.a, self.b = align(a, b)
        self.seed = int(seed)
        self.threads = max(1, int(threads))
        self._csr_a = self.a.csr()
        self._csr_b = self.b.csr()

    def _chunk(self, batch: int, chunk: int, size: int) -> tuple[np.ndarray, np.ndarray]:
        out_a = np.empty(size, np.int64)
        out_b = np.empty(size, np.int64)
        bad = _sample_pairs(*self._csr_a, *self._csr_b, chunk_rng(self.seed, batch, chunk), out_a, out_b)
        if bad:
            raise IllDefinedCoverError(
                f"{bad} events did not resolve to a single module; check for duplicate modules")
        return out_a, out_b

    def sample(self, batch: int, n_events: int) -> tuple[np.ndarray, np.ndarray]:
        """Module index pairs of ``n_events`` events of batch number ``batch``."""
        sizes = [min(CHUNK_SIZE, n_events - start) for start in range(0, n_events, CHUNK_SIZE)]
        jobs = list(enumerate(sizes))
        if self.threads > 1 and len(jobs) > 1:
            with ThreadPoolExecutor(self.threads) as pool:
                parts = list(pool.map(lambda job: self._chunk(batch, *job), jobs))
        else:
            parts = [self._chunk(batch, c, size) for c, size in jobs]
        if not parts:
            return np.empty(0, np.int64), np.empty(0, np.int64)
        return np.concatenate([p[0] for p in parts]), np.concatenate([p[1] for p in parts])
