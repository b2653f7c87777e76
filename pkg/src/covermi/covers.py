"""Covers: node-to-module membership relations, their parsing and validation.

A cover is a binary relation between a finite node set and a module set in
which a node may belong to several modules.  Partitions are the special case
where every node has exactly one module.

Nodes and modules are identified by the exact strings read from input and
are mapped to dense integer indices in first-appearance order.
"""

from __future__ import annotations

import io
import os
from collections import defaultdict
from typing import Iterable, Sequence, TextIO

import numpy as np


class CoverError(ValueError):
    """Base class for cover construction and validation failures."""


class CoverParseError(CoverError):
    def __init__(self, message: str, line: int | None = None, source: str | None = None):
        self.line = line
        self.source = source
        where = ""
        if source is not None:
            where += f"{source}:"
        if line is not None:
            where += f"{line}:"
        super().__init__(f"{where} {message}" if where else message)


class DomainMismatchError(CoverError):
    def __init__(self, only_a: Sequence[str], only_b: Sequence[str]):
        self.only_a = list(only_a)
        self.only_b = list(only_b)
        super().__init__(
            "covers are over different node sets; "
            f"only in first: {self.only_a[:10]!r}"
            + (" ..." if len(self.only_a) > 10 else "")
            + f"; only in second: {self.only_b[:10]!r}"
            + (" ..." if len(self.only_b) > 10 else "")
        )


class DuplicateModuleError(CoverError):
    def __init__(self, groups: list[list[str]], source: str | None = None):
        self.groups = groups
        prefix = f"{source}: " if source else ""
        shown = "; ".join("{" + ", ".join(g) + "}" for g in groups)
        super().__init__(f"{prefix}modules with identical node sets: {shown}")


class NotAPartitionError(CoverError):
    pass


class Cover:
    """Immutable membership relation between nodes and modules.

    ``node_modules[i]`` is the sorted tuple of module indices of node ``i``
    and ``module_nodes[j]`` the sorted tuple of node indices of module ``j``.
    """

    __slots__ = ("nodes", "modules", "node_modules", "module_nodes",
                 "_node_index", "_module_index", "_csr")

    def __init__(self, pairs: Iterable[tuple[str, str]]):
        node_index: dict[str, int] = {}
        module_index: dict[str, int] = {}
        node_sets: list[set[int]] = []
        for node, module in pairs:
            i = node_index.get(node)
            if i is None:
                i = node_index[node] = len(node_index)
                node_sets.append(set())
            j = module_index.get(module)
            if j is None:
                j = module_index[module] = len(module_index)
            node_sets[i].add(j)
        if not node_index:
            raise CoverError("empty cover")

        module_sets: list[list[int]] = [[] for _ in module_index]
        for i, mods in enumerate(node_sets):
            for j in mods:
                module_sets[j].append(i)

        self.nodes: tuple[str, ...] = tuple(node_index)
        self.modules: tuple[str, ...] = tuple(module_index)
        self.node_modules: tuple[tuple[int, ...], ...] = tuple(tuple(sorted(s)) for s in node_sets)
        self.module_nodes: tuple[tuple[int, ...], ...] = tuple(tuple(sorted(s)) for s in module_sets)
        self._node_index = node_index
        self._module_index = module_index
        self._csr = None

    @classmethod
    def from_modules(cls, modules: dict[str, Iterable[str]]) -> "Cover":
        """Build a cover from ``{module: nodes}``."""
        return cls((node, module) for module, nodes in modules.items() for node in nodes)

    @classmethod
    def from_memberships(cls, memberships: dict[str, Iterable[str]]) -> "Cover":
        """Build a cover from ``{node: modules}``."""
        return cls((node, module) for node, mods in memberships.items() for module in mods)

    def __len__(self) -> int:
        return len(self.nodes)

    def __repr__(self) -> str:
        return f"Cover(n_nodes={len(self.nodes)}, n_modules={len(self.modules)}, n_pairs={self.n_pairs})"

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Cover):
            return NotImplemented
        return self.pairs() == other.pairs()

    def __hash__(self) -> int:
        return hash(frozenset(self.pairs()))

    @property
    def n_pairs(self) -> int:
        return sum(len(m) for m in self.node_modules)

    def node_id(self, node: str) -> int:
        return self._node_index[node]

    def module_id(self, module: str) -> int:
        return self._module_index[module]

    def modules_of(self, node: str) -> frozenset[str]:
        """Module labels of ``node``."""
        return frozenset(self.modules[j] for j in self.node_modules[self._node_index[node]])

    def nodes_of(self, module: str) -> frozenset[str]:
        return frozenset(self.nodes[i] for i in self.module_nodes[self._module_index[module]])

    def pairs(self) -> set[tuple[str, str]]:
        return {(self.nodes[i], self.modules[j])
                for i, mods in enumerate(self.node_modules) for j in mods}

    def iter_pairs(self):
        """Yield ``(node, module)`` pairs in index order."""
        for i, mods in enumerate(self.node_modules):
            for j in mods:
                yield self.nodes[i], self.modules[j]

    def reindex(self, nodes: Sequence[str]) -> "Cover":
        """Same relation with nodes indexed in the order given by ``nodes``.

        Module indices keep their first-appearance order.
        """
        if len(nodes) != len(self.nodes) or set(nodes) != set(self._node_index):
            raise DomainMismatchError(
                sorted(set(nodes) - set(self._node_index)),
                sorted(set(self._node_index) - set(nodes)),
            )
        if tuple(nodes) == self.nodes:
            return self
        c = Cover.__new__(Cover)
        c.nodes = tuple(nodes)
        c.modules = self.modules
        c._node_index = {node: i for i, node in enumerate(c.nodes)}
        c._module_index = self._module_index
        c.node_modules = tuple(self.node_modules[self._node_index[node]] for node in c.nodes)
        c.module_nodes = tuple(
            tuple(sorted(c._node_index[self.nodes[i]] for i in mnodes)) for mnodes in self.module_nodes
        )
        c._csr = None
        return c

    def csr(self) -> tuple[np.ndarray, np.ndarray]:
        """Membership as CSR arrays ``(indptr, indices)``, rows = nodes, sorted columns."""
        if self._csr is None:
            lengths = np.fromiter((len(m) for m in self.node_modules), dtype=np.int64,
                                  count=len(self.node_modules))
            indptr = np.zeros(len(lengths) + 1, dtype=np.int64)
            np.cumsum(lengths, out=indptr[1:])
            indices = np.fromiter((j for mods in self.node_modules for j in mods),
                                  dtype=np.int64, count=int(indptr[-1]))
            indptr.flags.writeable = False
            indices.flags.writeable = False
            self._csr = (indptr, indices)
        return self._csr


def parse_cover(stream: TextIO | Iterable[str], source: str | None = None) -> Cover:
    """Read a cover from ``node<TAB>module`` lines.

    Lines starting with ``#`` and blank lines are skipped; repeated pairs are
    kept once.  Identifiers are taken verbatim.
    """
    pairs: list[tuple[str, str]] = []
    for lineno, raw in enumerate(stream, start=1):
        line = raw.rstrip("\r\n")
        if not line.strip() or line.startswith("#"):
            continue
        fields = line.split("\t")
        if len(fields) != 2:
            raise CoverParseError(
                f"expected 2 tab-separated fields (node, module), got {len(fields)}", lineno, source)
        node, module = fields
        if not node or not module:
            raise CoverParseError("empty node or module identifier", lineno, source)
        pairs.append((node, module))
    if not pairs:
        raise CoverParseError("empty cover", None, source)
    return Cover(pairs)


def parse_cover_text(text: str) -> Cover:
    return parse_cover(io.StringIO(text))


def load_cover(path: str | os.PathLike, merge_duplicates: bool = False) -> Cover:
    """Parse a cover file and enforce the no-duplicate-module condition.

    With ``merge_duplicates`` each group of identical modules collapses into
    the member with the lexicographically smallest id instead of raising.
    """
    source = os.fspath(path)
    with open(path, encoding="utf-8") as fh:
        cover = parse_cover(fh, source=source)
    if merge_duplicates:
        return merge_duplicate_modules(cover)
    groups = find_duplicate_modules(cover)
    if groups:
        raise DuplicateModuleError(groups, source)
    return cover


def format_cover(cover: Cover) -> str:
    return "".join(f"{node}\t{module}\n" for node, module in cover.iter_pairs())


def common_domain(a: Cover, b: Cover) -> tuple[str, ...]:
    """Shared node order (sorted ids) if both covers have the same node set.

    The order does not depend on which cover comes first.
    """
    na, nb = set(a.nodes), set(b.nodes)
    if na != nb:
        raise DomainMismatchError(
            sorted(n for n in a.nodes if n not in nb),
            sorted(n for n in b.nodes if n not in na),
        )
    return tuple(sorted(na))


def align(a: Cover, b: Cover) -> tuple[Cover, Cover]:
    """Return ``a`` and ``b`` reindexed onto their common node order."""
    nodes = common_domain(a, b)
    return a.reindex(nodes), b.reindex(nodes)


def find_duplicate_modules(cover: Cover) -> list[list[str]]:
    """Groups (size >= 2) of module ids whose node sets are identical."""
    by_nodes: dict[tuple[int, ...], list[str]] = defaultdict(list)
    for j, nodes in enumerate(cover.module_nodes):
        by_nodes[nodes].append(cover.modules[j])
    return [sorted(g) for g in by_nodes.values() if len(g) > 1]


def check_well_defined(cover: Cover) -> Cover:
    groups = find_duplicate_modules(cover)
    if groups:
        raise DuplicateModuleError(groups)
    return cover


def merge_duplicate_modules(cover: Cover) -> Cover:
    groups = find_duplicate_modules(cover)
    if not groups:
        return cover
    rename = {m: g[0] for g in groups for m in g[1:]}
    return Cover((node, rename.get(module, module)) for node, module in cover.iter_pairs())


def is_partition(cover: Cover) -> bool:
    return all(len(m) == 1 for m in cover.node_modules)


def require_partition(cover: Cover, name: str = "cover") -> None:
    if not is_partition(cover):
        raise NotAPartitionError(
            f"{name} has nodes with several modules; use the Monte Carlo estimator "
            "(estimate_nmi) or the exact enumerator (bruteforce_nmi) for covers")
