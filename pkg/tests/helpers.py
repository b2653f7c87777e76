"""Fixtures and random cover generators shared by the test modules."""

import numpy as np
from hypothesis import strategies as st

from covermi import Cover, merge_duplicate_modules

# Reference partition: two modules of four nodes each.
PARTITION_A = Cover.from_modules({"1": ["n1", "n2", "n3", "n4"], "2": ["n5", "n6", "n7", "n8"]})
# Module 2 split in two.
SPLIT_B = Cover.from_modules({"1": ["n1", "n2", "n3", "n4"], "2": ["n5", "n6"], "3": ["n7", "n8"]})
# Module 3 nested inside module 2.
HIERARCHY_C = Cover.from_modules(
    {"1": ["n1", "n2", "n3", "n4"], "2": ["n5", "n6", "n7", "n8"], "3": ["n7", "n8"]})
# n4 and n5 belong to both modules.
OVERLAP_D = Cover.from_modules({"1": ["n1", "n2", "n3", "n4", "n5"], "2": ["n4", "n5", "n6", "n7", "n8"]})

# Six-node pair used for Monte Carlo coverage checks.
SMALL_PARTITION = Cover.from_modules({"p": ["a", "b", "c"], "q": ["d", "e", "f"]})
SMALL_OVERLAP = Cover.from_modules({"x": ["a", "b", "c", "d"], "y": ["c", "d", "e", "f"]})


def random_partition(rng, n, k, prefix="m"):
    labels = rng.integers(0, k, n)
    return Cover((f"n{i}", f"{prefix}{lab}") for i, lab in enumerate(labels))


def random_cover(rng, n, k, extra=0.3, prefix="m"):
    """Partition into ``k`` blocks plus random extra memberships; duplicates merged."""
    labels = rng.integers(0, k, n)
    pairs = [(f"n{i}", f"{prefix}{lab}") for i, lab in enumerate(labels)]
    n_extra = int(extra * n)
    for i in rng.integers(0, n, n_extra):
        pairs.append((f"n{i}", f"{prefix}{rng.integers(0, k)}"))
    return merge_duplicate_modules(Cover(pairs))


def renamed(cover, tag="r"):
    """Equivalent cover with new module names and shuffled pair order."""
    pairs = [(node, f"{tag}:{module}") for node, module in cover.iter_pairs()]
    return Cover(reversed(pairs))


@st.composite
def covers(draw, max_nodes=6, max_modules=5, prefix="m"):
    """Well-defined covers over nodes ``n0 .. n{k-1}``."""
    n = draw(st.integers(1, max_nodes))
    k = draw(st.integers(1, max_modules))
    memberships = []
    for i in range(n):
        mods = draw(st.sets(st.integers(0, k - 1), min_size=1, max_size=k))
        memberships.extend((f"n{i}", f"{prefix}{j}") for j in sorted(mods))
    return merge_duplicate_modules(Cover(memberships))


@st.composite
def cover_pairs(draw, max_nodes=6, max_modules=5):
    a = draw(covers(max_nodes=max_nodes, max_modules=max_modules, prefix="a"))
    n = len(a.nodes)
    k = draw(st.integers(1, max_modules))
    memberships = []
    for node in a.nodes:
        mods = draw(st.sets(st.integers(0, k - 1), min_size=1, max_size=k))
        memberships.extend((node, f"b{j}") for j in sorted(mods))
    b = merge_duplicate_modules(Cover(memberships))
    assert len(b.nodes) == n
    return a, b


def rng(seed):
    return np.random.default_rng(seed)
