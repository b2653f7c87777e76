import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from covermi import (Cover, NotAPartitionError, exact_partition_nmi, joint_from_counting,
                     joint_from_table, mutual_information, normalize)

from helpers import PARTITION_A, SPLIT_B, random_partition, renamed, rng


def brute_mi(a, b):
    """MI by counting common nodes with Fractions (test oracle)."""
    n = len(a.nodes)
    pxy = {}
    for node in a.nodes:
        (x,) = a.modules_of(node)
        (y,) = b.modules_of(node)
        pxy[x, y] = pxy.get((x, y), 0) + Fraction(1, n)
    px, py = {}, {}
    for (x, y), p in pxy.items():
        px[x] = px.get(x, 0) + p
        py[y] = py.get(y, 0) + p
    mi = sum(float(p) * math.log2(p / (px[x] * py[y])) for (x, y), p in pxy.items())
    hx = -sum(float(p) * math.log2(p) for p in px.values())
    hy = -sum(float(p) * math.log2(p) for p in py.values())
    return mi, hx, hy


def test_joint_self_comparison():
    a = Cover.from_modules({"1": ["n1", "n2"], "2": ["n3", "n4"]})
    j = joint_from_counting(a, a)
    np.testing.assert_array_equal(j.table, [[0.5, 0], [0, 0.5]])


def test_joint_split_example():
    j = joint_from_counting(PARTITION_A, SPLIT_B)
    assert j["1", "1"] == 0.5
    assert j["2", "2"] == 0.25
    assert j["2", "3"] == 0.25
    assert j["1", "2"] == j["1", "3"] == j["2", "1"] == 0


def test_joint_renamed_is_permutation():
    a = Cover.from_modules({"1": "ab", "2": "cde", "3": "f"})
    b = Cover.from_modules({"z": "f", "y": "ab", "x": "cde"})
    j = joint_from_counting(a, b).table
    assert ((j > 0).sum(axis=0) == 1).all() and ((j > 0).sum(axis=1) == 1).all()
    np.testing.assert_array_equal(np.sort(j.max(axis=1)), np.sort(joint_from_counting(a, a).px))


def test_joint_rejects_covers():
    c = Cover.from_memberships({"a": ["1", "2"], "b": ["2"]})
    p = Cover.from_memberships({"a": ["x"], "b": ["y"]})
    with pytest.raises(NotAPartitionError):
        joint_from_counting(c, p)
    with pytest.raises(NotAPartitionError):
        joint_from_counting(p, c)


def test_mi_independent():
    r = mutual_information(joint_from_table(np.full((2, 2), 0.25)))
    assert r.mi == 0
    assert r.nmi_max == 0
    assert r.h_x == r.h_y == 1


def test_mi_identity_coupling():
    r = mutual_information(joint_from_table([[0.5, 0], [0, 0.5]]))
    assert r.mi == 1 and r.h_x == 1 and r.h_y == 1
    assert r.nmi_max == 1


def test_mi_split_example():
    r = exact_partition_nmi(PARTITION_A, SPLIT_B)
    mi, hx, hy = brute_mi(PARTITION_A, SPLIT_B)
    assert r.mi == pytest.approx(mi, abs=1e-12) and r.mi == pytest.approx(1.0, abs=1e-12)
    assert r.h_x == pytest.approx(1.0, abs=1e-12) and r.h_y == pytest.approx(1.5, abs=1e-12)
    assert r.nmi_max == pytest.approx(2 / 3, abs=1e-12)
    assert hx == 1 and hy == 1.5


def test_normalize_worked_values():
    assert normalize(Fraction(2), Fraction(10), Fraction(15)) == (Fraction(2, 15), Fraction(4, 25))
    assert normalize(Fraction(2), Fraction(10), Fraction(2))[1] == Fraction(1, 3)
    assert normalize(0.0, 1.0, 1.0) == (0.0, 0.0)


def test_normalize_degenerate():
    assert normalize(0.0, 0.0, 0.0) == (1.0, 1.0)
    assert normalize(0.0, 0.0, 1.0) == (0.0, 0.0)


def test_single_module_vs_single_module():
    a = Cover.from_modules({"all": "abc"})
    r = exact_partition_nmi(a, renamed(a))
    assert r.h_x == r.h_y == 0
    assert r.nmi_max == 1 and r.nmi_avg == 1


def test_single_module_vs_partition_is_zero():
    a = Cover.from_modules({"all": "abcd"})
    b = Cover.from_modules({"1": "ab", "2": "cd"})
    r = exact_partition_nmi(a, b)
    assert r.mi == 0 and r.h_x == 0 and r.nmi_max == 0


def test_no_nan_on_sparse_joint():
    t = np.zeros((5, 5))
    t[0, 0] = 1
    r = mutual_information(joint_from_table(t))
    assert all(math.isfinite(v) for v in (r.mi, r.h_x, r.h_y, r.nmi_max, r.nmi_avg))


def test_one_shared_boundary_strictly_between():
    a = Cover.from_modules({"1": "abcd", "2": "efgh"})
    b = Cover.from_modules({"x": "abcdef", "y": "gh"})
    r = exact_partition_nmi(a, b)
    mi, hx, hy = brute_mi(a, b)
    assert 0 < r.nmi_max < 1
    assert r.mi == pytest.approx(mi, abs=1e-12)
    assert r.nmi_max == pytest.approx(mi / max(hx, hy), abs=1e-12)


def test_self_comparison_exactly_one():
    for seed in range(20):
        g = rng(seed)
        a = random_partition(g, int(g.integers(1, 40)), int(g.integers(1, 8)))
        assert exact_partition_nmi(a, a).nmi_max == 1
        assert exact_partition_nmi(a, renamed(a)).nmi_max == 1


seeds = st.integers(0, 2**32 - 1)


@settings(max_examples=60, deadline=None)
@given(seeds, st.integers(1, 30), st.integers(1, 6), st.integers(1, 6))
def test_against_fraction_oracle(seed, n, ka, kb):
    g = rng(seed)
    a = random_partition(g, n, ka, "a")
    b = random_partition(g, n, kb, "b")
    r = exact_partition_nmi(a, b)
    mi, hx, hy = brute_mi(a, b)
    assert r.mi == pytest.approx(mi, abs=1e-12)
    assert r.h_x == pytest.approx(hx, abs=1e-12)
    assert r.h_y == pytest.approx(hy, abs=1e-12)
    assert 0 <= r.mi <= min(r.h_x, r.h_y) + 1e-9
    assert 0 <= r.nmi_max <= 1 + 1e-9


@settings(max_examples=60, deadline=None)
@given(seeds, st.integers(1, 30), st.integers(1, 6), st.integers(1, 6))
def test_symmetry_and_relabeling(seed, n, ka, kb):
    g = rng(seed)
    a = random_partition(g, n, ka, "a")
    b = random_partition(g, n, kb, "b")
    ab = exact_partition_nmi(a, b)
    ba = exact_partition_nmi(b, a)
    assert ab.mi == ba.mi
    assert (ab.h_x, ab.h_y) == (ba.h_y, ba.h_x)
    assert ab.nmi_max == ba.nmi_max and ab.nmi_avg == ba.nmi_avg
    rr = exact_partition_nmi(renamed(a, "p"), renamed(b, "q"))
    assert rr == ab


@settings(max_examples=60, deadline=None)
@given(seeds, st.integers(2, 30), st.integers(1, 5), st.integers(2, 4))
def test_refinement(seed, n, ka, parts):
    g = rng(seed)
    a = random_partition(g, n, ka, "a")
    # b refines a: split each block by a random sub-label
    sub = g.integers(0, parts, n)
    b = Cover((node, f"{next(iter(a.modules_of(node)))}/{sub[i]}") for i, node in enumerate(a.nodes))
    r = exact_partition_nmi(a, b)
    assert r.mi == r.h_x
    assert r.h_y >= r.h_x
    if r.h_y > 0:
        assert r.nmi_max == pytest.approx(r.h_x / r.h_y, abs=1e-15)
