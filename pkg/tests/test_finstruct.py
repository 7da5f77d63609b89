from __future__ import annotations

import itertools

import oracles
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from extcat.finstruct import (
    PRESET_GROUPS,
    FiniteGroup,
    FiniteMap,
    FiniteSet,
    FiniteTopology,
    all_maps,
    compatible_topologies,
    continuous_maps,
    coset_topology,
    enumerate_homomorphisms,
    enumerate_topologies,
    is_coarser,
    is_continuous,
    is_group_topology,
    is_normal,
    is_topology,
    minimal_neighbourhoods,
    normal_subgroups,
    preset_group,
    product_topology,
    subgroups,
)

SMALL_GROUPS = [n for n in PRESET_GROUPS if len(preset_group(n)) <= 4]


def table(g: FiniteGroup) -> list[list[int]]:
    return [list(r) for r in g.table]


# -- sets and maps -------------------------------------------------------------


def test_duplicate_labels_rejected():
    with pytest.raises(ValueError):
        FiniteSet(("a", "a"))


def test_map_must_be_total_and_in_range():
    x = FiniteSet.of_size(2, "X")
    with pytest.raises(ValueError):
        FiniteMap(x, x, (0,))
    with pytest.raises(ValueError):
        FiniteMap(x, x, (0, 2))


def test_then_is_diagrammatic():
    x, y = FiniteSet.of_size(2, "X"), FiniteSet.of_size(3, "Y")
    f = FiniteMap(x, y, (2, 0))
    g = FiniteMap(y, x, (1, 1, 0))
    assert f.then(g).table == (0, 1)
    assert f.then(g).dom == x and f.then(g).cod == x


def test_then_rejects_mismatched_spaces():
    x, y = FiniteSet.of_size(2, "X"), FiniteSet.of_size(2, "Y")
    with pytest.raises(ValueError):
        FiniteMap.identity(x).then(FiniteMap.identity(y))


@given(st.data())
def test_then_is_associative(data):
    spaces = [FiniteSet.of_size(data.draw(st.integers(1, 3)), n) for n in "ABCD"]
    maps = [
        FiniteMap(a, b, tuple(data.draw(st.integers(0, len(b) - 1)) for _ in range(len(a))))
        for a, b in zip(spaces, spaces[1:])
    ]
    f, g, h = maps
    assert f.then(g).then(h) == f.then(g.then(h))


def test_z2_to_z4_to_z2_composes_to_zero():
    z2, z4 = preset_group("Z2"), preset_group("Z4")
    f = FiniteMap(z2.carrier, z4.carrier, (0, 2))
    g = FiniteMap(z4.carrier, z2.carrier, tuple(i % 2 for i in range(4)))
    zero = f.then(g)
    # pointwise: 0 -> 0 -> 0 and 1 -> 2 -> 0
    assert zero.table == tuple(g.table[f.table[i]] for i in range(2)) == (0, 0)


# -- topologies ----------------------------------------------------------------


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_topology_count_matches_bruteforce(n):
    assert len(enumerate_topologies(FiniteSet.of_size(n))) == oracles.topology_count(n)


@pytest.mark.parametrize("n", [1, 2, 3])
def test_topologies_equal_bruteforce_families(n):
    got = {t.opens for t in enumerate_topologies(FiniteSet.of_size(n))}
    assert got == oracles.topologies(n)


def test_topology_enumeration_is_guarded():
    with pytest.raises(ValueError, match="limited"):
        enumerate_topologies(FiniteSet.of_size(5))


@settings(max_examples=200)
@given(st.sets(st.integers(0, 7)))
def test_is_topology_agrees_with_closure_definition(family):
    fam = set(family)
    expected = {0, 7} <= fam and all((a | b) in fam and (a & b) in fam for a in fam for b in fam)
    assert is_topology(FiniteSet.of_size(3), fam) == expected


def test_invalid_topology_rejected():
    x = FiniteSet.of_size(2)
    with pytest.raises(ValueError):
        FiniteTopology(x, frozenset({0, 1, 2, 3}) - {0})


def test_from_subsets_and_minimal_neighbourhoods():
    x = FiniteSet(("a", "b", "c"), "X")
    t = FiniteTopology.from_subsets(x, [[], ["a"], ["a", "b"], ["a", "b", "c"]])
    assert minimal_neighbourhoods(t) == (0b001, 0b011, 0b111)


def test_coarser_is_open_set_containment():
    x = FiniteSet.of_size(2)
    ind, dis = FiniteTopology.indiscrete(x), FiniteTopology.discrete(x)
    assert is_coarser(ind, dis) and not is_coarser(dis, ind)
    with pytest.raises(ValueError):
        is_coarser(ind, FiniteTopology.indiscrete(FiniteSet.of_size(2, "Y")))


@pytest.mark.parametrize("n", [1, 2, 3])
def test_continuous_maps_match_preimage_oracle(n):
    x, y = FiniteSet.of_size(n, "X"), FiniteSet.of_size(2, "Y")
    for t in enumerate_topologies(x):
        for t2 in enumerate_topologies(y):
            got = {f.table for f in continuous_maps(t, t2)}
            want = {f for f in itertools.product(range(2), repeat=n) if oracles.is_continuous(f, t.opens, t2.opens)}
            assert got == want


def test_continuity_checks_spaces():
    x, y = FiniteSet.of_size(2, "X"), FiniteSet.of_size(2, "Y")
    with pytest.raises(ValueError):
        is_continuous(FiniteMap.identity(x), FiniteTopology.discrete(y), FiniteTopology.discrete(x))


def test_product_topology_of_sierpinski_spaces():
    x = FiniteSet.of_size(2, "X")
    s = FiniteTopology.from_subsets(x, [[], ["x0"], ["x0", "x1"]])
    p = product_topology(s, s)
    # minimal neighbourhoods are products of the factors' ones
    n = minimal_neighbourhoods(s)
    for i, j in itertools.product(range(2), repeat=2):
        want = sum(1 << (a * 2 + b) for a in range(2) if n[i] >> a & 1 for b in range(2) if n[j] >> b & 1)
        assert minimal_neighbourhoods(p)[i * 2 + j] == want


# -- groups --------------------------------------------------------------------


def test_group_validation():
    x = ["e", "a"]
    with pytest.raises(ValueError, match="identity"):
        FiniteGroup.from_table("bad", x, [["a", "a"], ["a", "a"]])
    with pytest.raises(ValueError, match="closed"):
        FiniteGroup("bad", FiniteSet.of_size(2), ((0, 1), (1, 2)))


@pytest.mark.parametrize("name", list(PRESET_GROUPS))
def test_normal_subgroups_match_bruteforce(name):
    g = preset_group(name)
    assert set(normal_subgroups(g)) == oracles.normal_subgroups(table(g))


def test_s3_has_a_non_normal_subgroup():
    g = preset_group("S3")
    non_normal = [h for h in subgroups(g) if not is_normal(g, h)]
    assert len(non_normal) == 3


@pytest.mark.parametrize("g_name,h_name", list(itertools.product(["Z1", "Z2", "Z3", "Z4", "Z2xZ2", "S3"], repeat=2)))
def test_homomorphisms_match_all_maps_filter(g_name, h_name):
    g, h = preset_group(g_name), preset_group(h_name)
    got = {f.table for f in enumerate_homomorphisms(g, h)}
    assert got == oracles.homomorphisms(table(g), table(h))
    assert len({f.table for f in all_maps(g.carrier, h.carrier)}) == len(h) ** len(g)


@pytest.mark.parametrize("name", SMALL_GROUPS)
def test_group_topologies_are_exactly_coset_topologies(name):
    g = preset_group(name)
    brute = {t.opens for t in enumerate_topologies(g.carrier) if oracles.is_group_topology(table(g), t.opens)}
    cosets = {coset_topology(g, n).opens for n in normal_subgroups(g)}
    assert cosets == brute
    assert {t.opens for t in compatible_topologies(g)} == brute
    assert {t.opens for t in enumerate_topologies(g.carrier) if is_group_topology(g, t)} == brute


def test_coset_topology_requires_normal_subgroup():
    g = preset_group("S3")
    h = next(h for h in subgroups(g) if not is_normal(g, h))
    with pytest.raises(ValueError):
        coset_topology(g, h)


def test_relabel_keeps_structure():
    g = preset_group("Z4")
    h = g.relabel("C4", ["e", "r", "rr", "rrr"])
    assert len(normal_subgroups(h)) == len(normal_subgroups(g))
    assert [f.table for f in enumerate_homomorphisms(h, h)] == [f.table for f in enumerate_homomorphisms(g, g)]
