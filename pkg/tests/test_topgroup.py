from __future__ import annotations

import oracles
import pytest

from extcat import finstruct, topgroup
from extcat.kernel import check_all, is_em_shaped, replay

Z2, Z4 = finstruct.preset_group("Z2"), finstruct.preset_group("Z4")


def table(g):
    return [list(r) for r in g.table]


def brute_object(g, h) -> set[frozenset[tuple[int, ...]]]:
    """Elements of F(g, h): continuous homomorphisms, per pair of group topologies."""
    homs = oracles.homomorphisms(table(g), table(h))
    tg = [t for t in oracles.topologies(len(g)) if oracles.is_group_topology(table(g), t)]
    th = [t for t in oracles.topologies(len(h)) if oracles.is_group_topology(table(h), t)]
    return {frozenset(f for f in homs if oracles.is_continuous(f, t, t2)) for t in tg for t2 in th}


def tables_of(obj) -> set[frozenset[tuple[int, ...]]]:
    return {frozenset(m.payload.table for m in e) for e in obj}


def test_z2_to_z2_object_has_two_elements():
    obj = topgroup.build_object(Z2, Z2)
    assert tables_of(obj.as_object()) == brute_object(Z2, Z2) == {
        frozenset({(0, 0), (0, 1)}),
        frozenset({(0, 0)}),
    }


@pytest.mark.parametrize("g", ["Z1", "Z2", "Z3", "Z4", "Z2xZ2"])
@pytest.mark.parametrize("h", ["Z1", "Z2", "Z3", "Z4", "Z2xZ2"])
def test_objects_match_bruteforce(g, h):
    g, h = finstruct.preset_group(g), finstruct.preset_group(h)
    assert tables_of(topgroup.build_object(g, h).as_object()) == brute_object(g, h)


def test_certificates_reproduce_their_elements():
    obj = topgroup.build_object(Z4, Z2)
    for e, t, t2 in obj.certificates:
        assert topgroup.continuous_homs(Z4, Z2, t, t2) == e


def test_continuous_homs_rejects_non_group_topology():
    x = Z2.carrier
    sierpinski = finstruct.FiniteTopology.from_subsets(x, [[], [x.labels[0]], list(x.labels)])
    with pytest.raises(ValueError):
        topgroup.continuous_homs(Z2, Z2, sierpinski, finstruct.FiniteTopology.discrete(x))


def test_universe_satisfies_all_axioms(topgroup_universe):
    ec, reports = topgroup_universe
    assert [r.holds for r in reports] == [True, True, True]
    assert all(replay(ec, r) for r in reports)
    # collapsed objects can merge chains, so at most one pair per group triple
    assert 0 < len(ec.pi) <= 6 ** 3
    ok, wide = is_em_shaped(ec)
    assert not ok and len(wide) >= 2


def test_chain_through_z4_has_full_hom_set_available(topgroup_universe):
    ec, reports = topgroup_universe
    a, b, c = (topgroup.object_for(ec, x, y) for x, y in ((Z2, Z4), (Z4, Z2), (Z2, Z2)))
    w = next(w for w in reports[1].witnesses if (w.f1, w.f2, w.f3) == (a, b, c))
    # indiscrete codomain topology makes every homomorphism continuous
    full = frozenset(oracles.homomorphisms(table(Z2), table(Z2)))
    assert w.f4 == topgroup.object_for(ec, Z2, Z2)
    assert full in tables_of(w.f4)


def test_relabeling_group_carriers_preserves_verdicts():
    groups = [finstruct.preset_group(n) for n in ("Z2", "Z4", "Z2xZ2")]
    renamed = [g.relabel(g.name + "'", [f"q{i}" for i in range(len(g))]) for g in groups]
    before = [r.holds for r in check_all(topgroup.build_universe(groups))]
    after = [r.holds for r in check_all(topgroup.build_universe(renamed))]
    assert before == after == [True, True, True]


def test_universe_input_guards():
    with pytest.raises(ValueError):
        topgroup.build_universe([])
    with pytest.raises(ValueError):
        topgroup.build_universe([Z2, Z2])
    big = finstruct.cyclic_group(topgroup.MAX_GROUP_ORDER + 1)
    with pytest.raises(ValueError, match="limit"):
        topgroup.build_universe([big])


def test_object_for_unknown_pair():
    ec = topgroup.build_universe([Z2])
    with pytest.raises(KeyError):
        topgroup.object_for(ec, Z4, Z4)
