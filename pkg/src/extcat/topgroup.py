"""Extended category of finite topological groups.

For groups ``G, H`` the object ``F(G, H)`` collects, over every pair of group
topologies ``(t, t2)`` on ``G`` and ``H``, the set of homomorphisms that are
continuous from ``t`` to ``t2``.  Different topology pairs often give the same
hom-set, so objects are usually smaller than the number of pairs but still
hold more than one element.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

from .finstruct import (
    FiniteGroup,
    FiniteMap,
    FiniteTopology,
    compatible_topologies,
    enumerate_homomorphisms,
    is_continuous,
    is_group_topology,
)
from .kernel import ElementSetF, ExtendedCategory, Morphism, ObjectF

KIND = "group-hom"
MAX_GROUP_ORDER = 8


def continuous_homs(g: FiniteGroup, h: FiniteGroup, t: FiniteTopology, t2: FiniteTopology) -> frozenset[FiniteMap]:
    for grp, top in ((g, t), (h, t2)):
        if not is_group_topology(grp, top):
            raise ValueError(f"{top!r} is not a group topology on {grp.name}")
    return frozenset(f for f in enumerate_homomorphisms(g, h) if is_continuous(f, t, t2))


@dataclass(frozen=True)
class TopGroupObject:
    source: FiniteGroup
    target: FiniteGroup
    elements: frozenset[frozenset[FiniteMap]]
    # topology pair that first produced each element, for re-verification
    certificates: tuple[tuple[frozenset[FiniteMap], FiniteTopology, FiniteTopology], ...] = ()

    def as_object(self) -> ObjectF:
        return ObjectF(ElementSetF(Morphism(f, KIND) for f in e) for e in self.elements)


def build_object(g: FiniteGroup, h: FiniteGroup) -> TopGroupObject:
    homs = enumerate_homomorphisms(g, h)
    elements = []
    certs = []
    for t in compatible_topologies(g):
        for t2 in compatible_topologies(h):
            e = frozenset(f for f in homs if is_continuous(f, t, t2))
            if e not in elements:
                elements.append(e)
                certs.append((e, t, t2))
    return TopGroupObject(g, h, frozenset(elements), tuple(certs))


def compose_homs(f: Morphism, g: Morphism) -> Optional[Morphism]:
    if f.payload.cod != g.payload.dom:
        return None
    return Morphism(f.payload.then(g.payload), KIND)


def build_universe(groups: Sequence[FiniteGroup]) -> ExtendedCategory:
    """Objects ``F(G, H)`` for all ordered pairs from ``groups`` and every pair
    ``(F(G, H), F(H, K))`` sharing the middle group."""
    if not groups:
        raise ValueError("the universe needs at least one group")
    names = [g.name for g in groups]
    if len(set(names)) != len(names):
        raise ValueError(f"group names must be distinct: {names}")
    for g in groups:
        if len(g) > MAX_GROUP_ORDER:
            raise ValueError(f"group {g.name} has order {len(g)}; the limit is {MAX_GROUP_ORDER}")
    objects = {(g.name, h.name): build_object(g, h).as_object() for g in groups for h in groups}
    pi = [
        (objects[(g.name, h.name)], objects[(h.name, k.name)])
        for g in groups for h in groups for k in groups
    ]
    return ExtendedCategory(objects.values(), pi, compose_homs, name="topgroup", source=tuple(groups))


def object_for(ec: ExtendedCategory, g: FiniteGroup, h: FiniteGroup) -> ObjectF:
    """The object of ``ec`` built from ``(g, h)``."""
    want = build_object(g, h).as_object()
    if want not in ec.phi:
        raise KeyError(f"F({g.name}, {h.name}) is not in this universe")
    return want
