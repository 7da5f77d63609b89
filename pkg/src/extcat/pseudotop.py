"""Finite model of the extended category of pseudo-topologies.

Topology data ``(sigma, sigma2)`` on spaces ``(E, E2)`` does not pin down the
continuity classes: any ``psi`` inside the continuous maps and any ``psi_u``
inside ``psi`` is admissible.  An element set is the product ``psi x psi_u``
of pair morphisms ``(f, f_u)``, and the object ``F(sigma, sigma2)`` gathers the
element sets of all admissible choices allowed by the enumeration policy.

Policies:

``exhaustive``
    every ``psi_u <= psi <= Cont(sigma, sigma2)``; only when ``|Cont| <= 4``.
``maximal-plus``
    three choices: ``(Cont, Cont)``, ``(Cont, Const)`` and ``(Const, Const)``
    where ``Const`` are the constant maps (always continuous).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Optional, Sequence

from .finstruct import (
    FiniteMap,
    FiniteSet,
    FiniteTopology,
    continuous_maps,
    enumerate_topologies,
    is_coarser,
    is_continuous,
)
from .kernel import ElementSetF, ExtendedCategory, Morphism, ObjectF

KIND = "pair-map"
POLICIES = ("exhaustive", "maximal-plus")
MAX_EXHAUSTIVE_CONT = 4
MAX_SPACE_SIZE = 3


@dataclass(frozen=True)
class PairMorphism:
    f: FiniteMap
    f_u: FiniteMap

    def __post_init__(self) -> None:
        if (self.f.dom, self.f.cod) != (self.f_u.dom, self.f_u.cod):
            raise ValueError("both components must map between the same spaces")

    def then(self, other: PairMorphism) -> Optional[PairMorphism]:
        if self.f.cod != other.f.dom:
            return None
        return PairMorphism(self.f.then(other.f), self.f_u.then(other.f_u))

    def canonical(self) -> list:
        return [self.f.canonical(), list(self.f_u.table)]


@dataclass(frozen=True)
class PseudoTopologyTheta:
    e: FiniteSet
    e2: FiniteSet
    sigma: FiniteTopology
    sigma2: FiniteTopology
    psi: frozenset[FiniteMap] = field(default_factory=frozenset)
    psi_u: frozenset[FiniteMap] = field(default_factory=frozenset)

    def __post_init__(self) -> None:
        object.__setattr__(self, "psi", frozenset(self.psi))
        object.__setattr__(self, "psi_u", frozenset(self.psi_u))
        if self.sigma.space != self.e or self.sigma2.space != self.e2:
            raise ValueError("topologies must live on the declared spaces")
        for f in self.psi:
            if not is_continuous(f, self.sigma, self.sigma2):
                raise ValueError(f"{f!r} in psi is not continuous")
        if not self.psi_u <= self.psi:
            raise ValueError("psi_u must be contained in psi")


def pair_morphism(f: FiniteMap, f_u: FiniteMap) -> Morphism:
    return Morphism(PairMorphism(f, f_u), KIND)


def theta_element_set(theta: PseudoTopologyTheta) -> ElementSetF:
    """The product ``psi x psi_u`` as an element set of pair morphisms."""
    return ElementSetF(pair_morphism(f, fu) for f in theta.psi for fu in theta.psi_u)


def compose_pairs(p: Morphism, q: Morphism) -> Optional[Morphism]:
    """``p`` then ``q`` componentwise; undefined when the middle spaces differ."""
    r = p.payload.then(q.payload)
    return None if r is None else Morphism(r, KIND)


def _subsets(items: Sequence) -> Iterable[frozenset]:
    for k in range(len(items) + 1):
        for c in itertools.combinations(items, k):
            yield frozenset(c)


def admissible_thetas(sigma: FiniteTopology, sigma2: FiniteTopology, policy: str) -> list[PseudoTopologyTheta]:
    e, e2 = sigma.space, sigma2.space
    return [PseudoTopologyTheta(e, e2, sigma, sigma2, psi, psi_u)
            for psi, psi_u in _choices(frozenset(continuous_maps(sigma, sigma2)), policy)]


def _choices(cont: frozenset[FiniteMap], policy: str) -> list[tuple[frozenset, frozenset]]:
    """The ``(psi, psi_u)`` pairs a policy admits for the continuous maps ``cont``."""
    if policy == "exhaustive":
        if len(cont) > MAX_EXHAUSTIVE_CONT:
            raise ValueError(
                f"exhaustive policy needs |Cont| <= {MAX_EXHAUSTIVE_CONT}, got {len(cont)}; use maximal-plus"
            )
        return [(psi, psi_u) for psi in _subsets(sorted(cont, key=lambda f: f.table))
                for psi_u in _subsets(sorted(psi, key=lambda f: f.table))]
    if policy == "maximal-plus":
        const = frozenset(f for f in cont if f.is_constant)
        return [(cont, cont), (cont, const), (const, const)]
    raise ValueError(f"unknown policy {policy!r}; expected one of {POLICIES}")


def build_object(sigma: FiniteTopology, sigma2: FiniteTopology, policy: str = "maximal-plus") -> ObjectF:
    return ObjectF({theta_element_set(t) for t in admissible_thetas(sigma, sigma2, policy)})


def _object_from_cont(cont: frozenset[FiniteMap], policy: str, morphisms: dict) -> ObjectF:
    def pm(f: FiniteMap, fu: FiniteMap) -> Morphism:
        key = (f, fu)
        if key not in morphisms:
            morphisms[key] = pair_morphism(f, fu)
        return morphisms[key]

    return ObjectF({ElementSetF(pm(f, fu) for f in psi for fu in psi_u)
                    for psi, psi_u in _choices(cont, policy)})


@dataclass(frozen=True)
class PseudoTopUniverse:
    """Inputs of :func:`build_universe`, kept on the structure it returns."""

    spaces: tuple[FiniteSet, ...]
    policy: str
    topologies: Optional[dict] = None
    require_coarser: bool = True


def build_universe(
    spaces: Sequence[FiniteSet],
    policy: str = "maximal-plus",
    topologies: Optional[Mapping[FiniteSet, Sequence[FiniteTopology]]] = None,
    require_coarser: bool = True,
) -> ExtendedCategory:
    """Objects ``F(sigma, sigma2)`` for all topologies on all ordered space pairs.

    ``pi`` holds ``(F(sigma, s1), F(s2, sigma3))`` whenever ``s1`` and ``s2`` live
    on the same middle space and ``s2`` is coarser than ``s1``.  ``topologies``
    restricts the topologies considered per space (default: all of them);
    ``require_coarser=False`` drops the side condition on the middle topologies.
    """
    if not spaces:
        raise ValueError("the universe needs at least one space")
    if len(set(spaces)) != len(spaces):
        raise ValueError("spaces must be distinct")
    if policy not in POLICIES:
        raise ValueError(f"unknown policy {policy!r}; expected one of {POLICIES}")
    for s in spaces:
        if len(s) == 0:
            raise ValueError("spaces must be nonempty")
        if len(s) > MAX_SPACE_SIZE:
            raise ValueError(f"space {s.name} has {len(s)} points; the limit is {MAX_SPACE_SIZE}")
    tops = {s: list(topologies[s]) if topologies and s in topologies else enumerate_topologies(s)
            for s in spaces}
    for s, ts in tops.items():
        if not ts or any(t.space != s for t in ts):
            raise ValueError(f"topologies given for {s.name} must be nonempty and live on it")
    # F(sigma, sigma2) depends only on Cont(sigma, sigma2), so equal sets share one object
    by_cont: dict[frozenset, ObjectF] = {}
    morphisms: dict = {}
    ending: dict[FiniteTopology, set[ObjectF]] = {}
    starting: dict[FiniteTopology, set[ObjectF]] = {}
    for e in spaces:
        for e2 in spaces:
            for t in tops[e]:
                for t2 in tops[e2]:
                    cont = frozenset(continuous_maps(t, t2))
                    if cont not in by_cont:
                        by_cont[cont] = _object_from_cont(cont, policy, morphisms)
                    ending.setdefault(t2, set()).add(by_cont[cont])
                    starting.setdefault(t, set()).add(by_cont[cont])
    pi = set()
    for s in spaces:
        for m1 in tops[s]:
            for m2 in tops[s]:
                if require_coarser and not is_coarser(m2, m1):
                    continue
                pi.update((a, b) for a in ending[m1] for b in starting[m2])
    source = PseudoTopUniverse(tuple(spaces), policy, {s: tuple(ts) for s, ts in tops.items()} if topologies else None,
                               require_coarser)
    return ExtendedCategory(by_cont.values(), pi, compose_pairs, name="pseudotop", source=source)
