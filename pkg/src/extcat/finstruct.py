"""Finite sets, maps, topologies and groups.

Subsets of a carrier are encoded as bitmasks over the carrier order, so bit
``i`` stands for ``carrier.labels[i]``.  That order is the canonical order for
everything built on top: subsets sort as integers, topologies by their sorted
open masks, maps by their value tables.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Iterator, Sequence

MAX_TOPOLOGY_POINTS = 4


def bits(mask: int) -> Iterator[int]:
    """Indices of the set bits of ``mask`` in increasing order."""
    i = 0
    while mask:
        if mask & 1:
            yield i
        mask >>= 1
        i += 1


def mask_of(indices: Iterable[int]) -> int:
    m = 0
    for i in indices:
        m |= 1 << i
    return m


@dataclass(frozen=True)
class FiniteSet:
    labels: tuple[str, ...]
    name: str = ""

    def __post_init__(self) -> None:
        object.__setattr__(self, "labels", tuple(str(x) for x in self.labels))
        if len(set(self.labels)) != len(self.labels):
            raise ValueError(f"duplicate labels in carrier {self.labels!r}")

    @classmethod
    def of_size(cls, n: int, name: str = "X") -> FiniteSet:
        return cls(tuple(f"{name.lower()}{i}" for i in range(n)), name)

    def __len__(self) -> int:
        return len(self.labels)

    def index(self, label: str) -> int:
        return self.labels.index(label)

    @property
    def full(self) -> int:
        return (1 << len(self.labels)) - 1

    def subset(self, labels: Iterable[str]) -> int:
        return mask_of(self.index(x) for x in labels)

    def members(self, mask: int) -> tuple[str, ...]:
        return tuple(self.labels[i] for i in bits(mask))

    def canonical(self) -> list:
        return [len(self.labels), self.name, list(self.labels)]


@dataclass(frozen=True)
class FiniteMap:
    """Total map ``dom -> cod``; ``table[i]`` is the index of the image of ``dom.labels[i]``."""

    dom: FiniteSet
    cod: FiniteSet
    table: tuple[int, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "table", tuple(int(v) for v in self.table))
        if len(self.table) != len(self.dom):
            raise ValueError("map table must assign a value to every domain element")
        if any(not 0 <= v < len(self.cod) for v in self.table):
            raise ValueError("map value outside the codomain")

    @classmethod
    def from_dict(cls, dom: FiniteSet, cod: FiniteSet, values: dict[str, str]) -> FiniteMap:
        return cls(dom, cod, tuple(cod.index(values[x]) for x in dom.labels))

    @classmethod
    def identity(cls, space: FiniteSet) -> FiniteMap:
        return cls(space, space, tuple(range(len(space))))

    @classmethod
    def constant(cls, dom: FiniteSet, cod: FiniteSet, value: int) -> FiniteMap:
        return cls(dom, cod, (value,) * len(dom))

    def __call__(self, label: str) -> str:
        return self.cod.labels[self.table[self.dom.index(label)]]

    def then(self, other: FiniteMap) -> FiniteMap:
        """``self`` followed by ``other``."""
        if self.cod != other.dom:
            raise ValueError("maps are not composable")
        return FiniteMap(self.dom, other.cod, tuple(other.table[v] for v in self.table))

    def preimage(self, mask: int) -> int:
        return mask_of(i for i, v in enumerate(self.table) if mask >> v & 1)

    @property
    def is_constant(self) -> bool:
        return len(set(self.table)) <= 1

    def canonical(self) -> list:
        return [self.dom.canonical(), self.cod.canonical(), list(self.table)]

    def __repr__(self) -> str:
        pairs = ", ".join(f"{a}->{self(a)}" for a in self.dom.labels)
        return f"FiniteMap({self.dom.name}->{self.cod.name}: {pairs})"


def all_maps(dom: FiniteSet, cod: FiniteSet) -> list[FiniteMap]:
    return [FiniteMap(dom, cod, t) for t in itertools.product(range(len(cod)), repeat=len(dom))]


# -- topologies ---------------------------------------------------------------


def is_topology(space: FiniteSet, family: Iterable[int]) -> bool:
    """Contains the empty set and the carrier, closed under union and intersection.

    Decided through minimal neighbourhoods: a family is a finite topology iff
    it equals the family of all unions of the sets ``N(x)``, the intersection
    of the members containing ``x``.  This avoids the pairwise check, which is
    quadratic in the (possibly exponential) number of members.
    """
    fam = set(family)
    full = space.full
    if any(m & ~full for m in fam) or 0 not in fam or full not in fam:
        return False
    nbhd = [full] * len(space)
    for u in fam:
        for i in bits(u):
            nbhd[i] &= u
    generated = {0}
    for n in set(nbhd):
        if n not in fam:
            return False
        generated |= {g | n for g in generated}
        if len(generated) > len(fam):
            return False
    return generated == fam


@dataclass(frozen=True)
class FiniteTopology:
    space: FiniteSet
    opens: frozenset[int]

    def __post_init__(self) -> None:
        object.__setattr__(self, "opens", frozenset(self.opens))
        if not is_topology(self.space, self.opens):
            raise ValueError(f"not a topology on {self.space.labels}: {sorted(self.opens)}")

    @classmethod
    def discrete(cls, space: FiniteSet) -> FiniteTopology:
        return cls(space, frozenset(range(space.full + 1)))

    @classmethod
    def indiscrete(cls, space: FiniteSet) -> FiniteTopology:
        return cls(space, frozenset({0, space.full}))

    @classmethod
    def from_subsets(cls, space: FiniteSet, subsets: Iterable[Iterable[str]]) -> FiniteTopology:
        return cls(space, frozenset(space.subset(s) for s in subsets))

    @cached_property
    def key(self) -> tuple[int, ...]:
        return tuple(sorted(self.opens))

    def __lt__(self, other: FiniteTopology) -> bool:
        return (len(self.opens), self.key) < (len(other.opens), other.key)

    def is_open(self, mask: int) -> bool:
        return mask in self.opens

    def canonical(self) -> list:
        return [self.space.canonical(), list(self.key)]

    def __repr__(self) -> str:
        sets = ", ".join("{" + ",".join(self.space.members(m)) + "}" for m in self.key)
        return f"FiniteTopology({self.space.name}: {sets})"


def enumerate_topologies(space: FiniteSet) -> list[FiniteTopology]:
    """All topologies on ``space``, via the correspondence with preorders.

    A finite topology is the family of up-sets of its specialization preorder,
    so enumerating reflexive transitive relations enumerates topologies exactly once.
    """
    n = len(space)
    if n > MAX_TOPOLOGY_POINTS:
        raise ValueError(f"topology enumeration is limited to {MAX_TOPOLOGY_POINTS} points, got {n}")
    off_diagonal = [(i, j) for i in range(n) for j in range(n) if i != j]
    found = set()
    for choice in itertools.product((False, True), repeat=len(off_diagonal)):
        rel = {(i, i) for i in range(n)} | {p for p, on in zip(off_diagonal, choice) if on}
        if any((a, d) not in rel for (a, b) in rel for (c, d) in rel if b == c):
            continue
        opens = frozenset(
            m for m in range(space.full + 1)
            if all(not (m >> a & 1) or m >> b & 1 for (a, b) in rel)
        )
        found.add(opens)
    return sorted(FiniteTopology(space, opens) for opens in found)


def is_continuous(f: FiniteMap, tau_dom: FiniteTopology, tau_cod: FiniteTopology) -> bool:
    if f.dom != tau_dom.space or f.cod != tau_cod.space:
        raise ValueError("topology spaces do not match the map")
    return all(f.preimage(u) in tau_dom.opens for u in tau_cod.opens)


def continuous_maps(tau_dom: FiniteTopology, tau_cod: FiniteTopology) -> list[FiniteMap]:
    return [f for f in all_maps(tau_dom.space, tau_cod.space) if is_continuous(f, tau_dom, tau_cod)]


def is_coarser(t1: FiniteTopology, t2: FiniteTopology) -> bool:
    """True iff every open set of ``t1`` is open in ``t2``."""
    if t1.space != t2.space:
        raise ValueError("topologies live on different spaces")
    return t1.opens <= t2.opens


def minimal_neighbourhoods(t: FiniteTopology) -> tuple[int, ...]:
    """For each point, the smallest open set containing it."""
    out = []
    for i in range(len(t.space)):
        n = t.space.full
        for u in t.opens:
            if u >> i & 1:
                n &= u
        out.append(n)
    return tuple(out)


def product_space(s1: FiniteSet, s2: FiniteSet) -> FiniteSet:
    labels = tuple(f"({a},{b})" for a in s1.labels for b in s2.labels)
    return FiniteSet(labels, f"{s1.name}x{s2.name}")


def _rectangle(u: int, v: int, n2: int) -> int:
    return mask_of(i * n2 + j for i in bits(u) for j in bits(v))


def product_topology(t1: FiniteTopology, t2: FiniteTopology) -> FiniteTopology:
    """Topology on the product carrier generated by open rectangles.

    Finite intersections of rectangles are rectangles, so the opens are the
    unions of the minimal rectangles ``N(x) x N(y)``.
    """
    space = product_space(t1.space, t2.space)
    n2 = len(t2.space)
    basis = {
        _rectangle(nx, ny, n2)
        for nx in minimal_neighbourhoods(t1) for ny in minimal_neighbourhoods(t2)
    }
    opens = {0}
    for b in sorted(basis):
        opens |= {o | b for o in opens}
    return FiniteTopology(space, frozenset(opens))


def _is_continuous_binary(op: Sequence[Sequence[int]], t1: FiniteTopology, t2: FiniteTopology,
                          t_cod: FiniteTopology) -> bool:
    # (x, y) -> op[x][y] is continuous iff N(x) * N(y) lands inside N(op[x][y])
    n1, n2, nc = minimal_neighbourhoods(t1), minimal_neighbourhoods(t2), minimal_neighbourhoods(t_cod)
    for x in range(len(t1.space)):
        for y in range(len(t2.space)):
            target = nc[op[x][y]]
            for a in bits(n1[x]):
                for b in bits(n2[y]):
                    if not target >> op[a][b] & 1:
                        return False
    return True


# -- groups -------------------------------------------------------------------


@dataclass(frozen=True)
class FiniteGroup:
    """A group given by its operation table over carrier indices."""

    name: str
    carrier: FiniteSet
    table: tuple[tuple[int, ...], ...]
    identity: int = field(init=False)
    inverse: tuple[int, ...] = field(init=False)

    def __post_init__(self) -> None:
        n = len(self.carrier)
        table = tuple(tuple(int(v) for v in row) for row in self.table)
        object.__setattr__(self, "table", table)
        if n == 0:
            raise ValueError("a group needs a nonempty carrier")
        if len(table) != n or any(len(row) != n for row in table):
            raise ValueError(f"{self.name}: operation table must be {n}x{n}")
        if any(not 0 <= v < n for row in table for v in row):
            raise ValueError(f"{self.name}: operation is not closed")
        for a, b, c in itertools.product(range(n), repeat=3):
            if table[table[a][b]][c] != table[a][table[b][c]]:
                raise ValueError(f"{self.name}: associativity fails at {self.carrier.members(mask_of([a, b, c]))}")
        units = [e for e in range(n) if all(table[e][x] == x == table[x][e] for x in range(n))]
        if not units:
            raise ValueError(f"{self.name}: no identity element")
        e = units[0]
        inv = []
        for x in range(n):
            ys = [y for y in range(n) if table[x][y] == e == table[y][x]]
            if not ys:
                raise ValueError(f"{self.name}: {self.carrier.labels[x]} has no inverse")
            inv.append(ys[0])
        object.__setattr__(self, "identity", e)
        object.__setattr__(self, "inverse", tuple(inv))

    @classmethod
    def from_table(cls, name: str, labels: Sequence[str], table: Sequence[Sequence[str]]) -> FiniteGroup:
        """Build from a label-valued Cayley table; ``table[i][j]`` is ``labels[i] * labels[j]``."""
        carrier = FiniteSet(tuple(labels), name)
        return cls(name, carrier, tuple(tuple(carrier.index(v) for v in row) for row in table))

    @classmethod
    def from_function(cls, name: str, elements: Sequence, op) -> FiniteGroup:
        elements = list(elements)
        carrier = FiniteSet(tuple(_label(x) for x in elements), name)
        table = tuple(tuple(elements.index(op(a, b)) for b in elements) for a in elements)
        return cls(name, carrier, table)

    def __len__(self) -> int:
        return len(self.carrier)

    def mul(self, a: int, b: int) -> int:
        return self.table[a][b]

    def relabel(self, name: str, labels: Sequence[str]) -> FiniteGroup:
        """Same group on a carrier with new labels (an isomorphic copy)."""
        return FiniteGroup(name, FiniteSet(tuple(labels), name), self.table)

    def canonical(self) -> list:
        return [self.name, list(self.carrier.labels), [list(r) for r in self.table]]


def _label(x) -> str:
    if isinstance(x, tuple):
        return "".join(str(v) for v in x)
    return str(x)


def cyclic_group(n: int) -> FiniteGroup:
    return FiniteGroup.from_function(f"Z{n}", range(n), lambda a, b: (a + b) % n)


def klein_group() -> FiniteGroup:
    elements = [(0, 0), (0, 1), (1, 0), (1, 1)]
    return FiniteGroup.from_function(
        "Z2xZ2", elements, lambda a, b: ((a[0] + b[0]) % 2, (a[1] + b[1]) % 2)
    )


def symmetric_group_3() -> FiniteGroup:
    # permutations of (0, 1, 2) in lexicographic order; product is "apply a, then b"
    elements = list(itertools.permutations(range(3)))
    return FiniteGroup.from_function("S3", elements, lambda a, b: tuple(b[a[i]] for i in range(3)))


PRESET_GROUPS = {
    "Z1": lambda: cyclic_group(1),
    "Z2": lambda: cyclic_group(2),
    "Z3": lambda: cyclic_group(3),
    "Z4": lambda: cyclic_group(4),
    "Z2xZ2": klein_group,
    "S3": symmetric_group_3,
}


def preset_group(name: str) -> FiniteGroup:
    try:
        return PRESET_GROUPS[name]()
    except KeyError:
        raise ValueError(f"unknown group preset {name!r}; known: {', '.join(PRESET_GROUPS)}") from None


def is_subgroup(g: FiniteGroup, mask: int) -> bool:
    elems = list(bits(mask))
    if not elems or not mask >> g.identity & 1:
        return False
    return all(g.mul(a, g.inverse[b]) in elems for a in elems for b in elems)


def is_normal(g: FiniteGroup, mask: int) -> bool:
    if not is_subgroup(g, mask):
        return False
    return all(
        mask >> g.mul(g.mul(x, h), g.inverse[x]) & 1 for x in range(len(g)) for h in bits(mask)
    )


def generated_subgroup(g: FiniteGroup, mask: int) -> int:
    closure = mask | 1 << g.identity
    while True:
        grown = closure
        for a in bits(closure):
            for b in bits(closure):
                grown |= 1 << g.mul(a, b)
        if grown == closure:
            return closure
        closure = grown


def subgroups(g: FiniteGroup) -> list[int]:
    """All subgroups as masks: close the cyclic subgroups under joins."""
    found = {generated_subgroup(g, 1 << x) for x in range(len(g))}
    frontier = set(found)
    while frontier:
        new = set()
        for a in frontier:
            for b in found:
                j = generated_subgroup(g, a | b)
                if j not in found:
                    new.add(j)
        found |= new
        frontier = new
    return sorted(found)


def normal_subgroups(g: FiniteGroup) -> list[int]:
    return [m for m in subgroups(g) if is_normal(g, m)]


def left_cosets(g: FiniteGroup, n: int) -> list[int]:
    cosets = {mask_of(g.mul(x, h) for h in bits(n)) for x in range(len(g))}
    return sorted(cosets)


def coset_topology(g: FiniteGroup, n: int) -> FiniteTopology:
    """Open sets are the unions of cosets of the normal subgroup ``n`` (left = right)."""
    if not is_normal(g, n):
        raise ValueError(f"{g.carrier.members(n)} is not a normal subgroup of {g.name}")
    cosets = left_cosets(g, n)
    opens = {
        mask_of_union(c for c, on in zip(cosets, pick) if on)
        for pick in itertools.product((False, True), repeat=len(cosets))
    }
    return FiniteTopology(g.carrier, frozenset(opens))


def mask_of_union(masks: Iterable[int]) -> int:
    out = 0
    for m in masks:
        out |= m
    return out


def is_group_topology(g: FiniteGroup, t: FiniteTopology) -> bool:
    """Multiplication ``G x G -> G`` and inversion ``G -> G`` are both continuous."""
    if t.space != g.carrier:
        raise ValueError("topology is not on the group's carrier")
    inv = FiniteMap(g.carrier, g.carrier, g.inverse)
    return _is_continuous_binary(g.table, t, t, t) and is_continuous(inv, t, t)


def compatible_topologies(g: FiniteGroup) -> list[FiniteTopology]:
    out = []
    for n in normal_subgroups(g):
        t = coset_topology(g, n)
        if not is_group_topology(g, t):
            raise AssertionError(f"coset topology of {g.carrier.members(n)} is not a group topology")
        if t not in out:
            out.append(t)
    return sorted(out)


def enumerate_homomorphisms(g: FiniteGroup, h: FiniteGroup) -> list[FiniteMap]:
    """All homomorphisms ``g -> h`` by backtracking over carrier order."""
    n = len(g)
    found: list[tuple[int, ...]] = []
    values: list[int] = []

    def consistent(k: int) -> bool:
        # pairs whose product index is already assigned
        for a in range(k + 1):
            for b in range(k + 1):
                if a != k and b != k:
                    continue
                c = g.mul(a, b)
                if c <= k and values[c] != h.mul(values[a], values[b]):
                    return False
        return True

    def extend(k: int) -> None:
        if k == n:
            found.append(tuple(values))
            return
        for v in range(len(h)):
            values.append(v)
            if consistent(k):
                extend(k + 1)
            values.pop()

    extend(0)
    # the backtracking only checks products that land inside the assigned prefix
    homs = [t for t in found if all(t[g.mul(a, b)] == h.mul(t[a], t[b]) for a in range(n) for b in range(n))]
    return [FiniteMap(g.carrier, h.carrier, t) for t in sorted(homs)]
