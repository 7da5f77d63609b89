"""Data model for extended categories and for check reports.

An extended category is a triple ``(phi, pi, compose)``.  ``phi`` is a set of
objects, each object a nonempty set of element sets, each element set a set of
morphisms.  ``pi`` is a set of ordered object pairs and ``compose`` a partial
composition in diagrammatic order: ``compose(f, g)`` is "f, then g".

Canonical order: morphisms by identifier, element sets by their sorted
member identifiers, objects by their sorted element keys.  Every search in the
checker walks candidates in this order.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from enum import Enum
from functools import cached_property
from typing import Any, Callable, Hashable, Iterable, Iterator, Optional, Sequence

def _canon(value: Any) -> Any:
    if hasattr(value, "canonical"):
        return _canon(value.canonical())
    if isinstance(value, (tuple, list)):
        return [_canon(v) for v in value]
    if isinstance(value, (frozenset, set)):
        return sorted((_canon(v) for v in value), key=lambda v: json.dumps(v, sort_keys=True))
    if isinstance(value, dict):
        return {str(k): _canon(v) for k, v in sorted(value.items(), key=lambda kv: str(kv[0]))}
    if value is None or isinstance(value, (str, int, bool)):
        return value
    raise TypeError(f"payload component {value!r} has no canonical form")


def canonical_id(kind: str, payload: Hashable) -> str:
    return json.dumps([kind, _canon(payload)], separators=(",", ":"), sort_keys=True)


@dataclass(frozen=True, eq=False)
class Morphism:
    """An arrow identified extensionally by ``(kind, payload)``."""

    payload: Hashable
    kind: str = "raw"

    @cached_property
    def id(self) -> str:
        return canonical_id(self.kind, self.payload)

    @cached_property
    def _hash(self) -> int:
        return hash((self.kind, self.payload))

    def __eq__(self, other: object) -> bool:
        if self is other:
            return True
        if not isinstance(other, Morphism):
            return NotImplemented
        return self._hash == other._hash and self.kind == other.kind and self.payload == other.payload

    def __hash__(self) -> int:
        return self._hash

    def __lt__(self, other: Morphism) -> bool:
        return self.id < other.id

    def __repr__(self) -> str:
        return f"Morphism({self.payload!r})"


class ElementSetF(frozenset):
    """A finite set of morphisms.  May be empty."""

    def __new__(cls, members: Iterable[Morphism] = ()):
        members = frozenset(members)
        if not all(isinstance(m, Morphism) for m in members):
            raise TypeError("element sets hold Morphism values only")
        return super().__new__(cls, members)

    @cached_property
    def ordered(self) -> tuple[Morphism, ...]:
        return tuple(sorted(self, key=lambda m: m.id))

    @cached_property
    def key(self) -> tuple[str, ...]:
        return tuple(m.id for m in self.ordered)

    def __repr__(self) -> str:
        return "{" + ", ".join(repr(m.payload) for m in self.ordered) + "}"


class ObjectF(frozenset):
    """A nonempty finite set of element sets."""

    def __new__(cls, elements: Iterable[Iterable[Morphism]]):
        elements = frozenset(e if isinstance(e, ElementSetF) else ElementSetF(e) for e in elements)
        if not elements:
            raise ValueError("an object must contain at least one element set")
        return super().__new__(cls, elements)

    @cached_property
    def ordered(self) -> tuple[ElementSetF, ...]:
        return tuple(sorted(self, key=lambda e: e.key))

    @cached_property
    def key(self) -> tuple[tuple[str, ...], ...]:
        return tuple(e.key for e in self.ordered)

    @cached_property
    def morphisms(self) -> frozenset[Morphism]:
        return frozenset().union(*self)

    def __repr__(self) -> str:
        return "ObjectF[" + ", ".join(repr(e) for e in self.ordered) + "]"


Composer = Callable[[Morphism, Morphism], Optional[Morphism]]


class ExtendedCategory:
    """The triple ``(phi, pi, compose)`` restricted to a finite universe."""

    def __init__(self, phi: Iterable[ObjectF], pi: Iterable[tuple[ObjectF, ObjectF]],
                 compose: Composer, name: str = "", source: Any = None):
        # equal morphisms and element sets become shared instances, so set
        # comparisons mostly succeed on identity
        self._intern: dict[Morphism, Morphism] = {}
        elements: dict[frozenset, ElementSetF] = {}
        objects: dict[ObjectF, ObjectF] = {}
        for obj in phi:
            if obj in objects:
                continue
            shared = []
            for e in obj:
                if e not in elements:
                    elements[e] = ElementSetF(self._intern.setdefault(m, m) for m in e)
                shared.append(elements[e])
            objects[obj] = ObjectF(shared)
        self.phi = frozenset(objects.values())
        self.pi = frozenset((objects.get(a, a), objects.get(b, b)) for a, b in pi)
        self.name = name
        # builder inputs (category, groups, spaces); lets documents rebuild the oracle
        self.source = source
        self._compose = compose
        self._cache: dict[tuple[Morphism, Morphism], Optional[Morphism]] = {}
        for a, b in self.pi:
            if a not in self.phi or b not in self.phi:
                raise ValueError("every object named in pi must belong to phi")
        kinds = {m.kind for obj in self.phi for m in obj.morphisms}
        if len(kinds) > 1:
            raise ValueError(f"morphisms of different kinds mixed in one structure: {sorted(kinds)}")
        self.kind = kinds.pop() if kinds else None

    def compose_uncached(self, f: Morphism, g: Morphism) -> Optional[Morphism]:
        return self._compose(f, g)

    def compose(self, f: Morphism, g: Morphism) -> Optional[Morphism]:
        key = (f, g)
        if key not in self._cache:
            if self.kind is not None and (f.kind != self.kind or g.kind != self.kind):
                raise ValueError(f"cannot compose morphisms of kind {f.kind!r} and {g.kind!r} here")
            r = self._compose(f, g)
            self._cache[key] = None if r is None else self._intern.setdefault(r, r)
        return self._cache[key]

    @cached_property
    def objects(self) -> tuple[ObjectF, ...]:
        return tuple(sorted(self.phi, key=lambda o: o.key))

    @cached_property
    def object_index(self) -> dict[ObjectF, int]:
        return {o: i for i, o in enumerate(self.objects)}

    @cached_property
    def pairs(self) -> tuple[tuple[ObjectF, ObjectF], ...]:
        idx = self.object_index
        return tuple(sorted(self.pi, key=lambda p: (idx[p[0]], idx[p[1]])))

    @cached_property
    def outgoing(self) -> dict[ObjectF, tuple[ObjectF, ...]]:
        out: dict[ObjectF, list[ObjectF]] = {}
        for a, b in self.pairs:
            out.setdefault(a, []).append(b)
        return {a: tuple(bs) for a, bs in out.items()}

    def chains(self) -> Iterator[tuple[ObjectF, ObjectF, ObjectF]]:
        """Triples with ``(a, b)`` and ``(b, c)`` in pi, in canonical order."""
        out = self.outgoing
        for a, b in self.pairs:
            for c in out.get(b, ()):
                yield a, b, c

    def chain_count(self) -> int:
        out = self.outgoing
        return sum(len(out.get(b, ())) for _, b in self.pairs)

    @cached_property
    def morphisms(self) -> tuple[Morphism, ...]:
        return tuple(sorted(frozenset().union(*(o.morphisms for o in self.phi)), key=lambda m: m.id))

    def restrict(self, phi: Iterable[ObjectF]) -> ExtendedCategory:
        """Drop objects outside ``phi`` together with every pair that mentions them."""
        keep = frozenset(phi)
        pi = [(a, b) for a, b in self.pi if a in keep and b in keep]
        return ExtendedCategory(keep, pi, self._compose, self.name, self.source)

    def __repr__(self) -> str:
        return f"ExtendedCategory({self.name!r}, |phi|={len(self.phi)}, |pi|={len(self.pi)})"


def compose(m1: Morphism, m2: Morphism, oracle: Composer) -> Optional[Morphism]:
    """``m1`` then ``m2``; ``None`` when the pair is not composable."""
    if m1.kind != m2.kind:
        raise ValueError(f"cannot compose morphisms of kind {m1.kind!r} and {m2.kind!r}")
    return oracle(m1, m2)


# -- reports ------------------------------------------------------------------


class FailureKind(str, Enum):
    MEMBERSHIP = "membership-violation"
    EQUALITY = "equality-violation"
    UNDEFINED = "composition-undefined"
    NO_WITNESS = "no-witness"


@dataclass(frozen=True)
class C1Witness:
    """``f3`` serves the pair ``(f1, f2)``; ``inner[i * len(f2) + j]`` indexes into
    ``f3.ordered`` the element set chosen for ``(f1.ordered[i], f2.ordered[j])``."""

    f1: ObjectF
    f2: ObjectF
    f3: ObjectF
    inner: tuple[int, ...]


@dataclass(frozen=True)
class C2Witness:
    """Witness for one chain ``(f1, f2), (f2, f3)``.

    The triple composite depends on ``(e1, e2)`` only through the set of
    composites ``e1 ; e2``, so ``e4`` is chosen per distinct composite set:
    ``classes[class_of[i * len(f2) + j]]`` is the composite set of
    ``(f1.ordered[i], f2.ordered[j])`` and ``inner[c * len(f3) + k]`` indexes
    into ``f4.ordered`` the element chosen for class ``c`` and ``f3.ordered[k]``.
    """

    f1: ObjectF
    f2: ObjectF
    f3: ObjectF
    f4: ObjectF
    classes: tuple[frozenset, ...]
    class_of: tuple[int, ...]
    inner: tuple[int, ...]


class C2Table:
    """All C2 witnesses of a structure, stored factored.

    ``pair_classes[(f1, f2)] = (cid, class_of)`` and
    ``plans[(cid, f3)] = (f4, inner)``; ``class_masks[cid]`` holds the
    composite classes as bitmasks over ``morphs``, with -1 (``None`` in
    :meth:`classes`) for a pair of element sets whose composite is undefined.  Iterating yields one
    :class:`C2Witness` per chain, in canonical chain order.
    """

    def __init__(self, ec: ExtendedCategory, morphs: Sequence[Morphism],
                 pair_classes: dict, class_masks: list[tuple[int, ...]], plans: dict):
        self.ec = ec
        self.morphs = tuple(morphs)
        self.pair_classes = pair_classes
        self.class_masks = class_masks
        self.plans = plans
        self._classes: dict[int, tuple[frozenset, ...]] = {}

    def classes(self, cid: int) -> tuple[frozenset, ...]:
        if cid not in self._classes:
            self._classes[cid] = tuple(
                None if m < 0 else frozenset(self.morphs[i] for i in mask_bits(m)) for m in self.class_masks[cid]
            )
        return self._classes[cid]

    def __iter__(self) -> Iterator[C2Witness]:
        for a, b, c in self.ec.chains():
            cid, class_of = self.pair_classes[(a, b)]
            f4, inner = self.plans[(cid, c)]
            yield C2Witness(a, b, c, f4, self.classes(cid), class_of, inner)

    def __len__(self) -> int:
        return self.ec.chain_count()

    def __bool__(self) -> bool:
        return bool(self.plans)


def mask_bits(mask: int) -> Iterator[int]:
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


@dataclass(frozen=True)
class C3Witness:
    obj: ObjectF
    left_object: ObjectF
    left_element: int
    left: Morphism
    right_object: ObjectF
    right_element: int
    right: Morphism


@dataclass
class Counterexample:
    """A falsifying assignment.

    ``assignment`` fixes the universally quantified variables that lead to the
    failure.  For ``no-witness`` failures ``refutations`` lists, for every
    candidate of the failing existential, a sub-assignment that rules it out.
    """

    kind: FailureKind
    assignment: dict[str, Any]
    refutations: list[dict[str, Any]] = field(default_factory=list)


@dataclass
class CheckReport:
    """Outcome of one axiom check.

    ``witnesses`` is a list of :class:`C1Witness` / :class:`C3Witness`, or a
    :class:`C2Table` for C2.  On failure ``counterexample`` is the first
    failure in canonical order; ``failures`` lists all of them when the check
    ran with ``collect_all``.
    """

    axiom: str
    holds: bool
    witnesses: Any = field(default_factory=list)
    counterexample: Optional[Counterexample] = None
    failures: list[Counterexample] = field(default_factory=list)
    mode: Optional[str] = None

    @property
    def verdict(self) -> str:
        return "holds" if self.holds else "fails"

    def __repr__(self) -> str:
        extra = f", kind={self.counterexample.kind.value}" if self.counterexample else ""
        return f"CheckReport({self.axiom}: {self.verdict}{extra})"


