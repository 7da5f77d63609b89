"""Finite ordinary categories and their lift to extended categories.

The lift puts one object ``{Hom(A, B)}`` into phi for every ordered pair of
category objects (empty hom-sets included) and one pair
``({Hom(A, B)}, {Hom(B, C)})`` into pi for every triple.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from typing import Optional

from .kernel import ElementSetF, ExtendedCategory, Morphism, ObjectF

KIND = "em-arrow"


@dataclass(frozen=True)
class Arrow:
    """Morphism payload.  ``rank`` is 0 for identities so they sort first in
    their hom-set; the canonical witness search then meets identities first."""

    source: str
    target: str
    rank: int
    label: str

    def canonical(self) -> list:
        return [self.source, self.target, self.rank, self.label]

    def __repr__(self) -> str:
        return f"{self.label}:{self.source}->{self.target}"


@dataclass
class FiniteCategory:
    """``homs[(A, B)]`` lists arrow labels; ``comp[(f, g)]`` with f in Hom(A, B),
    g in Hom(B, C) is a label in Hom(A, C) (diagrammatic: f, then g).  Arrow
    labels are local to their hom-set; ``comp`` keys use ``(A, B, label)`` triples."""

    objects: list[str]
    homs: dict[tuple[str, str], list[str]]
    comp: dict[tuple[tuple[str, str, str], tuple[str, str, str]], str]
    identities: dict[str, str]
    name: str = ""

    def hom(self, a: str, b: str) -> list[str]:
        return self.homs.get((a, b), [])

    def arrows(self):
        for a in self.objects:
            for b in self.objects:
                for label in self.hom(a, b):
                    yield (a, b, label)

    def then(self, f: tuple[str, str, str], g: tuple[str, str, str]) -> Optional[tuple[str, str, str]]:
        if f[1] != g[0]:
            return None
        label = self.comp.get((f, g))
        return None if label is None else (f[0], g[1], label)


class CategoryError(ValueError):
    pass


@dataclass
class Violation:
    law: str
    arrows: tuple = ()

    def __str__(self) -> str:
        return f"{self.law}: {', '.join(map(str, self.arrows))}"


@dataclass
class ValidationResult:
    violations: list[Violation] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def __bool__(self) -> bool:
        return self.ok


def validate_category(c: FiniteCategory) -> ValidationResult:
    """Check typing of ``comp``, associativity and the identity laws.

    Dangling references (hom-sets or identities naming unknown objects or
    arrows) raise :class:`CategoryError` instead of being reported.
    """
    objs = set(c.objects)
    if len(objs) != len(c.objects):
        raise CategoryError("duplicate object labels")
    for (a, b), labels in c.homs.items():
        if a not in objs or b not in objs:
            raise CategoryError(f"hom-set ({a}, {b}) names an unknown object")
        if len(set(labels)) != len(labels):
            raise CategoryError(f"duplicate arrow labels in Hom({a}, {b})")
    for a in c.objects:
        if a not in c.identities:
            raise CategoryError(f"object {a} has no designated identity")
        if c.identities[a] not in c.hom(a, a):
            raise CategoryError(f"identity {c.identities[a]} of {a} is not in Hom({a}, {a})")
    arrows = set(c.arrows())
    for (f, g), h in c.comp.items():
        if f not in arrows or g not in arrows:
            raise CategoryError(f"composition table names an unknown arrow: {f}, {g}")

    res = ValidationResult()
    for f in sorted(arrows):
        for g in sorted(arrows):
            if f[1] != g[0]:
                if (f, g) in c.comp:
                    res.violations.append(Violation("composite defined on non-composable pair", (f, g)))
                continue
            h = c.then(f, g)
            if h is None:
                res.violations.append(Violation("composite missing", (f, g)))
            elif h not in arrows:
                res.violations.append(Violation("composite lands outside Hom(source, target)", (f, g, h)))
    if not res.ok:
        return res
    for f, g, h in itertools.product(sorted(arrows), repeat=3):
        if f[1] == g[0] and g[1] == h[0]:
            if c.then(c.then(f, g), h) != c.then(f, c.then(g, h)):
                res.violations.append(Violation("associativity", (f, g, h)))
    for f in sorted(arrows):
        a, b, _ = f
        ida, idb = (a, a, c.identities[a]), (b, b, c.identities[b])
        if c.then(ida, f) != f:
            res.violations.append(Violation("left identity", (ida, f)))
        if c.then(f, idb) != f:
            res.violations.append(Violation("right identity", (f, idb)))
    return res


def arrow_morphism(c: FiniteCategory, a: str, b: str, label: str) -> Morphism:
    rank = 0 if a == b and c.identities.get(a) == label else 1
    return Morphism(Arrow(a, b, rank, label), KIND)


def hom_set(c: FiniteCategory, a: str, b: str) -> ElementSetF:
    return ElementSetF(arrow_morphism(c, a, b, label) for label in c.hom(a, b))


def hom_object(c: FiniteCategory, a: str, b: str) -> ObjectF:
    return ObjectF([hom_set(c, a, b)])


def composition_oracle(c: FiniteCategory):
    """Diagrammatic composition of arrow morphisms through the table of ``c``."""

    def compose(f: Morphism, g: Morphism) -> Optional[Morphism]:
        p, q = f.payload, g.payload
        r = c.then((p.source, p.target, p.label), (q.source, q.target, q.label))
        return None if r is None else arrow_morphism(c, *r)

    return compose


def theorem1_construct(c: FiniteCategory, validate: bool = True) -> ExtendedCategory:
    """Lift ``c`` to an extended category whose objects are the singletons {Hom(A, B)}.

    ``validate=False`` skips the category-law check so that deliberately broken
    inputs can be lifted and inspected.
    """
    if validate:
        res = validate_category(c)
        if not res.ok:
            raise CategoryError("invalid category: " + "; ".join(map(str, res.violations)))
    phi = {hom_object(c, a, b) for a in c.objects for b in c.objects}
    pi = {
        (hom_object(c, a, b), hom_object(c, b, d))
        for a in c.objects for b in c.objects for d in c.objects
    }

    return ExtendedCategory(phi, pi, composition_oracle(c), name=c.name or "em", source=c)


# -- presets ------------------------------------------------------------------


def one_object_monoid() -> FiniteCategory:
    return FiniteCategory(
        ["A"], {("A", "A"): ["id"]}, {(("A", "A", "id"), ("A", "A", "id")): "id"}, {"A": "id"},
        name="one-object-monoid",
    )


def idempotent_monoid() -> FiniteCategory:
    """One object with Hom(A, A) = {id, e} and e ; e = e."""
    homs = {("A", "A"): ["id", "e"]}
    comp = {}
    for x in ("id", "e"):
        for y in ("id", "e"):
            comp[(("A", "A", x), ("A", "A", y))] = "e" if "e" in (x, y) else "id"
    return FiniteCategory(["A"], homs, comp, {"A": "id"}, name="idempotent-monoid")


def poset_category(objects: list[str], leq: set[tuple[str, str]], name: str = "") -> FiniteCategory:
    """Thin category of a preorder: one arrow ``a<=b`` per related pair."""
    rel = set(leq) | {(a, a) for a in objects}
    homs = {(a, b): [f"{a}<={b}"] for a, b in rel}
    comp = {}
    for a, b in rel:
        for b2, d in rel:
            if b == b2:
                comp[((a, b, f"{a}<={b}"), (b, d, f"{b}<={d}"))] = f"{a}<={d}"
    return FiniteCategory(list(objects), homs, comp, {a: f"{a}<={a}" for a in objects}, name=name)


def arrow_category() -> FiniteCategory:
    return poset_category(["A", "B"], {("A", "B")}, name="arrow")


def chain3() -> FiniteCategory:
    return poset_category(["A", "B", "C"], {("A", "B"), ("B", "C"), ("A", "C")}, name="chain3")


PRESET_CATEGORIES = {
    "one-object-monoid": one_object_monoid,
    "arrow": arrow_category,
    "chain3": chain3,
    "idempotent-monoid": idempotent_monoid,
}


def preset_category(name: str) -> FiniteCategory:
    try:
        return PRESET_CATEGORIES[name]()
    except KeyError:
        raise ValueError(f"unknown category preset {name!r}; known: {', '.join(PRESET_CATEGORIES)}") from None


def random_category(rng: random.Random, max_objects: int = 4, max_arrows: int = 3) -> FiniteCategory:
    """A random valid finite category with at most ``max_arrows`` arrows per hom-set.

    Built as a category of finite-set maps: object ``A`` is a set of size 1 or 2,
    each hom-set is a random nonempty subset of maps closed under composition
    with identities and the other chosen hom-sets.  Closure may need several
    rounds; draws that overflow ``max_arrows`` are retried.
    """
    while True:
        n = rng.randint(1, max_objects)
        names = [chr(ord("A") + i) for i in range(n)]
        sizes = {a: rng.randint(1, 2) for a in names}
        chosen: dict[tuple[str, str], set[tuple[int, ...]]] = {}
        for a in names:
            for b in names:
                pool = list(itertools.product(range(sizes[b]), repeat=sizes[a]))
                k = rng.randint(0, min(len(pool), 2))
                chosen[(a, b)] = set(rng.sample(pool, k))
            chosen[(a, a)].add(tuple(range(sizes[a])))
        changed = True
        while changed:
            changed = False
            for a, b, d in itertools.product(names, repeat=3):
                for f in list(chosen[(a, b)]):
                    for g in list(chosen[(b, d)]):
                        h = tuple(g[x] for x in f)
                        if h not in chosen[(a, d)]:
                            chosen[(a, d)].add(h)
                            changed = True
        if any(len(v) > max_arrows for v in chosen.values()):
            continue
        label = {}
        homs = {}
        for (a, b), maps in chosen.items():
            ordered = sorted(maps)
            homs[(a, b)] = [f"m{''.join(map(str, t))}" for t in ordered]
            for t, lab in zip(ordered, homs[(a, b)]):
                label[(a, b, t)] = lab
        comp = {}
        for a, b, d in itertools.product(names, repeat=3):
            for f in chosen[(a, b)]:
                for g in chosen[(b, d)]:
                    h = tuple(g[x] for x in f)
                    comp[((a, b, label[(a, b, f)]), (b, d, label[(b, d, g)]))] = label[(a, d, h)]
        identities = {a: label[(a, a, tuple(range(sizes[a])))] for a in names}
        return FiniteCategory(names, homs, comp, identities, name="random")


def relabel_category(c: FiniteCategory, mapping: dict[str, str]) -> FiniteCategory:
    """Rename objects of ``c``; arrow labels are kept."""
    def arr(t):
        return (mapping[t[0]], mapping[t[1]], t[2])

    return FiniteCategory(
        [mapping[a] for a in c.objects],
        {(mapping[a], mapping[b]): list(v) for (a, b), v in c.homs.items()},
        {(arr(f), arr(g)): h for (f, g), h in c.comp.items()},
        {mapping[a]: v for a, v in c.identities.items()},
        name=c.name,
    )


def drop_identities(c: FiniteCategory) -> FiniteCategory:
    """Copy of ``c`` with every identity arrow removed (no longer a category)."""
    ids = {(a, a, lab) for a, lab in c.identities.items()}
    homs = {k: [x for x in v if (k[0], k[1], x) not in ids] for k, v in c.homs.items()}
    comp = {(f, g): h for (f, g), h in c.comp.items()
            if f not in ids and g not in ids and (f[0], g[1], h) not in ids}
    return FiniteCategory(list(c.objects), homs, comp, dict(c.identities), name=c.name)
