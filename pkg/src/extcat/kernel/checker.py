"""Exhaustive checks of the three extended-category axioms.

Quantifier scoping follows the axioms exactly: in C1 the object ``F3`` is
chosen once per pair ``(F1, F2)`` while the element set ``E3`` may vary with
``(E1, E2)``; likewise ``F4`` per chain in C2.  An undefined composite inside
a universally quantified obligation is a failure, never a skip.
"""

from __future__ import annotations

from typing import Optional

from .engine import Engine
from .model import (
    C1Witness,
    C2Table,
    C3Witness,
    CheckReport,
    Counterexample,
    ElementSetF,
    ExtendedCategory,
    FailureKind,
    Morphism,
    ObjectF,
)

MODES = ("strict", "literal")


def _fail(report: CheckReport, failure: Counterexample, collect_all: bool) -> bool:
    """Record a failure; True when the check should stop."""
    report.holds = False
    report.failures.append(failure)
    if report.counterexample is None:
        report.counterexample = failure
    return not collect_all


# -- C1 -----------------------------------------------------------------------


def check_c1(ec: ExtendedCategory, collect_all: bool = False, engine: Optional[Engine] = None) -> CheckReport:
    """for all (F1, F2) in pi there is F3 in phi such that for all E1 in F1, E2 in F2
    there is E3 in F3 with f1 ; f2 defined and in E3 for all f1 in E1, f2 in E2."""
    eng = engine or Engine(ec)
    report = CheckReport("C1", True)
    for a, b in ec.pairs:
        failure = None
        demands = []
        for i, m1 in enumerate(eng.elem_masks[eng.oid[a]]):
            for j, m2 in enumerate(eng.elem_masks[eng.oid[b]]):
                mask, bad = eng.composite(m1, m2)
                if bad is not None:
                    failure = Counterexample(FailureKind.UNDEFINED, {
                        "F1": a, "F2": b, "E1": a.ordered[i], "E2": b.ordered[j],
                        "f1": eng.morphs[bad[0]], "f2": eng.morphs[bad[1]],
                    })
                    break
                demands.append(mask)
            if failure:
                break
        if failure is None:
            found = eng.search_object(tuple(demands))
            if found is not None:
                oi, inner = found
                report.witnesses.append(C1Witness(a, b, eng.objects[oi], inner))
                continue
            failure = Counterexample(FailureKind.NO_WITNESS, {"F1": a, "F2": b},
                                     _refute_c1(eng, a, b, demands))
        if _fail(report, failure, collect_all):
            break
    if not report.holds:
        report.witnesses = []
    return report


def _refute_c1(eng: Engine, a: ObjectF, b: ObjectF, demands: list[int]) -> list[dict]:
    """For every candidate F3, an (E1, E2) that no element set of F3 absorbs."""
    nb = len(b)
    out = []
    for oi, obj in enumerate(eng.objects):
        pos = next(p for p, d in enumerate(demands) if eng.first_superset(oi, d) < 0)
        e1, e2 = a.ordered[pos // nb], b.ordered[pos % nb]
        out.append({"F3": obj, "E1": e1, "E2": e2,
                    "misses": [_miss(eng.ec, e1, e2, e3) for e3 in obj.ordered]})
    return out


def _miss(ec: ExtendedCategory, e1: ElementSetF, e2: ElementSetF, e3: ElementSetF) -> dict:
    for f1 in e1.ordered:
        for f2 in e2.ordered:
            if ec.compose(f1, f2) not in e3:
                return {"E3": e3, "f1": f1, "f2": f2}
    raise AssertionError("element set was expected to miss a composite")


# -- C2 -----------------------------------------------------------------------


def check_c2(ec: ExtendedCategory, mode: str = "strict", collect_all: bool = False,
             engine: Optional[Engine] = None) -> CheckReport:
    """for all chains (F1, F2), (F2, F3) in pi there is F4 in phi such that for all
    E1, E2, E3 there is E4 in F4 with f1 ; (f2 ; f3) = (f1 ; f2) ; f3 for all
    f1, f2, f3 (both sides defined).  ``strict`` also requires the composite in E4."""
    if mode not in MODES:
        raise ValueError(f"unknown C2 mode {mode!r}; expected one of {MODES}")
    eng = engine or Engine(ec)
    report = CheckReport("C2", True, mode=mode)
    strict = mode == "strict"

    pair_ok: dict[tuple[int, int], Optional[tuple[int, int]]] = {}

    def undefined_pair(ia: int, ib: int) -> Optional[tuple[int, int]]:
        key = (ia, ib)
        if key not in pair_ok:
            u1, u2 = eng.union[ia], eng.union[ib]
            bad = u1 & ~eng.good_left(u2)
            hit = None
            if bad:
                x = (bad & -bad).bit_length() - 1
                hit = (x, next(y for y in eng.bits(u2) if eng.comp(x, y) < 0))
            pair_ok[key] = hit
        return pair_ok[key]

    triples = eng.nonassociative_triples() if ec.pi else []

    def associativity(ia: int, ib: int, ic: int) -> Optional[Counterexample]:
        u1, u2, u3 = eng.union[ia], eng.union[ib], eng.union[ic]
        if u3 and u1 and u2:
            hit = undefined_pair(ia, ib)
            if hit is not None:
                z = (u3 & -u3).bit_length() - 1
                return _locate(eng, FailureKind.UNDEFINED, ia, ib, ic, hit[0], hit[1], z)
            hit = undefined_pair(ib, ic)
            if hit is not None:
                x = (u1 & -u1).bit_length() - 1
                return _locate(eng, FailureKind.UNDEFINED, ia, ib, ic, x, hit[0], hit[1])
        if triples is None:
            return _scan_triples(eng, ia, ib, ic)
        for x, y, z, undefined in triples:
            if u1 >> x & 1 and u2 >> y & 1 and u3 >> z & 1:
                kind = FailureKind.UNDEFINED if undefined else FailureKind.EQUALITY
                return _locate(eng, kind, ia, ib, ic, x, y, z)
        return None

    pair_classes: dict[tuple[ObjectF, ObjectF], tuple[int, tuple[int, ...]]] = {}
    class_ids: dict[tuple[int, ...], int] = {}
    class_masks: list[tuple[int, ...]] = []
    plans: dict[tuple[int, ObjectF], tuple[ObjectF, tuple[int, ...]]] = {}
    demand_cache: dict[tuple[int, int], Optional[tuple[ObjectF, tuple[int, ...]]]] = {}
    out = ec.outgoing
    check_assoc = bool(triples) or triples is None

    for a, b in ec.pairs:
        successors = out.get(b, ())
        if not successors:
            continue
        ia, ib = eng.oid[a], eng.oid[b]
        classes: dict[int, int] = {}
        class_of = []
        for m1 in eng.elem_masks[ia]:
            for m2 in eng.elem_masks[ib]:
                mask, bad = eng.composite(m1, m2)
                # -1 marks an undefined composite; such chains are vacuous or fail associativity
                class_of.append(classes.setdefault(-1 if bad else mask, len(classes)))
        key = tuple(classes)
        cid = class_ids.get(key)
        if cid is None:
            cid = class_ids[key] = len(class_masks)
            class_masks.append(key)
        pair_classes[(a, b)] = (cid, tuple(class_of))
        for c in successors:
            ic = eng.oid[c]
            failure = None
            if check_assoc or undefined_pair(ia, ib) is not None or undefined_pair(ib, ic) is not None:
                failure = associativity(ia, ib, ic)
            if failure is None:
                found = demand_cache.get((cid, ic), False)
                if found is False:
                    if strict:
                        demands = tuple(0 if cm < 0 else eng.composite(cm, m3)[0]
                                        for cm in key for m3 in eng.elem_masks[ic])
                    else:
                        demands = (0,) * (len(key) * len(c))
                    hit = eng.search_object(demands)
                    found = None if hit is None else (eng.objects[hit[0]], hit[1])
                    demand_cache[(cid, ic)] = found
                if found is not None:
                    plans[(cid, c)] = found
                    continue
                failure = Counterexample(FailureKind.NO_WITNESS, {"F1": a, "F2": b, "F3": c},
                                         _refute_c2(eng, a, b, c))
            else:
                failure.assignment = {"F1": a, "F2": b, "F3": c, **failure.assignment}
            if _fail(report, failure, collect_all):
                break
        if report.counterexample is not None and not collect_all:
            break
    report.witnesses = C2Table(ec, eng.morphs, pair_classes, class_masks, plans) if report.holds else []
    return report


def _locate(eng: Engine, kind: FailureKind, ia: int, ib: int, ic: int, x: int, y: int, z: int) -> Counterexample:
    def holder(oi: int, bit: int) -> ElementSetF:
        k = next(k for k, em in enumerate(eng.elem_masks[oi]) if em >> bit & 1)
        return eng.objects[oi].ordered[k]

    return Counterexample(kind, {
        "E1": holder(ia, x), "E2": holder(ib, y), "E3": holder(ic, z),
        "f1": eng.morphs[x], "f2": eng.morphs[y], "f3": eng.morphs[z],
    })


def _scan_triples(eng: Engine, ia: int, ib: int, ic: int) -> Optional[Counterexample]:
    for x in eng.bits(eng.union[ia]):
        for y in eng.bits(eng.union[ib]):
            xy = eng.comp(x, y)
            for z in eng.bits(eng.union[ic]):
                yz = eng.comp(y, z)
                left = eng.comp(x, yz) if yz >= 0 else -1
                right = eng.comp(xy, z) if xy >= 0 else -1
                if left < 0 or right < 0:
                    return _locate(eng, FailureKind.UNDEFINED, ia, ib, ic, x, y, z)
                if left != right:
                    return _locate(eng, FailureKind.EQUALITY, ia, ib, ic, x, y, z)
    return None


def _refute_c2(eng: Engine, a: ObjectF, b: ObjectF, c: ObjectF) -> list[dict]:
    """For every candidate F4, an (E1, E2, E3) that no element set of F4 absorbs."""
    out = []
    ia, ib, ic = eng.oid[a], eng.oid[b], eng.oid[c]
    for oi, obj in enumerate(eng.objects):
        found = None
        for i, m1 in enumerate(eng.elem_masks[ia]):
            for j, m2 in enumerate(eng.elem_masks[ib]):
                m12, _ = eng.composite(m1, m2)
                for k, m3 in enumerate(eng.elem_masks[ic]):
                    if eng.first_superset(oi, eng.composite(m12, m3)[0]) < 0:
                        found = (a.ordered[i], b.ordered[j], c.ordered[k])
                        break
                if found:
                    break
            if found:
                break
        e1, e2, e3 = found
        out.append({"F4": obj, "E1": e1, "E2": e2, "E3": e3,
                    "misses": [_miss3(eng.ec, e1, e2, e3, e4) for e4 in obj.ordered]})
    return out


def _miss3(ec: ExtendedCategory, e1, e2, e3, e4) -> dict:
    for f1 in e1.ordered:
        for f2 in e2.ordered:
            for f3 in e3.ordered:
                if ec.compose(ec.compose(f1, f2), f3) not in e4:
                    return {"E4": e4, "f1": f1, "f2": f2, "f3": f3}
    raise AssertionError("element set was expected to miss a composite")


# -- C3 -----------------------------------------------------------------------


def check_c3(ec: ExtendedCategory, collect_all: bool = False, engine: Optional[Engine] = None) -> CheckReport:
    """for all F in phi there are F0, F^0 with (F0, F), (F, F^0) in pi and morphisms
    f0, f^0 taken from element sets of F0, F^0 such that f0 ; f = f ; f^0 = f
    for every f in every element set of F."""
    eng = engine or Engine(ec)
    report = CheckReport("C3", True)
    into: dict[ObjectF, list[ObjectF]] = {}
    for a, b in ec.pairs:
        into.setdefault(b, []).append(a)
    out = ec.outgoing
    neutral: dict[tuple[int, str], int] = {}

    def neutral_mask(u: int, side: str) -> int:
        key = (u, side)
        if key not in neutral:
            neutral[key] = _neutral_mask(eng, u, side)
        return neutral[key]

    for obj in ec.objects:
        lefts, rights = into.get(obj, []), list(out.get(obj, ()))
        if not lefts or not rights:
            failure = Counterexample(FailureKind.MEMBERSHIP, {
                "F": obj, "missing": "(F0, F)" if not lefts else "(F, F^0)",
            })
        else:
            u = eng.union[eng.oid[obj]]
            left = _first_neutral(eng, lefts, neutral_mask(u, "left"))
            right = _first_neutral(eng, rights, neutral_mask(u, "right"))
            if left is not None and right is not None:
                report.witnesses.append(C3Witness(obj, *left, *right))
                continue
            side, cands = ("left", lefts) if left is None else ("right", rights)
            failure = Counterexample(FailureKind.NO_WITNESS, {"F": obj, "side": side},
                                     _refute_c3(ec, cands, obj, side))
        if _fail(report, failure, collect_all):
            break
    if not report.holds:
        report.witnesses = []
    return report


def _neutral_mask(eng: Engine, u: int, side: str) -> int:
    """Base morphisms g with g ; f = f (left) or f ; g = f (right) for all f in ``u``."""
    import numpy as np

    n = eng.base
    if n == 0:
        return 0
    members = np.fromiter(eng.bits(u), dtype=np.int64)
    t = eng.table
    if side == "left":
        ok = (t[:n, members] == members[None, :]).all(axis=1)
    else:
        ok = (t[members][:, :n] == members[:, None]).all(axis=0)
    return sum(1 << int(i) for i in np.nonzero(ok)[0])


def _first_neutral(eng: Engine, candidates: list[ObjectF], mask: int):
    for cand in candidates:
        oi = eng.oid[cand]
        for k, em in enumerate(eng.elem_masks[oi]):
            hit = em & mask
            if hit:
                return cand, k, eng.morphs[(hit & -hit).bit_length() - 1]
    return None


def _refute_c3(ec: ExtendedCategory, candidates: list[ObjectF], obj: ObjectF, side: str) -> list[dict]:
    members = sorted(obj.morphisms, key=lambda m: m.id)
    refutations = []
    for cand in candidates:
        for e in cand.ordered:
            for g in e.ordered:
                for f in members:
                    r = ec.compose(g, f) if side == "left" else ec.compose(f, g)
                    if r != f:
                        refutations.append({"object": cand, "element": e, "candidate": g, "f": f})
                        break
                else:
                    raise AssertionError("candidate was expected to fail")
    return refutations


def check_all(ec: ExtendedCategory, mode: str = "strict", collect_all: bool = False) -> list[CheckReport]:
    eng = Engine(ec)
    return [
        check_c1(ec, collect_all, eng),
        check_c2(ec, mode, collect_all, eng),
        check_c3(ec, collect_all, eng),
    ]


def holds(reports: list[CheckReport]) -> bool:
    return all(r.holds for r in reports)


def is_em_shaped(ec: ExtendedCategory) -> tuple[bool, Optional[ObjectF]]:
    """``(True, None)`` when every object has exactly one element set, otherwise
    ``(False, obj)`` for the first object (canonical order) with two or more."""
    for obj in ec.objects:
        if len(obj) != 1:
            return False, obj
    return True, None


def first_neutral_morphism(ec: ExtendedCategory, f: Morphism) -> Optional[Morphism]:
    """Convenience: a morphism of ``ec`` that is two-sided neutral for ``f`` alone."""
    for g in ec.morphisms:
        if ec.compose(g, f) == f and ec.compose(f, g) == f:
            return g
    return None
