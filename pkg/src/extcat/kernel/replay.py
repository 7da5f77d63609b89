"""Independent re-evaluation of check reports.

Replay never uses the search engine: it composes morphisms one pair at a time
through the structure's oracle and compares plain frozensets.  A holds-report
is confirmed when its witnesses cover every obligation and each satisfies the
innermost condition; a fails-report when its counterexample falsifies it.
"""

from __future__ import annotations

from typing import Optional

from .model import C2Table, CheckReport, Counterexample, ElementSetF, ExtendedCategory, FailureKind, ObjectF


def replay(ec: ExtendedCategory, report: CheckReport) -> bool:
    """True when the report's verdict is confirmed against ``ec``."""
    fn = {"C1": (_replay_c1, _refutes_c1), "C2": (_replay_c2, _refutes_c2),
          "C3": (_replay_c3, _refutes_c3)}[report.axiom]
    if report.holds:
        return fn[0](ec, report)
    if report.counterexample is None:
        return False
    return fn[1](ec, report.counterexample, report.mode)


def counterexample_holds(ec: ExtendedCategory, report: CheckReport) -> bool:
    """Evaluate the innermost condition under a fails-report's assignment.

    Returns False when the assignment indeed falsifies the axiom, which is what
    ``verify`` prints for a confirmed counterexample.
    """
    return not replay(ec, report)


class _Composites:
    """Memoized set-level composition."""

    def __init__(self, ec: ExtendedCategory):
        self.ec = ec
        self.memo: dict[tuple[frozenset, frozenset], Optional[frozenset]] = {}

    def __call__(self, xs: frozenset, ys: frozenset) -> Optional[frozenset]:
        """All composites ``x ; y``, or None if some pair is not composable."""
        key = (xs, ys)
        if key not in self.memo:
            out = set()
            for x in xs:
                for y in ys:
                    c = self.ec.compose(x, y)
                    if c is None:
                        self.memo[key] = None
                        return None
                    out.add(c)
            self.memo[key] = frozenset(out)
        return self.memo[key]


def _replay_c1(ec: ExtendedCategory, report: CheckReport) -> bool:
    if [(w.f1, w.f2) for w in report.witnesses] != list(ec.pairs):
        return False
    comps = _Composites(ec)
    for w in report.witnesses:
        if w.f3 not in ec.phi or len(w.inner) != len(w.f1) * len(w.f2):
            return False
        for i, e1 in enumerate(w.f1.ordered):
            for j, e2 in enumerate(w.f2.ordered):
                e3 = w.f3.ordered[w.inner[i * len(w.f2) + j]]
                got = comps(e1, e2)
                if got is None or not got <= e3:
                    return False
    return True


class _Associativity:
    """Associativity of ``u1 x u2 x u3`` (all composites defined, both
    bracketings equal), memoized per triple of unions.

    Small structures precompute the nonassociative triples over all morphisms
    once; then each query is pair definedness plus a scan of the bad triples.
    """

    GLOBAL_LIMIT = 300_000

    def __init__(self, ec: ExtendedCategory):
        self.ec = ec
        self.memo: dict[tuple, bool] = {}
        self.defined: dict[tuple, bool] = {}
        self.bad: Optional[list[tuple]] = None
        morphs = ec.morphisms
        if len(morphs) ** 3 <= self.GLOBAL_LIMIT:
            self.bad = []
            for f1 in morphs:
                for f2 in morphs:
                    f12 = ec.compose(f1, f2)
                    if f12 is None:
                        continue
                    for f3 in morphs:
                        f23 = ec.compose(f2, f3)
                        if f23 is None:
                            continue
                        left, right = ec.compose(f1, f23), ec.compose(f12, f3)
                        if left is None or left != right:
                            self.bad.append((f1, f2, f3))

    def _all_defined(self, xs: frozenset, ys: frozenset) -> bool:
        key = (xs, ys)
        if key not in self.defined:
            self.defined[key] = all(self.ec.compose(x, y) is not None for x in xs for y in ys)
        return self.defined[key]

    def __call__(self, u1: frozenset, u2: frozenset, u3: frozenset) -> bool:
        key = (u1, u2, u3)
        if key not in self.memo:
            self.memo[key] = self._check(u1, u2, u3)
        return self.memo[key]

    def _check(self, u1, u2, u3) -> bool:
        if not (u1 and u2 and u3):
            return True
        if not (self._all_defined(u1, u2) and self._all_defined(u2, u3)):
            return False
        if self.bad is not None:
            return not any(f1 in u1 and f2 in u2 and f3 in u3 for f1, f2, f3 in self.bad)
        ec = self.ec
        for f1 in u1:
            for f2 in u2:
                f12 = ec.compose(f1, f2)
                for f3 in u3:
                    left, right = ec.compose(f1, ec.compose(f2, f3)), ec.compose(f12, f3)
                    if left is None or left != right:
                        return False
        return True


def _replay_c2(ec: ExtendedCategory, report: CheckReport) -> bool:
    table = report.witnesses
    if not isinstance(table, C2Table):
        return _replay_c2_list(ec, report)
    strict = report.mode != "literal"
    comps = _Composites(ec)
    out = ec.outgoing
    # the recorded composite classes of every pair that starts a chain
    for (a, b), (cid, class_of) in table.pair_classes.items():
        if (a, b) not in ec.pi:
            return False
        classes = table.classes(cid)
        if len(class_of) != len(a) * len(b):
            return False
        for i, e1 in enumerate(a.ordered):
            for j, e2 in enumerate(b.ordered):
                if comps(e1, e2) != classes[class_of[i * len(b) + j]]:
                    return False
    # every plan places each class ; E3 inside its chosen element of F4
    for (cid, c), (f4, inner) in table.plans.items():
        classes = table.classes(cid)
        if f4 not in ec.phi or len(inner) != len(classes) * len(c):
            return False
        if not strict:
            continue
        for k_cls, members in enumerate(classes):
            for k, e3 in enumerate(c.ordered):
                if members is None:
                    if e3:
                        return False
                    continue
                got = comps(members, e3)
                if got is None or not got <= f4.ordered[inner[k_cls * len(c) + k]]:
                    return False
    # every chain is covered and associative
    assoc = _Associativity(ec)
    for a, b in ec.pairs:
        successors = out.get(b, ())
        if not successors:
            continue
        if (a, b) not in table.pair_classes:
            return False
        cid = table.pair_classes[(a, b)][0]
        for c in successors:
            if (cid, c) not in table.plans:
                return False
            if not assoc(a.morphisms, b.morphisms, c.morphisms):
                return False
    return True


def _replay_c2_list(ec: ExtendedCategory, report: CheckReport) -> bool:
    if [(w.f1, w.f2, w.f3) for w in report.witnesses] != list(ec.chains()):
        return False
    strict = report.mode != "literal"
    comps = _Composites(ec)
    assoc = _Associativity(ec)
    for w in report.witnesses:
        if w.f4 not in ec.phi or len(w.inner) != len(w.classes) * len(w.f3):
            return False
        for i, e1 in enumerate(w.f1.ordered):
            for j, e2 in enumerate(w.f2.ordered):
                if comps(e1, e2) != w.classes[w.class_of[i * len(w.f2) + j]]:
                    return False
        if not assoc(w.f1.morphisms, w.f2.morphisms, w.f3.morphisms):
            return False
        if not strict:
            continue
        for c, members in enumerate(w.classes):
            for k, e3 in enumerate(w.f3.ordered):
                if members is None:
                    if e3:
                        return False
                    continue
                got = comps(members, e3)
                if got is None or not got <= w.f4.ordered[w.inner[c * len(w.f3) + k]]:
                    return False
    return True


def _replay_c3(ec: ExtendedCategory, report: CheckReport) -> bool:
    if [w.obj for w in report.witnesses] != list(ec.objects):
        return False
    for w in report.witnesses:
        if (w.left_object, w.obj) not in ec.pi or (w.obj, w.right_object) not in ec.pi:
            return False
        if w.left not in w.left_object.ordered[w.left_element]:
            return False
        if w.right not in w.right_object.ordered[w.right_element]:
            return False
        for f in w.obj.morphisms:
            if ec.compose(w.left, f) != f or ec.compose(f, w.right) != f:
                return False
    return True


def _in(obj: ObjectF, e: ElementSetF) -> bool:
    return e in obj


def _refutes_c1(ec: ExtendedCategory, cx: Counterexample, mode) -> bool:
    a, b = cx.assignment["F1"], cx.assignment["F2"]
    if (a, b) not in ec.pi:
        return False
    if cx.kind is FailureKind.UNDEFINED:
        s = cx.assignment
        return (_in(a, s["E1"]) and _in(b, s["E2"]) and s["f1"] in s["E1"] and s["f2"] in s["E2"]
                and ec.compose(s["f1"], s["f2"]) is None)
    if cx.kind is not FailureKind.NO_WITNESS:
        return False
    if [r["F3"] for r in cx.refutations] != list(ec.objects):
        return False
    for r in cx.refutations:
        e1, e2 = r["E1"], r["E2"]
        if not (_in(a, e1) and _in(b, e2)):
            return False
        if [m["E3"] for m in r["misses"]] != list(r["F3"].ordered):
            return False
        for m in r["misses"]:
            if not (m["f1"] in e1 and m["f2"] in e2):
                return False
            if ec.compose(m["f1"], m["f2"]) in m["E3"]:
                return False
    return True


def _refutes_c2(ec: ExtendedCategory, cx: Counterexample, mode) -> bool:
    s = cx.assignment
    a, b, c = s["F1"], s["F2"], s["F3"]
    if (a, b) not in ec.pi or (b, c) not in ec.pi:
        return False
    if cx.kind in (FailureKind.UNDEFINED, FailureKind.EQUALITY):
        if not (_in(a, s["E1"]) and _in(b, s["E2"]) and _in(c, s["E3"])):
            return False
        f1, f2, f3 = s["f1"], s["f2"], s["f3"]
        if not (f1 in s["E1"] and f2 in s["E2"] and f3 in s["E3"]):
            return False
        f12, f23 = ec.compose(f1, f2), ec.compose(f2, f3)
        left = ec.compose(f1, f23) if f23 is not None else None
        right = ec.compose(f12, f3) if f12 is not None else None
        if cx.kind is FailureKind.UNDEFINED:
            return left is None or right is None
        return left is not None and right is not None and left != right
    if cx.kind is not FailureKind.NO_WITNESS or mode == "literal":
        return False
    if [r["F4"] for r in cx.refutations] != list(ec.objects):
        return False
    for r in cx.refutations:
        e1, e2, e3 = r["E1"], r["E2"], r["E3"]
        if not (_in(a, e1) and _in(b, e2) and _in(c, e3)):
            return False
        if [m["E4"] for m in r["misses"]] != list(r["F4"].ordered):
            return False
        for m in r["misses"]:
            if not (m["f1"] in e1 and m["f2"] in e2 and m["f3"] in e3):
                return False
            f12 = ec.compose(m["f1"], m["f2"])
            if f12 is not None and ec.compose(f12, m["f3"]) in m["E4"]:
                return False
    return True


def _refutes_c3(ec: ExtendedCategory, cx: Counterexample, mode) -> bool:
    obj = cx.assignment["F"]
    if obj not in ec.phi:
        return False
    if cx.kind is FailureKind.MEMBERSHIP:
        if cx.assignment["missing"] == "(F0, F)":
            return not any(b == obj for _, b in ec.pi)
        return not any(a == obj for a, _ in ec.pi)
    if cx.kind is not FailureKind.NO_WITNESS:
        return False
    left = cx.assignment["side"] == "left"
    candidates = sorted({a for a, b in ec.pi if b == obj} if left else {b for a, b in ec.pi if a == obj},
                        key=lambda o: o.key)
    expected = [(o, f) for o in candidates for e in o.ordered for f in e.ordered]
    if [(r["object"], r["candidate"]) for r in cx.refutations] != expected:
        return False
    for r in cx.refutations:
        f = r["f"]
        if r["element"] not in r["object"] or r["candidate"] not in r["element"]:
            return False
        if f not in obj.morphisms:
            return False
        got = ec.compose(r["candidate"], f) if left else ec.compose(f, r["candidate"])
        if got == f:
            return False
    return True
