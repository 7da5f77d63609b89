"""JSON documents for structures and check reports.

Structure document::

    {"format": "extcat-structure", "version": 1, "instance": "em" | "topgroup" | "pseudotop" | "raw",
     "name": str, "source": {...}, "morphisms": [payload, ...],
     "objects": [[[morphism index, ...], ...], ...], "pi": [[object index, object index], ...]}

Morphisms and objects are listed in canonical order; element sets are lists of
morphism indices.  ``source`` carries what the composition oracle needs:

* ``em``: ``{"category": {"objects", "identities", "homs": [[A, B, [labels]]],
  "composition": [[[A, B, f], [B, C, g], h], ...]}}``; payload
  ``{"source", "target", "label", "identity"}``.
* ``topgroup``: ``{"groups": [{"name", "labels", "table"}]}`` with operation
  tables over carrier indices; payload ``{"dom", "cod", "table"}``.
* ``pseudotop``: ``{"spaces": [{"name", "labels"}], "policy", "require_coarser",
  "topologies": {space: [[open bitmask, ...], ...]} | null}``; payload
  ``{"dom", "cod", "f", "f_u"}``.
* ``raw``: ``{"composition": [[i, j, k], ...]}`` over morphism indices, where
  absent pairs are undefined; payloads are strings.

Report document::

    {"format": "extcat-report", "version": 1, "digest": sha256 of the structure,
     "structure": {...}, "composites": [payload, ...], "mode": str,
     "reports": [...], "em_shaped": {"value": bool, "witness": object index | null}}

``composites`` lists morphisms that occur in witnesses or counterexamples but
in no element set; their indices continue after the structure's morphisms.
"""

from __future__ import annotations

import hashlib
import json
from typing import Any, Optional

from . import em_category, pseudotop, topgroup
from .finstruct import FiniteGroup, FiniteMap, FiniteSet, FiniteTopology
from .kernel import (
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
    is_em_shaped,
)

STRUCTURE_FORMAT = "extcat-structure"
REPORT_FORMAT = "extcat-report"
VERSION = 1
INSTANCES = ("em", "topgroup", "pseudotop", "raw")


class DocumentError(ValueError):
    """Schema violation; the message names the offending location."""


def dumps(doc: dict) -> str:
    """Deterministic serialization (sorted keys, fixed separators)."""
    return json.dumps(doc, sort_keys=True, separators=(",", ":")) + "\n"


def digest(doc: dict) -> str:
    return hashlib.sha256(dumps(doc).encode()).hexdigest()


def _require(cond: bool, where: str, msg: str) -> None:
    if not cond:
        raise DocumentError(f"{where}: {msg}")


def _get(d: Any, key: str, where: str) -> Any:
    _require(isinstance(d, dict), where, "expected an object")
    _require(key in d, where, f"missing field {key!r}")
    return d[key]


# -- structures: encoding -----------------------------------------------------


def _instance_of(ec: ExtendedCategory) -> str:
    return {em_category.KIND: "em", topgroup.KIND: "topgroup", pseudotop.KIND: "pseudotop"}.get(ec.kind, "raw")


def _encode_payload(m: Morphism) -> Any:
    p = m.payload
    if m.kind == em_category.KIND:
        return {"source": p.source, "target": p.target, "label": p.label, "identity": p.rank == 0}
    if m.kind == topgroup.KIND:
        return {"dom": p.dom.name, "cod": p.cod.name, "table": list(p.table)}
    if m.kind == pseudotop.KIND:
        return {"dom": p.f.dom.name, "cod": p.f.cod.name, "f": list(p.f.table), "f_u": list(p.f_u.table)}
    if not isinstance(p, str):
        raise DocumentError(f"raw morphism payloads must be strings, got {p!r}")
    return p


def _encode_category(c: em_category.FiniteCategory) -> dict:
    return {
        "name": c.name,
        "objects": list(c.objects),
        "identities": {a: c.identities[a] for a in c.objects if a in c.identities},
        "homs": [[a, b, list(c.hom(a, b))] for a in c.objects for b in c.objects if (a, b) in c.homs],
        "composition": sorted([list(f), list(g), h] for (f, g), h in c.comp.items()),
    }


def _encode_space(s: FiniteSet) -> dict:
    return {"name": s.name, "labels": list(s.labels)}


def _source(ec: ExtendedCategory, instance: str, morphs: list[Morphism]) -> dict:
    src = ec.source
    if instance == "em":
        return {"category": _encode_category(src)}
    if instance == "topgroup":
        return {"groups": [{"name": g.name, "labels": list(g.carrier.labels),
                            "table": [list(r) for r in g.table]} for g in src]}
    if instance == "pseudotop":
        tops = None
        if src.topologies is not None:
            tops = {s.name: [list(t.key) for t in ts] for s, ts in src.topologies.items()}
        return {"spaces": [_encode_space(s) for s in src.spaces], "policy": src.policy,
                "require_coarser": src.require_coarser, "topologies": tops}
    index = {m: i for i, m in enumerate(morphs)}
    table = []
    for i, f in enumerate(morphs):
        for j, g in enumerate(morphs):
            h = ec.compose(f, g)
            if h is not None:
                if h not in index:
                    raise DocumentError("raw composition must stay inside the listed morphisms")
                table.append([i, j, index[h]])
    return {"composition": table}


def structure_document(ec: ExtendedCategory) -> dict:
    instance = _instance_of(ec)
    if instance != "raw" and ec.source is None:
        raise DocumentError(f"{instance} structure carries no builder inputs")
    morphs = list(ec.morphisms)
    index = {m: i for i, m in enumerate(morphs)}
    objects = ec.objects
    oid = ec.object_index
    return {
        "format": STRUCTURE_FORMAT,
        "version": VERSION,
        "instance": instance,
        "name": ec.name,
        "source": _source(ec, instance, morphs),
        "morphisms": [_encode_payload(m) for m in morphs],
        "objects": [[[index[m] for m in e.ordered] for e in o.ordered] for o in objects],
        "pi": [[oid[a], oid[b]] for a, b in ec.pairs],
    }


# -- structures: decoding -----------------------------------------------------


def _decode_category(d: dict, where: str) -> em_category.FiniteCategory:
    try:
        homs = {(a, b): list(labels) for a, b, labels in _get(d, "homs", where)}
        comp = {(tuple(f), tuple(g)): h for f, g, h in _get(d, "composition", where)}
        return em_category.FiniteCategory(list(_get(d, "objects", where)), homs, comp,
                                          dict(_get(d, "identities", where)), name=d.get("name", ""))
    except (TypeError, ValueError) as exc:
        raise DocumentError(f"{where}: malformed category ({exc})") from None


def _decode_group(d: dict, where: str) -> FiniteGroup:
    name = _get(d, "name", where)
    try:
        return FiniteGroup(name, FiniteSet(tuple(_get(d, "labels", where)), name),
                           tuple(tuple(r) for r in _get(d, "table", where)))
    except (TypeError, ValueError) as exc:
        raise DocumentError(f"{where}: {exc}") from None


def _decode_space(d: dict, where: str) -> FiniteSet:
    try:
        return FiniteSet(tuple(_get(d, "labels", where)), _get(d, "name", where))
    except (TypeError, ValueError) as exc:
        raise DocumentError(f"{where}: {exc}") from None


class _Decoder:
    """Turns payload records of one instance back into morphisms and provides
    the matching composition oracle."""

    def __init__(self, instance: str, source: dict, n_morphisms: int):
        self.instance = instance
        where = "source"
        if instance == "em":
            self.category = _decode_category(_get(source, "category", where), "source.category")
        elif instance == "topgroup":
            groups = [_decode_group(g, f"source.groups[{i}]") for i, g in enumerate(_get(source, "groups", where))]
            self.groups = groups
            self.carriers = {g.name: g.carrier for g in groups}
        elif instance == "pseudotop":
            spaces = [_decode_space(s, f"source.spaces[{i}]") for i, s in enumerate(_get(source, "spaces", where))]
            self.spaces = spaces
            self.carriers = {s.name: s for s in spaces}
            self.policy = _get(source, "policy", where)
            self.require_coarser = bool(source.get("require_coarser", True))
            tops = source.get("topologies")
            self.topologies = None
            if tops is not None:
                try:
                    self.topologies = {self.carriers[k]: tuple(FiniteTopology(self.carriers[k], frozenset(t)) for t in v)
                                       for k, v in tops.items()}
                except (KeyError, TypeError, ValueError) as exc:
                    raise DocumentError(f"source.topologies: {exc}") from None
        elif instance == "raw":
            table = {}
            for k, row in enumerate(_get(source, "composition", where)):
                loc = f"source.composition[{k}]"
                _require(isinstance(row, list) and len(row) == 3 and all(isinstance(x, int) for x in row),
                         loc, "expected [i, j, k] morphism indices")
                _require(all(0 <= x < n_morphisms for x in row), loc, "morphism index out of range")
                _require((row[0], row[1]) not in table, loc, "composite defined twice")
                table[(row[0], row[1])] = row[2]
            self.table = table
        else:
            raise DocumentError(f"instance: unknown instance {instance!r}; expected one of {INSTANCES}")

    def morphism(self, p: Any, where: str) -> Morphism:
        try:
            if self.instance == "em":
                arrow = (_get(p, "source", where), _get(p, "target", where), _get(p, "label", where))
                if arrow not in set(self.category.arrows()):
                    raise DocumentError(f"{where}: arrow {arrow} is not in the category")
                return em_category.arrow_morphism(self.category, *arrow)
            if self.instance == "topgroup":
                fm = FiniteMap(self.carriers[_get(p, "dom", where)], self.carriers[_get(p, "cod", where)],
                               tuple(_get(p, "table", where)))
                return Morphism(fm, topgroup.KIND)
            if self.instance == "pseudotop":
                dom, cod = self.carriers[_get(p, "dom", where)], self.carriers[_get(p, "cod", where)]
                return pseudotop.pair_morphism(FiniteMap(dom, cod, tuple(_get(p, "f", where))),
                                               FiniteMap(dom, cod, tuple(_get(p, "f_u", where))))
        except KeyError as exc:
            raise DocumentError(f"{where}: unknown space or group {exc}") from None
        except (TypeError, ValueError) as exc:
            if isinstance(exc, DocumentError):
                raise
            raise DocumentError(f"{where}: {exc}") from None
        _require(isinstance(p, str), where, "raw payloads must be strings")
        return Morphism(p, "raw")

    def oracle(self, morphs: list[Morphism]):
        if self.instance == "em":
            return em_category.composition_oracle(self.category)
        if self.instance == "topgroup":
            return topgroup.compose_homs
        if self.instance == "pseudotop":
            return pseudotop.compose_pairs
        index = {m: i for i, m in enumerate(morphs)}
        table = self.table

        def compose(f: Morphism, g: Morphism) -> Optional[Morphism]:
            k = table.get((index.get(f, -1), index.get(g, -1)))
            return None if k is None else morphs[k]

        return compose

    def source(self):
        if self.instance == "em":
            return self.category
        if self.instance == "topgroup":
            return tuple(self.groups)
        if self.instance == "pseudotop":
            return pseudotop.PseudoTopUniverse(tuple(self.spaces), self.policy, self.topologies,
                                               self.require_coarser)
        return None


def load_structure(doc: Any) -> ExtendedCategory:
    """Rebuild a structure from its document, validating the schema."""
    _require(isinstance(doc, dict), "$", "expected an object")
    _require(doc.get("format") == STRUCTURE_FORMAT, "format", f"expected {STRUCTURE_FORMAT!r}")
    _require(doc.get("version") == VERSION, "version", f"unsupported version {doc.get('version')!r}")
    instance = _get(doc, "instance", "$")
    payloads = _get(doc, "morphisms", "$")
    _require(isinstance(payloads, list), "morphisms", "expected a list")
    dec = _Decoder(instance, _get(doc, "source", "$"), len(payloads))
    morphs = [dec.morphism(p, f"morphisms[{i}]") for i, p in enumerate(payloads)]
    _require(len(set(morphs)) == len(morphs), "morphisms", "duplicate morphism")
    objects = []
    raw_objects = _get(doc, "objects", "$")
    _require(isinstance(raw_objects, list), "objects", "expected a list")
    for i, obj in enumerate(raw_objects):
        where = f"objects[{i}]"
        _require(isinstance(obj, list) and obj, where, "an object is a nonempty list of element sets")
        elements = []
        for j, e in enumerate(obj):
            _require(isinstance(e, list) and all(isinstance(k, int) and 0 <= k < len(morphs) for k in e),
                     f"{where}[{j}]", "element sets are lists of morphism indices")
            elements.append(ElementSetF(morphs[k] for k in e))
        objects.append(ObjectF(elements))
    pi = []
    for k, pair in enumerate(_get(doc, "pi", "$")):
        _require(isinstance(pair, list) and len(pair) == 2
                 and all(isinstance(x, int) and 0 <= x < len(objects) for x in pair),
                 f"pi[{k}]", "expected [object index, object index]")
        pi.append((objects[pair[0]], objects[pair[1]]))
    return ExtendedCategory(objects, pi, dec.oracle(morphs), name=doc.get("name", ""), source=dec.source())


# -- reports ------------------------------------------------------------------


class _Codec:
    """Index-based encoding of objects, element sets and morphisms for one structure."""

    def __init__(self, ec: ExtendedCategory, extra: Optional[list[Morphism]] = None):
        self.ec = ec
        self.morphs = list(ec.morphisms) + list(extra or [])
        self.mid = {m: i for i, m in enumerate(self.morphs)}
        self.oid = ec.object_index

    def m(self, m: Morphism) -> int:
        if m not in self.mid:
            self.mid[m] = len(self.morphs)
            self.morphs.append(m)
        return self.mid[m]

    def e(self, e) -> list[int]:
        return sorted(self.m(x) for x in e)

    def o(self, o: ObjectF) -> int:
        return self.oid[o]

    def value(self, key: str, v: Any) -> Any:
        if isinstance(v, ObjectF):
            return self.o(v)
        if isinstance(v, (ElementSetF, frozenset)):
            return self.e(v)
        if isinstance(v, Morphism):
            return self.m(v)
        if isinstance(v, dict):
            return {k: self.value(k, x) for k, x in v.items()}
        if isinstance(v, list):
            return [self.value(key, x) for x in v]
        return v

    # decoding; the key decides the type
    def read(self, key: str, v: Any, where: str) -> Any:
        try:
            if isinstance(v, dict):
                return {k: self.read(k, x, f"{where}.{k}") for k, x in v.items()}
            if isinstance(v, list) and key in ("misses",):
                return [self.read(key, x, f"{where}[{i}]") for i, x in enumerate(v)]
            if key in ("missing", "side"):
                return v
            if key.startswith("F") or key == "object":
                return self.ec.objects[v]
            if key.startswith("E") or key == "element":
                return ElementSetF(self.morphs[i] for i in v)
            if key.startswith("f") or key == "candidate":
                return self.morphs[v]
        except (IndexError, TypeError) as exc:
            raise DocumentError(f"{where}: bad reference ({exc})") from None
        raise DocumentError(f"{where}: unknown field")


def _encode_report(r: CheckReport, codec: _Codec) -> dict:
    out: dict[str, Any] = {"axiom": r.axiom, "verdict": r.verdict}
    if r.mode is not None:
        out["mode"] = r.mode
    if r.holds:
        if r.axiom == "C1":
            out["witnesses"] = [{"F1": codec.o(w.f1), "F2": codec.o(w.f2), "F3": codec.o(w.f3),
                                 "inner": list(w.inner)} for w in r.witnesses]
        elif r.axiom == "C2":
            out["witnesses"] = _encode_c2(r.witnesses, codec)
        else:
            out["witnesses"] = [{"F": codec.o(w.obj), "F0": codec.o(w.left_object), "E0": w.left_element,
                                 "f0": codec.m(w.left), "F^0": codec.o(w.right_object),
                                 "E^0": w.right_element, "f^0": codec.m(w.right)} for w in r.witnesses]
    failures = r.failures or ([r.counterexample] if r.counterexample else [])
    if failures:
        out["counterexample"] = _encode_cx(r.counterexample, codec)
        if len(failures) > 1:
            out["failures"] = [_encode_cx(cx, codec) for cx in failures]
    return out


def _encode_cx(cx: Counterexample, codec: _Codec) -> dict:
    return {"kind": cx.kind.value, "assignment": codec.value("", cx.assignment),
            "refutations": [codec.value("", r) for r in cx.refutations]}


def _encode_c2(table: Any, codec: _Codec) -> dict:
    if not isinstance(table, C2Table):
        return {"pairs": [], "classes": [], "plans": []}
    oid = codec.oid
    classes = [[None if mask < 0 else sorted(codec.m(table.morphs[i]) for i in _bits(mask)) for mask in masks]
               for masks in table.class_masks]
    pairs = sorted([oid[a], oid[b], cid, list(class_of)] for (a, b), (cid, class_of) in table.pair_classes.items())
    plans = sorted([cid, oid[c], oid[f4], list(inner)] for (cid, c), (f4, inner) in table.plans.items())
    return {"pairs": pairs, "classes": classes, "plans": plans}


def _bits(mask: int) -> list[int]:
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return out


def report_document(ec: ExtendedCategory, reports: list[CheckReport], mode: str = "strict") -> dict:
    structure = structure_document(ec)
    codec = _Codec(ec)
    encoded = [_encode_report(r, codec) for r in reports]
    shaped, wide = is_em_shaped(ec)
    base = len(ec.morphisms)
    return {
        "format": REPORT_FORMAT,
        "version": VERSION,
        "digest": digest(structure),
        "structure": structure,
        "composites": [_encode_payload(m) for m in codec.morphs[base:]],
        "mode": mode,
        "reports": encoded,
        "em_shaped": {"value": shaped, "witness": None if wide is None else ec.object_index[wide]},
    }


def load_report(doc: Any) -> tuple[ExtendedCategory, list[CheckReport]]:
    """Rebuild the structure and the reports recorded in a report document."""
    _require(isinstance(doc, dict), "$", "expected an object")
    _require(doc.get("format") == REPORT_FORMAT, "format", f"expected {REPORT_FORMAT!r}")
    _require(doc.get("version") == VERSION, "version", f"unsupported version {doc.get('version')!r}")
    structure = _get(doc, "structure", "$")
    _require(digest(structure) == _get(doc, "digest", "$"), "digest", "does not match the embedded structure")
    ec = load_structure(structure)
    dec = _Decoder(structure["instance"], structure["source"], len(structure["morphisms"]))
    extra = [dec.morphism(p, f"composites[{i}]") for i, p in enumerate(_get(doc, "composites", "$"))]
    if structure["instance"] == "raw":
        _require(not extra, "composites", "raw structures have no outside composites")
    codec = _Codec(ec, extra)
    reports = [_decode_report(r, codec, ec, f"reports[{i}]") for i, r in enumerate(_get(doc, "reports", "$"))]
    return ec, reports


def _decode_cx(d: dict, codec: _Codec, where: str) -> Counterexample:
    try:
        kind = FailureKind(_get(d, "kind", where))
    except ValueError:
        raise DocumentError(f"{where}.kind: unknown failure kind") from None
    return Counterexample(kind, codec.read("", _get(d, "assignment", where), f"{where}.assignment"),
                          [codec.read("", r, f"{where}.refutations[{i}]")
                           for i, r in enumerate(_get(d, "refutations", where))])


def _decode_report(d: dict, codec: _Codec, ec: ExtendedCategory, where: str) -> CheckReport:
    axiom = _get(d, "axiom", where)
    _require(axiom in ("C1", "C2", "C3"), f"{where}.axiom", "expected C1, C2 or C3")
    verdict = _get(d, "verdict", where)
    _require(verdict in ("holds", "fails"), f"{where}.verdict", "expected holds or fails")
    r = CheckReport(axiom, verdict == "holds", mode=d.get("mode"))
    objs = ec.objects
    try:
        if r.holds:
            w = _get(d, "witnesses", where)
            if axiom == "C1":
                r.witnesses = [C1Witness(objs[x["F1"]], objs[x["F2"]], objs[x["F3"]], tuple(x["inner"])) for x in w]
            elif axiom == "C2":
                class_masks = [tuple(-1 if members is None else sum(1 << i for i in members) for members in cls)
                               for cls in w["classes"]]
                pair_classes = {(objs[a], objs[b]): (cid, tuple(class_of)) for a, b, cid, class_of in w["pairs"]}
                plans = {(cid, objs[c]): (objs[f4], tuple(inner)) for cid, c, f4, inner in w["plans"]}
                r.witnesses = C2Table(ec, codec.morphs, pair_classes, class_masks, plans)
            else:
                r.witnesses = [C3Witness(objs[x["F"]], objs[x["F0"]], x["E0"], codec.morphs[x["f0"]],
                                         objs[x["F^0"]], x["E^0"], codec.morphs[x["f^0"]]) for x in w]
        else:
            r.counterexample = _decode_cx(_get(d, "counterexample", where), codec, f"{where}.counterexample")
            r.failures = [_decode_cx(x, codec, f"{where}.failures[{i}]") for i, x in enumerate(d.get("failures", []))]
            if not r.failures:
                r.failures = [r.counterexample]
    except (KeyError, IndexError, TypeError, ValueError) as exc:
        if isinstance(exc, DocumentError):
            raise
        raise DocumentError(f"{where}: malformed witness record ({exc!r})") from None
    return r
