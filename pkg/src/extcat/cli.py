"""Command line front end.

    extcat build     --instance em --input chain3 [--output FILE]
    extcat check     --instance topgroup --groups Z1,Z2,Z4 [--mode strict] [--format machine]
    extcat check     --instance pseudotop --spaces 2,2 --policy exhaustive
    extcat enumerate topologies --size 3
    extcat verify    REPORT            (also: extcat --verify REPORT)

Exit status: 0 when every check holds (``verify``: every recorded verdict is
confirmed), 1 on an axiom failure (``verify``: a verdict that does not
replay), 2 on input errors.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Any, Optional, Sequence, TextIO

from . import document, em_category, finstruct, pseudotop, topgroup
from .kernel import CheckReport, ExtendedCategory, FailureKind, ObjectF, check_all, is_em_shaped, replay

EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2
SPACE_NAMES = "XYZUVW"
ENUMERATIONS = ("topologies", "group-topologies", "normal-subgroups", "homomorphisms")
TRACE_LIMIT = 12
REPR_LIMIT = 160


class InputError(Exception):
    pass


# -- building structures ------------------------------------------------------


def _read_json(path: str) -> Any:
    try:
        return json.loads(Path(path).read_text())
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: invalid JSON at line {exc.lineno} column {exc.colno}: {exc.msg}") from None


def _groups(args: argparse.Namespace, data: Any) -> list[finstruct.FiniteGroup]:
    if data is not None:
        recs = document._get(data, "groups", "$")
        return [document._decode_group(g, f"groups[{i}]") for i, g in enumerate(recs)]
    if not args.groups:
        raise InputError("topgroup needs --groups or --input")
    try:
        return [finstruct.preset_group(n.strip()) for n in args.groups.split(",") if n.strip()]
    except ValueError as exc:
        raise InputError(str(exc)) from None


def _spaces(args: argparse.Namespace) -> list[finstruct.FiniteSet]:
    if not args.spaces:
        raise InputError("pseudotop needs --spaces or --input")
    try:
        sizes = [int(x) for x in args.spaces.split(",")]
    except ValueError:
        raise InputError(f"--spaces expects comma separated sizes, got {args.spaces!r}") from None
    if len(sizes) > len(SPACE_NAMES):
        raise InputError(f"at most {len(SPACE_NAMES)} spaces")
    return [finstruct.FiniteSet.of_size(n, SPACE_NAMES[i]) for i, n in enumerate(sizes)]


def _pseudotop_from(data: dict, policy: str) -> ExtendedCategory:
    spaces = [document._decode_space(s, f"spaces[{i}]") for i, s in enumerate(document._get(data, "spaces", "$"))]
    by_name = {s.name: s for s in spaces}
    tops = None
    if data.get("topologies") is not None:
        try:
            tops = {by_name[k]: [finstruct.FiniteTopology(by_name[k], frozenset(t)) for t in v]
                    for k, v in data["topologies"].items()}
        except KeyError as exc:
            raise InputError(f"topologies: unknown space {exc}") from None
    return pseudotop.build_universe(spaces, data.get("policy", policy), tops, bool(data.get("require_coarser", True)))


def _raw_from(data: dict) -> ExtendedCategory:
    doc = {"format": document.STRUCTURE_FORMAT, "version": document.VERSION, "instance": "raw",
           "name": data.get("name", "raw"), "source": {"composition": data.get("composition", [])},
           "morphisms": data.get("morphisms", []), "objects": data.get("objects", []), "pi": data.get("pi", [])}
    return document.load_structure(doc)


def build_structure(args: argparse.Namespace) -> ExtendedCategory:
    data = None
    em_preset = args.instance == "em" and args.input and not Path(args.input).exists()
    if args.input and not em_preset:
        data = _read_json(args.input)
        if isinstance(data, dict) and data.get("format") == document.STRUCTURE_FORMAT:
            ec = document.load_structure(data)
            if args.instance and document._instance_of(ec) != args.instance and ec.morphisms:
                raise InputError(f"{args.input} holds a {document._instance_of(ec)} structure, not {args.instance}")
            return ec
    instance = args.instance
    if instance == "em":
        if data is None:
            if not args.input:
                raise InputError("em needs --input (a preset name or a category file)")
            try:
                c = em_category.preset_category(args.input)
            except ValueError as exc:
                raise InputError(f"{exc} (and no file of that name)") from None
        else:
            c = document._decode_category(data, "$")
        return em_category.theorem1_construct(c)
    if instance == "topgroup":
        return topgroup.build_universe(_groups(args, data))
    if instance == "pseudotop":
        if data is not None:
            return _pseudotop_from(data, args.policy)
        return pseudotop.build_universe(_spaces(args), args.policy)
    if instance == "raw":
        if data is None:
            raise InputError("raw needs --input")
        return _raw_from(data)
    raise InputError("--instance is required")


# -- human output -------------------------------------------------------------


class _Names:
    """Short names for objects (#index) used in human traces."""

    def __init__(self, ec: ExtendedCategory):
        self.oid = ec.object_index

    def obj(self, o: ObjectF) -> str:
        return f"#{self.oid[o]} {_clip(repr(o))}"

    def value(self, v: Any) -> str:
        if isinstance(v, ObjectF):
            return self.obj(v)
        return _clip(repr(v.payload) if hasattr(v, "payload") else repr(v))


def _clip(text: str) -> str:
    return text if len(text) <= REPR_LIMIT else text[: REPR_LIMIT - 3] + "..."


def _trace(r: CheckReport, names: _Names, out: TextIO) -> None:
    cx = r.counterexample
    a = cx.assignment
    v = names.value
    out.write(f"{r.axiom} fails: {cx.kind.value}\n")
    if r.axiom == "C3":
        out.write(f"  for F = {v(a['F'])}\n")
        if cx.kind is FailureKind.MEMBERSHIP:
            out.write(f"  no pair {a['missing']} lies in pi\n")
            return
        out.write(f"  no {'f0' if a['side'] == 'left' else 'f^0'} is neutral on the {a['side']}:\n")
        if not cx.refutations:
            out.write("    every candidate object holds only empty element sets\n")
        for ref in cx.refutations[:TRACE_LIMIT]:
            out.write(f"    candidate {v(ref['candidate'])} from {v(ref['element'])} of #{names.oid[ref['object']]}"
                      f" moves f = {v(ref['f'])}\n")
        _more(cx.refutations, out)
        return
    head = ["F1", "F2"] + (["F3"] if r.axiom == "C2" else [])
    out.write("  for " + ", ".join(f"{k} = {v(a[k])}" for k in head) + "\n")
    if cx.kind is FailureKind.NO_WITNESS:
        target = "F3" if r.axiom == "C1" else "F4"
        inner = "E3" if r.axiom == "C1" else "E4"
        out.write(f"  no {target} in phi works:\n")
        for ref in cx.refutations[:TRACE_LIMIT]:
            picks = ", ".join(f"{k} = {v(ref[k])}" for k in ("E1", "E2", "E3") if k in ref)
            out.write(f"    {target} = #{names.oid[ref[target]]}: with {picks}\n")
            for m in ref["misses"][:TRACE_LIMIT]:
                fs = ", ".join(f"{k} = {v(m[k])}" for k in ("f1", "f2", "f3") if k in m)
                out.write(f"      {inner} = {v(m[inner])} misses the composite of {fs}\n")
        _more(cx.refutations, out)
        return
    picks = ", ".join(f"{k} = {v(a[k])}" for k in ("E1", "E2", "E3") if k in a)
    fs = ", ".join(f"{k} = {v(a[k])}" for k in ("f1", "f2", "f3") if k in a)
    out.write(f"  with {picks}\n  at {fs}\n")


def _more(items: list, out: TextIO) -> None:
    if len(items) > TRACE_LIMIT:
        out.write(f"    ... {len(items) - TRACE_LIMIT} more\n")


def write_human(ec: ExtendedCategory, reports: list[CheckReport], out: TextIO) -> None:
    names = _Names(ec)
    out.write(f"structure {ec.name or '(unnamed)'}: |phi| = {len(ec.phi)}, |pi| = {len(ec.pi)}, "
              f"chains = {ec.chain_count()}\n")
    for r in reports:
        if r.holds:
            mode = f" [{r.mode}]" if r.mode else ""
            count = len(r.witnesses)
            out.write(f"{r.axiom} holds{mode} ({count} obligation{'s' if count != 1 else ''} witnessed)\n")
            if r.axiom == "C1":
                for w in list(r.witnesses)[:3]:
                    out.write(f"  (#{names.oid[w.f1]}, #{names.oid[w.f2]}) -> F3 = #{names.oid[w.f3]}\n")
            elif r.axiom == "C3":
                for w in r.witnesses[:3]:
                    out.write(f"  F = #{names.oid[w.obj]}: f0 = {w.left.payload!r}, f^0 = {w.right.payload!r}\n")
        else:
            _trace(r, names, out)
            if len(r.failures) > 1:
                out.write(f"  ({len(r.failures)} failing obligations in total)\n")
    shaped, wide = is_em_shaped(ec)
    if shaped:
        out.write("is_em_shaped: true\n")
    else:
        out.write(f"is_em_shaped: false, object {names.obj(wide)} has {len(wide)} element sets\n")


# -- commands -----------------------------------------------------------------


def _emit(text: str, args: argparse.Namespace, out: TextIO) -> None:
    if getattr(args, "output", None):
        Path(args.output).write_text(text)
    else:
        out.write(text)


def cmd_build(args: argparse.Namespace, out: TextIO) -> int:
    ec = build_structure(args)
    _emit(document.dumps(document.structure_document(ec)), args, out)
    return EXIT_OK


def cmd_check(args: argparse.Namespace, out: TextIO) -> int:
    ec = build_structure(args)
    reports = check_all(ec, args.mode, collect_all=args.collect_all)
    if args.format == "machine":
        _emit(document.dumps(document.report_document(ec, reports, args.mode)), args, out)
    else:
        from io import StringIO

        buf = StringIO()
        write_human(ec, reports, buf)
        _emit(buf.getvalue(), args, out)
    return EXIT_OK if all(r.holds for r in reports) else EXIT_FAIL


def cmd_verify(path: str, fmt: str, out: TextIO) -> int:
    ec, reports = document.load_report(_read_json(path))
    ok = True
    lines = []
    for r in reports:
        confirmed = replay(ec, r)
        ok &= confirmed
        if r.holds:
            what = "witnesses re-evaluate to true" if confirmed else "witnesses do NOT re-evaluate to true"
        else:
            what = ("counterexample re-evaluates to false" if confirmed
                    else "counterexample does NOT re-evaluate to false")
        lines.append((r.axiom, r.verdict, confirmed, what))
    if fmt == "machine":
        out.write(document.dumps({"verified": [{"axiom": a, "verdict": v, "confirmed": c} for a, v, c, _ in lines]}))
    else:
        for a, v, c, what in lines:
            out.write(f"{a} {v}: {what} ({'confirmed' if c else 'REJECTED'})\n")
    return EXIT_OK if ok else EXIT_FAIL


def cmd_enumerate(args: argparse.Namespace, out: TextIO) -> int:
    what = args.what
    records: list[Any] = []
    lines: list[str] = []
    if what == "topologies":
        if args.size is None:
            raise InputError("enumerate topologies needs --size")
        space = finstruct.FiniteSet.of_size(args.size, "X")
        for t in finstruct.enumerate_topologies(space):
            records.append(list(t.key))
            lines.append(repr(t))
    else:
        if not args.group:
            raise InputError(f"enumerate {what} needs --group")
        g = finstruct.preset_group(args.group)
        if what == "normal-subgroups":
            for n in finstruct.normal_subgroups(g):
                records.append(n)
                lines.append("{" + ", ".join(g.carrier.members(n)) + "}")
        elif what == "group-topologies":
            for t in finstruct.compatible_topologies(g):
                records.append(list(t.key))
                lines.append(repr(t))
        else:
            h = finstruct.preset_group(args.target or args.group)
            for f in finstruct.enumerate_homomorphisms(g, h):
                records.append(list(f.table))
                lines.append(repr(f))
    if args.format == "machine":
        out.write(document.dumps({"enumerate": what, "count": len(records), "items": records}))
    else:
        out.write(f"{len(records)} {what}\n")
        for line in lines:
            out.write(f"  {line}\n")
    return EXIT_OK


def _parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="extcat", description="Build finite extended categories and check their axioms.")
    p.add_argument("--verify", metavar="REPORT", help="re-validate a machine-format report without searching")
    p.add_argument("--format", choices=("human", "machine"), default="human", dest="top_format")
    sub = p.add_subparsers(dest="command")

    def structure_args(sp: argparse.ArgumentParser) -> None:
        sp.add_argument("--instance", choices=document.INSTANCES, required=True)
        sp.add_argument("--input", help="em preset name, or a JSON file (instance description or structure document)")
        sp.add_argument("--groups", help="comma separated preset groups, e.g. Z1,Z2,Z4")
        sp.add_argument("--spaces", help="comma separated space sizes, e.g. 2,2")
        sp.add_argument("--policy", choices=pseudotop.POLICIES, default="maximal-plus")
        sp.add_argument("--output", help="write to this file instead of stdout")

    b = sub.add_parser("build", help="write the structure document")
    structure_args(b)
    c = sub.add_parser("check", help="check C1, C2 and C3")
    structure_args(c)
    c.add_argument("--mode", choices=("strict", "literal"), default="strict")
    c.add_argument("--format", choices=("human", "machine"), default="human")
    c.add_argument("--collect-all", action="store_true", help="record every failing obligation")
    e = sub.add_parser("enumerate", help="list finite structures")
    e.add_argument("what", choices=ENUMERATIONS)
    e.add_argument("--size", type=int)
    e.add_argument("--group")
    e.add_argument("--target", help="codomain group for homomorphisms")
    e.add_argument("--format", choices=("human", "machine"), default="human")
    v = sub.add_parser("verify", help="re-validate a machine-format report")
    v.add_argument("report")
    v.add_argument("--format", choices=("human", "machine"), default="human")
    return p


def main(argv: Optional[Sequence[str]] = None, out: Optional[TextIO] = None) -> int:
    out = out or sys.stdout
    parser = _parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_INPUT
    try:
        if args.verify:
            return cmd_verify(args.verify, args.top_format, out)
        if args.command is None:
            parser.print_usage(sys.stderr)
            return EXIT_INPUT
        if args.command == "verify":
            return cmd_verify(args.report, args.format, out)
        if args.command == "build":
            return cmd_build(args, out)
        if args.command == "check":
            return cmd_check(args, out)
        return cmd_enumerate(args, out)
    except (InputError, document.DocumentError, em_category.CategoryError, ValueError) as exc:
        sys.stderr.write(f"extcat: input error: {exc}\n")
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
