from __future__ import annotations

import io
import json
import subprocess
import sys

import oracles
import pytest

from extcat import cli, document, em_category, finstruct
from conftest import DATA


def table(g):
    return [list(r) for r in g.table]


def run(*argv: str) -> tuple[int, str]:
    out = io.StringIO()
    code = cli.main(list(argv), out)
    return code, out.getvalue()


def test_em_preset_holds():
    code, text = run("check", "--instance", "em", "--input", "chain3")
    assert code == 0
    assert "C1 holds" in text and "C2 holds" in text and "C3 holds" in text
    assert "is_em_shaped: true" in text


def test_topgroup_is_not_em_shaped():
    code, text = run("check", "--instance", "topgroup", "--groups", "Z1,Z2,Z4")
    assert code == 0 and "is_em_shaped: false" in text


def test_pseudotop_spaces():
    assert run("check", "--instance", "pseudotop", "--spaces", "2,1", "--policy", "exhaustive")[0] == 0


@pytest.mark.parametrize("argv", [
    ["check", "--instance", "pseudotop", "--spaces", "4"],
    ["check", "--instance", "pseudotop", "--spaces", "two"],
    ["check", "--instance", "em", "--input", "no-such-category"],
    ["check", "--instance", "topgroup", "--groups", "Z9"],
    ["check", "--instance", "topgroup"],
    ["check", "--instance", "raw"],
    ["check", "--instance", "bogus"],
    ["enumerate", "topologies"],
    ["verify", "/nonexistent/report.json"],
    [],
])
def test_input_errors_exit_2(argv, capsys):
    assert run(*argv)[0] == 2


def test_input_error_message(capsys):
    run("check", "--instance", "em", "--input", "no-such-category")
    assert "extcat: input error: unknown category preset" in capsys.readouterr().err


def test_machine_output_is_byte_identical(tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    for p in (a, b):
        assert run("check", "--instance", "topgroup", "--groups", "Z2,Z4", "--format", "machine",
                   "--output", str(p))[0] == 0
    assert a.read_bytes() == b.read_bytes()


def test_machine_output_is_byte_identical_across_processes(tmp_path):
    outs = []
    for _ in range(2):
        proc = subprocess.run([sys.executable, "-m", "extcat.cli", "check", "--instance", "em", "--input", "chain3",
                               "--format", "machine"], capture_output=True, check=True,
                              env={"PYTHONHASHSEED": "random"})
        outs.append(proc.stdout)
    assert outs[0] == outs[1]


def broken_chain(tmp_path):
    ec = em_category.theorem1_construct(em_category.chain3())
    ec = ec.restrict(ec.phi - {em_category.hom_object(em_category.chain3(), "A", "C")})
    path = tmp_path / "broken.json"
    path.write_text(document.dumps(document.structure_document(ec)))
    return path


def test_failure_exits_1_and_prints_a_trace(tmp_path):
    code, text = run("check", "--instance", "em", "--input", str(broken_chain(tmp_path)))
    assert code == 1
    assert "C1 fails" in text and "no-witness" in text


@pytest.mark.parametrize("flag_form", [True, False])
def test_verify_confirms_recorded_verdicts(tmp_path, flag_form):
    report = tmp_path / "report.json"
    code, _ = run("check", "--instance", "em", "--input", str(broken_chain(tmp_path)), "--format", "machine",
                  "--output", str(report))
    assert code == 1
    argv = ["--verify", str(report)] if flag_form else ["verify", str(report)]
    code, text = run(*argv)
    assert code == 0
    assert text.count("confirmed") == 3 and "REJECTED" not in text


def test_verify_rejects_a_forged_verdict(tmp_path):
    report = tmp_path / "report.json"
    run("check", "--instance", "em", "--input", "chain3", "--format", "machine", "--output", str(report))
    doc = json.loads(report.read_text())
    doc["reports"][2]["witnesses"][0]["f0"] = doc["reports"][2]["witnesses"][0]["f^0"]
    report.write_text(document.dumps(doc))
    code, text = run("verify", str(report), "--format", "machine")
    verdicts = json.loads(text)["verified"]
    assert code == 1 and [v["confirmed"] for v in verdicts] == [True, True, False]


def test_build_then_check_from_structure(tmp_path):
    path = tmp_path / "s.json"
    assert run("build", "--instance", "pseudotop", "--input", str(DATA / "sierpinski_coarse.json"),
               "--output", str(path))[0] == 0
    assert run("check", "--instance", "pseudotop", "--input", str(path))[0] == 0
    assert run("check", "--instance", "em", "--input", str(path))[0] == 2


def test_crafted_input_without_coarseness_fails(tmp_path):
    code, text = run("check", "--instance", "pseudotop", "--input", str(DATA / "sierpinski_no_coarseness.json"))
    assert code == 1 and "C1 fails" in text and "C3 holds" in text


def test_literal_mode_and_collect_all():
    code, text = run("check", "--instance", "em", "--input", "arrow", "--mode", "literal", "--collect-all")
    assert code == 0


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_enumerate_topologies_counts(n):
    code, text = run("enumerate", "topologies", "--size", str(n), "--format", "machine")
    assert code == 0 and json.loads(text)["count"] == oracles.topology_count(n)


def test_enumerate_group_structures():
    code, text = run("enumerate", "normal-subgroups", "--group", "S3", "--format", "machine")
    s3, z4, z2 = (finstruct.preset_group(n) for n in ("S3", "Z4", "Z2"))
    assert json.loads(text)["count"] == len(oracles.normal_subgroups(table(s3)))
    code, text = run("enumerate", "homomorphisms", "--group", "Z4", "--target", "Z2", "--format", "machine")
    assert {tuple(f) for f in json.loads(text)["items"]} == oracles.homomorphisms(table(z4), table(z2))
    code, text = run("enumerate", "group-topologies", "--group", "Z4")
    brute = [t for t in oracles.topologies(4) if oracles.is_group_topology(table(z4), t)]
    assert code == 0 and text.startswith(f"{len(brute)} group-topologies")
