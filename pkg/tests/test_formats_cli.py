import json
import math
from pathlib import Path

import numpy as np
import pytest

from udembed import formats
from udembed.cli import FEASIBLE_CAVEAT, main
from udembed.construct import execute, heawood_plan
from udembed.embed import Embedding, refine, solve
from udembed.graphs import Graph, catalog
from udembed.groebner import buchberger
from udembed.poly import auto_pin, distance_constraints
from udembed.render import render_svg

H = math.sqrt(3) / 2


def _k4e_embedding():
    g = catalog("k4_minus_e")
    return Embedding(g, {"1": (0, 0), "2": (1, 0), "3": (0.5, H), "4": (1.5, H)})


def test_embedding_round_trip(tmp_path):
    g = catalog("petersen")
    emb = solve(g).embedding
    path = tmp_path / "p.json"
    formats.write(path, formats.embedding_doc(emb))
    back = formats.embedding_from_doc(formats.read(path))
    assert back.graph == g
    assert abs(back.max_edge_deviation - emb.max_edge_deviation) <= 1e-15
    assert abs(back.min_separation - emb.min_separation) <= 1e-15
    assert np.array_equal(back.coords, emb.coords)


def test_embedding_doc_rejects_tampering():
    doc = formats.embedding_doc(_k4e_embedding())
    doc["graph"]["edges"].pop()
    with pytest.raises(ValueError):
        formats.embedding_from_doc(doc)
    with pytest.raises(ValueError):
        formats.embedding_from_doc({"format": "other"})


def test_basis_doc():
    g = catalog("k4_minus_e")
    sys_ = distance_constraints(g, auto_pin(g))
    doc = formats.basis_doc(sys_, buchberger(sys_))
    assert doc["status"] == "Feasible"
    assert doc["pinned_relations"] == ["x1", "y1", "x2 - 1", "y2"]
    json.dumps(doc)


def test_svg_k4e():
    svg = render_svg(_k4e_embedding())
    assert svg.count("<circle") == 4
    assert svg.count('class="unit"') == 5
    assert 'class="off"' not in svg


def test_svg_heawood_plan_marks_target():
    plan = heawood_plan()
    pl = execute(plan)
    emb = Embedding(plan.graph, pl.coords)
    svg = render_svg(emb)
    assert svg.count("<circle") == 14
    assert svg.count('class="unit"') == 20
    assert svg.count('class="off"') == 1
    assert 'data-edge="1-a"' in svg and "|1-a| = 1.0993" in svg
    assert render_svg(emb) == svg


def test_svg_edgeless():
    g = Graph(("p", "q"), ())
    svg = render_svg(Embedding(g, {"p": (0, 0), "q": (2, 1)}))
    assert svg.count("<circle") == 2 and "<line" not in svg
    assert svg.startswith("<?xml") and svg.rstrip().endswith("</svg>")


# --------------------------------------------------------------------------
# Command line


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_cli_k4_infeasible(capsys):
    code, out, _ = run(capsys, "groebner", "--graph", "k4", "--pin", "auto")
    assert code == 2
    assert "basis = {1}" in out


def test_cli_feasible_prints_caveat(capsys):
    code, out, _ = run(capsys, "groebner", "--graph", "k4_minus_e", "--extract")
    assert code == 0
    assert FEASIBLE_CAVEAT in out
    assert "duplicate 1~4" in out
    code, out, _ = run(capsys, "groebner", "--graph", "k2_3")
    assert code == 0 and FEASIBLE_CAVEAT in out


def test_cli_saturated_k2_3(capsys):
    code, out, _ = run(capsys, "groebner", "--graph", "k2_3", "--saturate", "same-part", "--order", "grevlex")
    assert code == 2


def test_cli_limit(capsys):
    code, _, err = run(capsys, "groebner", "--graph", "petersen", "--max-pairs", "5")
    assert code == 4 and "limit" in err


def test_cli_solve_k2(capsys):
    code, out, _ = run(capsys, "solve", "--graph", "k2")
    assert code == 0 and "embedding found" in out
    rows = [line.split() for line in out.splitlines() if line.startswith("  ")]
    assert [[float(x) for x in r[1:]] for r in rows] == [[0.0, 0.0], [1.0, 0.0]]


def test_cli_solve_failure_is_3(capsys):
    code, out, _ = run(capsys, "solve", "--graph", "k4", "--restarts", "3")
    assert code == 3 and "not a proof" in out


@pytest.mark.parametrize("argv", [
    ["frobnicate"],
    ["groebner"],
    ["groebner", "--graph", "k4", "--lcf", "(5,-5)^7"],
    ["graph", "--graph", "nonesuch"],
    ["graph", "--lcf", "(5,-5"],
    ["graph", "--lcf", "[5]^7"],
    ["graph", "--diffset", "1,2,4"],
    ["groebner", "--graph", "k4", "--pin", "1=0"],
    ["groebner", "--graph", "k3", "--saturate", "same-part"],
    ["verify", "--embedding", "/no/such/file.json"],
    ["plan", "--plan", "heawood", "--params", "gamma=1"],
    ["sweep", "--plan", "heawood", "--range", "1"],
])
def test_cli_usage_errors(capsys, argv):
    code, out, err = run(capsys, *argv)
    assert code == 1
    assert err


def test_cli_graph_commands(capsys, tmp_path):
    code, out, _ = run(capsys, "graph", "--lcf", "(5,-5)^7", "--compare", "heawood")
    assert code == 0 and "isomorphic to heawood: True" in out and "girth: 6" in out
    code, out, _ = run(capsys, "graph", "--diffset", "1,2,4", "--modulus", "7", "--compare", "heawood")
    assert "isomorphic to heawood: True" in out
    edges = tmp_path / "g.txt"
    edges.write_text("a b\nb c\nc a\n")
    code, out, _ = run(capsys, "graph", "--edges", str(edges))
    assert code == 0 and "3 vertices, 3 edges" in out


def test_cli_constraints(capsys):
    code, out, _ = run(capsys, "constraints", "--graph", "k2_3")
    assert code == 0
    assert "x2^2 - 2*x2 + y2^2 = 0" in out


def test_cli_out_writes_manifest_and_replays(capsys, tmp_path):
    out = tmp_path / "m.json"
    code, _, _ = run(capsys, "solve", "--graph", "moser_spindle", "--seed", "3", "--out", str(out))
    assert code == 0
    manifest = json.loads(Path(str(out) + ".manifest.json").read_text())
    assert manifest["format"] == formats.MANIFEST_FORMAT
    assert manifest["options"]["seed"] == 3
    assert manifest["inputs"]["graph"].startswith("catalog:moser_spindle:")
    first = out.read_text()
    # replay the recorded command
    code, _, _ = run(capsys, *manifest["command"])
    assert code == 0 and out.read_text() == first
    assert formats.sha256_text(first) == manifest["outcome"]["output_sha256"]


def test_cli_verify_refine_rigidity(capsys, tmp_path):
    g = catalog("moser_spindle")
    rough = Embedding(g, refine(g, solve(g).embedding.coords).coords * 1.01)
    src = tmp_path / "rough.json"
    formats.write(src, formats.embedding_doc(rough))
    code, out, _ = run(capsys, "verify", "--embedding", str(src))
    assert code == 3 and "FAIL" in out
    fixed = tmp_path / "fixed.json"
    code, out, _ = run(capsys, "refine", "--embedding", str(src), "--out", str(fixed))
    assert code == 0 and "PASS" in out
    code, out, _ = run(capsys, "verify", "--embedding", str(fixed))
    assert code == 0
    code, out, _ = run(capsys, "rigidity", "--embedding", str(fixed))
    assert code == 0 and "flexes 0" in out


def test_cli_plan_sweep_bisect_render(capsys, tmp_path):
    code, out, _ = run(capsys, "plan", "--plan", "heawood")
    assert code == 0 and "20 unit edges" in out
    table = tmp_path / "t.tsv"
    code, _, err = run(capsys, "sweep", "--plan", "heawood", "--axis", "alpha", "--samples", "1000",
                       "--table", str(table))
    assert code == 0 and "1000 samples" in err
    assert len(table.read_text().splitlines()) == 1001
    code, out, _ = run(capsys, "bisect", "--plan", "four_bar", "--axis", "theta", "--range", "0.1,3.0",
                       "--samples", "30")
    assert code == 0 and "1.04719755119" in out
    svg = tmp_path / "h.svg"
    code, _, _ = run(capsys, "render", "--plan", "heawood", "--out", str(svg))
    assert code == 0 and svg.read_text().count('class="off"') == 1
    assert Path(str(svg) + ".manifest.json").exists()


def test_cli_bisect_no_bracket(capsys):
    code, out, _ = run(capsys, "bisect", "--plan", "four_bar", "--axis", "theta", "--range", "1.5,3.0",
                       "--samples", "10")
    assert code == 3 and out.startswith("NO_BRACKET")


def test_cli_help_lists_subcommands(capsys):
    assert main(["--help"]) == 0
    out = capsys.readouterr().out
    for sub in ("graph", "constraints", "groebner", "solve", "verify", "refine", "rigidity", "plan", "sweep",
                "bisect", "render"):
        assert sub in out
