import json

import pytest

from edgeguard.cli import main
from edgeguard.corpus import GeneratorSpec, generate
from edgeguard.embedding import build_from_rotation

TRIANGLE = {"n": 3, "rotations": [[1, 2], [2, 0], [0, 1]]}
C4 = {"n": 4, "rotations": [[1, 3], [2, 0], [3, 1], [0, 2]]}
TWO_TRIANGLES = {"n": 6, "rotations": [[1, 2], [2, 0], [0, 1], [4, 5], [5, 3], [3, 4]]}


@pytest.fixture
def graph_file(tmp_path):
    def write(doc, name="g.json"):
        p = tmp_path / name
        p.write_text(json.dumps(doc))
        return str(p)

    return write


def write_generated(tmp_path, spec, name):
    p = tmp_path / name
    p.write_text(generate(spec).to_json())
    return str(p)


class TestGuard:
    def test_triangle_two_fifths(self, tmp_path, graph_file, capsys):
        out = tmp_path / "guards.json"
        rc = main(["guard", graph_file(TRIANGLE), "--algorithm", "2n5", "-o", str(out)])
        assert rc == 0
        doc = json.loads(out.read_text())
        assert len(doc["edges"]) == 1
        assert doc["algorithm"] == "2n5"
        assert "1 guard edges" in capsys.readouterr().err

    def test_c4_best_is_minimum(self, tmp_path, graph_file):
        out = tmp_path / "guards.json"
        rc = main(["guard", graph_file(C4), "-o", str(out)])
        assert rc == 0
        assert len(json.loads(out.read_text())["edges"]) == 1

    def test_icosahedron_three_eighths(self, tmp_path):
        src = write_generated(tmp_path, GeneratorSpec("platonic", 12), "ico.json")
        out = tmp_path / "guards.json"
        rc = main(["guard", src, "--algorithm", "3n8", "-o", str(out)])
        assert rc == 0
        assert len(json.loads(out.read_text())["edges"]) <= 4

    def test_stdout_when_no_output_flag(self, graph_file, capsys):
        rc = main(["guard", graph_file(TRIANGLE), "--algorithm", "n3-degenerate"])
        assert rc == 0
        doc = json.loads(capsys.readouterr().out)
        assert doc["algorithm"] == "n3-degenerate"

    def test_inapplicable_algorithm(self, tmp_path, capsys):
        # icosahedron is 5-regular, so the 2-degenerate peeling refuses
        src = write_generated(tmp_path, GeneratorSpec("platonic", 12), "ico.json")
        rc = main(["guard", src, "--algorithm", "n3-degenerate"])
        assert rc == 2

    def test_three_hop_close_quads(self, tmp_path, capsys):
        src = write_generated(tmp_path, GeneratorSpec("platonic", 8), "cube.json")
        rc = main(["guard", src, "--algorithm", "3hop"])
        assert rc == 2

    def test_best_skips_three_hop_on_close_quads(self, tmp_path, graph_file, capsys):
        src = write_generated(tmp_path, GeneratorSpec("platonic", 8), "cube.json")
        rc = main(["guard", src])
        assert rc == 0
        doc = json.loads(capsys.readouterr().out)
        assert doc["algorithm"] != "3hop"

    def test_guard_output_verifies(self, tmp_path):
        src = write_generated(
            tmp_path, GeneratorSpec("random_plane", 24, seed=3), "g.json"
        )
        out = tmp_path / "guards.json"
        assert main(["guard", src, "-o", str(out)]) == 0
        assert main(["verify", src, str(out)]) == 0


class TestVerify:
    def test_all_guarded(self, tmp_path, graph_file, capsys):
        guards = tmp_path / "ab.json"
        guards.write_text(json.dumps({"edges": [[0, 1]]}))
        rc = main(["verify", graph_file(TRIANGLE), str(guards)])
        assert rc == 0
        assert "all 2 faces guarded" in capsys.readouterr().out

    def test_unguarded_face_listed(self, tmp_path, graph_file, capsys):
        guards = tmp_path / "ab.json"
        guards.write_text(json.dumps({"edges": [[0, 1]]}))
        rc = main(["verify", graph_file(TWO_TRIANGLES), str(guards)])
        assert rc == 1
        out = capsys.readouterr().out
        assert "unguarded face" in out and "[3, 4, 5]" in out

    def test_bad_edge_reference(self, tmp_path, graph_file, capsys):
        guards = tmp_path / "bad.json"
        guards.write_text(json.dumps({"edges": [[0, 5]]}))
        rc = main(["verify", graph_file(TRIANGLE), str(guards)])
        assert rc == 2

    def test_malformed_json(self, tmp_path, graph_file):
        guards = tmp_path / "bad.json"
        guards.write_text("{nope")
        assert main(["verify", graph_file(TRIANGLE), str(guards)]) == 2


class TestOracle:
    def test_figure_minimum_is_two(self, tmp_path, capsys):
        src = write_generated(tmp_path, GeneratorSpec("figure_ngc", 10), "fig.json")
        rc = main(["oracle", src])
        assert rc == 0
        assert len(json.loads(capsys.readouterr().out)["edges"]) == 2

    def test_budget_exhaustion(self, tmp_path):
        src = write_generated(tmp_path, GeneratorSpec("platonic", 12), "ico.json")
        assert main(["oracle", src, "--budget", "10"]) == 3

    def test_limit_prunes_without_changing_answer(self, tmp_path, capsys):
        src = write_generated(tmp_path, GeneratorSpec("figure_ngc", 10), "fig.json")
        rc = main(["oracle", src, "--limit", "3"])
        assert rc == 0
        assert len(json.loads(capsys.readouterr().out)["edges"]) == 2


class TestStats:
    def test_c4(self, graph_file, capsys):
        rc = main(["stats", graph_file(C4)])
        assert rc == 0
        out = capsys.readouterr().out
        assert "n=4" in out and "alpha=2" in out
        assert "quad_hop f0 f1 = 0" in out

    def test_far_quads_spacing_reported(self, tmp_path, capsys):
        src = write_generated(tmp_path, GeneratorSpec("far_quads", 2, seed=1), "fq.json")
        rc = main(["stats", src])
        assert rc == 0
        hop_lines = [l for l in capsys.readouterr().out.splitlines()
                     if l.startswith("quad_hop")]
        assert len(hop_lines) == 1
        assert int(hop_lines[0].rsplit("=", 1)[1]) >= 3

    def test_no_quads(self, graph_file, capsys):
        rc = main(["stats", graph_file(TRIANGLE)])
        assert rc == 0
        assert "quad_hops: none" in capsys.readouterr().out


class TestGen:
    def test_deterministic_bytes(self, tmp_path):
        a, b = tmp_path / "a.json", tmp_path / "b.json"
        argv = ["gen", "--family", "random_triangulation", "--size", "18",
                "--seed", "5", "-o"]
        assert main(argv + [str(a)]) == 0
        assert main(argv + [str(b)]) == 0
        assert a.read_text() == b.read_text()

    def test_document_rebuilds(self, tmp_path, capsys):
        rc = main(["gen", "--family", "fan_outerplanar", "--size", "7"])
        assert rc == 0
        g = build_from_rotation(json.loads(capsys.readouterr().out))
        assert g.n == 7

    def test_option_passthrough(self, tmp_path, capsys):
        rc = main(["gen", "--family", "random_plane", "--size", "20",
                   "--option", "p=0.0"])
        assert rc == 0
        g = build_from_rotation(json.loads(capsys.readouterr().out))
        assert g.m == 3 * 20 - 6

    def test_unknown_family_is_usage_error(self, capsys):
        assert main(["gen", "--family", "klein_bottle", "--size", "3"]) == 2

    def test_exhausted_budget(self, capsys):
        assert main(["gen", "--family", "far_quads", "--size", "20"]) == 3

    def test_bad_option_syntax(self, capsys):
        assert main(["gen", "--family", "random_plane", "--size", "12",
                     "--option", "nonsense"]) == 2


class TestCheckGuardColoring:
    def test_figure_has_none(self, tmp_path, capsys):
        src = write_generated(tmp_path, GeneratorSpec("figure_ngc", 10), "fig.json")
        rc = main(["check-guard-coloring", src])
        assert rc == 0
        assert capsys.readouterr().out.strip() == "none"

    def test_c4_has_one(self, graph_file, capsys):
        rc = main(["check-guard-coloring", graph_file(C4)])
        assert rc == 0
        doc = json.loads(capsys.readouterr().out)
        assert set(doc["colors"].values()) == {0, 1}

    def test_too_large(self, tmp_path):
        src = write_generated(tmp_path, GeneratorSpec("fan_outerplanar", 30), "fan.json")
        assert main(["check-guard-coloring", src]) == 3


class TestRender:
    def test_triangle_with_guard(self, tmp_path, graph_file):
        guards = tmp_path / "ab.json"
        guards.write_text(json.dumps({"edges": [[0, 1]]}))
        out = tmp_path / "tri.svg"
        rc = main(["render", graph_file(TRIANGLE), "--guards", str(guards),
                   "-o", str(out)])
        assert rc == 0
        text = out.read_text()
        assert text.count('<g id="line2d_') == 3
        assert 'version="1.1"' in text

    def test_icosahedron_edge_elements(self, tmp_path):
        src = write_generated(tmp_path, GeneratorSpec("platonic", 12), "ico.json")
        out = tmp_path / "ico.svg"
        assert main(["render", src, "-o", str(out)]) == 0
        assert out.read_text().count('<g id="line2d_') == 30

    def test_deterministic(self, tmp_path, graph_file):
        src = graph_file(TWO_TRIANGLES)
        a, b = tmp_path / "a.svg", tmp_path / "b.svg"
        assert main(["render", src, "-o", str(a)]) == 0
        assert main(["render", src, "-o", str(b)]) == 0
        assert a.read_bytes() == b.read_bytes()

    def test_missing_edge_in_guards(self, tmp_path, graph_file):
        guards = tmp_path / "bad.json"
        guards.write_text(json.dumps({"edges": [[0, 5]]}))
        rc = main(["render", graph_file(TRIANGLE), "--guards", str(guards),
                   "-o", str(tmp_path / "x.svg")])
        assert rc == 2


class TestReport:
    def test_csv_and_figures(self, tmp_path):
        out = tmp_path / "rep"
        rc = main(["report", "--family", "random_plane", "--size", "18",
                   "--count", "4", "-o", str(out)])
        assert rc == 0
        lines = (out / "report.csv").read_text().splitlines()
        assert len(lines) == 5
        assert lines[0].startswith("seed,n,m,")
        assert all(row.endswith("True") for row in lines[1:])
        assert (out / "guards_vs_n.svg").exists()
        assert (out / "size_histogram.svg").exists()


class TestUsage:
    def test_no_arguments(self, capsys):
        assert main([]) == 2

    def test_help_exits_zero(self, capsys):
        assert main(["--help"]) == 0
        assert "guard" in capsys.readouterr().out

    def test_missing_input_file(self, tmp_path):
        assert main(["stats", str(tmp_path / "absent.json")]) == 2

    def test_invalid_graph_document(self, tmp_path):
        p = tmp_path / "bad.json"
        p.write_text(json.dumps({"n": 2, "rotations": [[1], []]}))
        assert main(["stats", str(p)]) == 2
