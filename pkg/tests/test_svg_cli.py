import json

import pytest

from konvex.builder import ConstructionParams, build_curve
from konvex.cli import main
from konvex.errors import PreconditionError
from konvex.formats import serialize_polygon, serialize_polyline
from konvex.geometry import ConvexPolygon, Line, Point, Polyline
from konvex.svg import SceneDocument, emit_svg, load_scene, render_svg

SQUARE = ConvexPolygon((Point(0, 0), Point(1, 0), Point(1, 1), Point(0, 1)))


class TestSvg:
    def test_empty_scene_rejected(self):
        with pytest.raises(PreconditionError):
            render_svg(SceneDocument())

    def test_single_line_scene(self):
        scene = SceneDocument(lines=[("cut", Line(0, 1, "0.5"))])
        out = render_svg(scene)
        assert out.startswith("<?xml")
        assert "<line " in out

    def test_deterministic_output(self, tmp_path):
        result = build_curve(SQUARE, ConstructionParams(r=5, eps=0.5, m=64, seed=3))
        scene = SceneDocument(
            body=SQUARE,
            curves=[("extremal", result.curve)],
            lines=[("witness", result.multiplicity.witness)],
            annotations=[(0.05, 1.05, "r=5")],
        )
        a = tmp_path / "a.svg"
        b = tmp_path / "b.svg"
        emit_svg(scene, a)
        emit_svg(scene, b)
        assert a.read_bytes() == b.read_bytes()
        text = a.read_text()
        assert "<polygon" in text and "<polyline" in text and "<text" in text

    def test_duplicate_labels_rejected(self):
        with pytest.raises(PreconditionError):
            SceneDocument(
                lines=[("x", Line(0, 1, 0)), ("x", Line(1, 0, 0))],
            )

    def test_scene_loading(self, tmp_path):
        (tmp_path / "body.txt").write_text(serialize_polygon(SQUARE))
        curve = Polyline((Point(0, 0), Point("0.5", "0.5"), Point(1, 0)))
        (tmp_path / "curve.txt").write_text(serialize_polyline(curve))
        scene_doc = {
            "body": "body.txt",
            "curves": [{"file": "curve.txt", "label": "walk"}],
            "lines": [{"nx": "0", "ny": "1", "c": "0.25", "label": "cut"}],
            "annotations": [{"at": [0.5, 1.1], "text": "demo"}],
        }
        scene_path = tmp_path / "scene.json"
        scene_path.write_text(json.dumps(scene_doc))
        scene = load_scene(scene_path)
        assert scene.body == SQUARE
        assert scene.curves[0][1] == curve
        out = tmp_path / "out.svg"
        emit_svg(scene, out)
        assert out.read_text().startswith("<?xml")


@pytest.fixture
def square_file(tmp_path):
    path = tmp_path / "square.txt"
    path.write_text(serialize_polygon(SQUARE))
    return str(path)


@pytest.fixture
def ring_file(tmp_path):
    path = tmp_path / "ring.txt"
    path.write_text(serialize_polyline(SQUARE.as_polyline()))
    return str(path)


class TestCli:
    def test_bound(self, square_file, capsys):
        assert main(["bound", square_file, "3"]) == 0
        out = capsys.readouterr().out
        assert "5.414213562" in out

    def test_bound_json(self, square_file, capsys):
        assert main(["bound", square_file, "2", "--json"]) == 0
        doc = json.loads(capsys.readouterr().out)
        assert doc["s"] == pytest.approx(4.0)

    def test_bound_rejects_r1(self, square_file, capsys):
        assert main(["bound", square_file, "1"]) == 1

    def test_analyze(self, ring_file, capsys):
        assert main(["analyze", ring_file, "--json"]) == 0
        doc = json.loads(capsys.readouterr().out)
        assert doc["count"] == 2

    def test_stab_and_verify(self, tmp_path, square_file, capsys):
        poly = Polyline(
            (
                Point(0, 0),
                Point(1, 0),
                Point(1, 1),
                Point(0, 1),
                Point(0, 0),
                Point("0.1", "0.05"),
            )
        )
        poly_path = tmp_path / "long.txt"
        poly_path.write_text(serialize_polyline(poly))
        assert main(["stab", str(poly_path), "2", square_file, "--json"]) == 0
        doc = json.loads(capsys.readouterr().out)
        assert doc["report"]["count"] >= 3
        assert main(["verify", str(poly_path), square_file, "2"]) == 0
        assert "stabbing line" in capsys.readouterr().out

    def test_verify_within_bound(self, ring_file, square_file, capsys):
        assert main(["verify", ring_file, square_file, "2"]) == 0
        assert "within bound" in capsys.readouterr().out

    def test_stab_bound_not_exceeded_exit_1(self, ring_file, square_file, capsys):
        assert main(["stab", ring_file, "2", square_file]) == 1
        assert "bound not exceeded" in capsys.readouterr().err

    def test_construct_writes_curve_and_sidecar(self, tmp_path, square_file, capsys):
        out = tmp_path / "curve"
        code = main(
            [
                "construct",
                square_file,
                "2",
                "--eps",
                "0.3",
                "--m",
                "64",
                "--seed",
                "5",
                "--out",
                str(out),
                "--json",
            ]
        )
        assert code == 0
        doc = json.loads(capsys.readouterr().out)
        assert doc["multiplicity"]["count"] <= 2
        from konvex.formats import parse_polyline

        curve = parse_polyline((tmp_path / "curve.txt").read_text())
        sidecar = json.loads((tmp_path / "curve.json").read_text())
        assert sidecar["achieved_length"] >= sidecar["target"] - 0.3
        assert len(curve) == sidecar["vertices"]

    def test_falsify(self, square_file, capsys):
        assert main(["falsify", square_file, "2", "--trials", "30", "--seed", "2"]) == 0
        assert "violations = 0" in capsys.readouterr().out

    def test_prop1(self, ring_file, capsys):
        assert main(["prop1", ring_file]) == 0
        out = capsys.readouterr().out
        assert "convex = True" in out and "max multiplicity = 2" in out

    def test_svg_command(self, tmp_path, square_file, capsys):
        scene = {"body": "square.txt", "lines": [{"nx": "1", "ny": "0", "c": "0.5"}]}
        scene_path = tmp_path / "scene.json"
        scene_path.write_text(json.dumps(scene))
        out = tmp_path / "fig.svg"
        assert main(["svg", str(scene_path), "--out", str(out)]) == 0
        assert out.exists()

    def test_parse_error_exit_1(self, tmp_path, capsys):
        bad = tmp_path / "bad.txt"
        bad.write_text("nonsense\n")
        assert main(["analyze", str(bad)]) == 1

    def test_missing_file_exit_1(self, capsys):
        assert main(["bound", "no-such-file.txt", "2"]) == 1

    def test_env_seed(self, square_file, monkeypatch, capsys):
        monkeypatch.setenv("KONVEX_SEED", "123")
        assert main(["falsify", square_file, "2", "--trials", "5", "--json"]) == 0
        doc = json.loads(capsys.readouterr().out)
        assert doc["evidence"]["seed"] == 123
