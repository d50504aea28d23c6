import json

import pytest

from basicwalk import cli
from basicwalk.graphs import Complete, Grid, HexLattice, LatticeZ, Star
from basicwalk.labelings import FixtureTable


class TestSpecParsers:
    def test_graph_specs(self):
        assert cli.parse_graph_spec("z2") == LatticeZ(2)
        assert cli.parse_graph_spec("z3") == LatticeZ(3)
        assert cli.parse_graph_spec("hex") == HexLattice()
        assert cli.parse_graph_spec("k10") == Complete(10)
        assert cli.parse_graph_spec("complete:5") == Complete(5)
        assert cli.parse_graph_spec("star:8") == Star(8)
        assert cli.parse_graph_spec("grid:3x7") == Grid(3, 7)
        assert cli.parse_graph_spec("tree").name == "tree"

    def test_graph_file_spec(self, tmp_path):
        path = tmp_path / "tri.adj"
        path.write_text("n 3\n0: 1 2\n1: 0 2\n2: 0 1\n")
        g = cli.parse_graph_spec(f"file:{path}")
        assert g.vertex_count() == 3

    def test_bad_graph_spec(self):
        with pytest.raises(cli.UsageError):
            cli.parse_graph_spec("dodecahedron")
        with pytest.raises(cli.UsageError):
            cli.parse_graph_spec("grid:3")

    def test_labeling_specs(self, tmp_path):
        assert cli.parse_labeling_spec("lazy") == "lazy"
        assert cli.parse_labeling_spec("staircase") == "staircase"
        path = tmp_path / "fix.ports"
        path.write_text("0: 1->1\n")
        assert isinstance(cli.parse_labeling_spec(f"fixture:{path}"),
                          FixtureTable)
        with pytest.raises(cli.UsageError):
            cli.parse_labeling_spec("nope")

    def test_vertex_parser(self):
        g = LatticeZ(2)
        assert cli.parse_vertex("origin", g) == (0, 0)
        assert cli.parse_vertex("3,-2", g) == (3, -2)
        assert cli.parse_vertex("(1, 4)", g) == (1, 4)
        assert cli.parse_vertex("5", Complete(10)) == 5


class TestWalkCommand:
    def test_basic(self, capsys):
        rc = cli.main(["walk", "--graph", "z2", "--labeling", "lazy",
                       "--seed", "7", "--budget", "1000000"])
        assert rc == 0
        out = capsys.readouterr().out
        assert "cycled" in out

    def test_trace_and_summary(self, tmp_path, capsys):
        trace = tmp_path / "trace.csv"
        summary = tmp_path / "walk.json"
        rc = cli.main(["walk", "--graph", "star:8", "--seed", "1",
                       "--budget", "100", "--trace", str(trace),
                       "--out", str(summary)])
        assert rc == 0
        assert trace.read_text().startswith(
            "step,vertex,port,slot,distance,new_label")
        data = json.loads(summary.read_text())
        assert data["outcome"] == "cycled"
        assert data["period"] == 2
        assert data["config"]["seed"] == 1

    def test_seed_required_for_random(self, capsys):
        rc = cli.main(["walk", "--graph", "z2", "--labeling", "lazy"])
        assert rc == 1
        assert "seed" in capsys.readouterr().err

    def test_deterministic_needs_no_seed(self, capsys):
        rc = cli.main(["walk", "--graph", "z1", "--labeling", "alternating",
                       "--budget", "50"])
        assert rc == 0

    def test_mismatched_scheme_is_runtime_error(self, capsys):
        rc = cli.main(["walk", "--graph", "z2", "--labeling", "alternating",
                       "--budget", "50"])
        assert rc == 2

    def test_matches_library_call(self, capsys):
        from basicwalk.labelings import PortLabeling
        from basicwalk.rng import RandomStream
        from basicwalk.walker import run_basic_walk
        rc = cli.main(["walk", "--graph", "k6", "--seed", "42",
                       "--budget", "100"])
        assert rc == 0
        line = capsys.readouterr().out
        g = Complete(6)
        out = run_basic_walk(g, PortLabeling(g), budget=100,
                             stream=RandomStream(42))
        assert f"tail={out.tail} period={out.period}" in line


class TestBoundCommand:
    def test_t_lattice(self, capsys):
        rc = cli.main(["bound", "--trap", "t-lattice", "--dim", "2"])
        assert rc == 0
        data = json.loads(capsys.readouterr().out)
        assert data["probability"] == "1/192"
        assert data["straight_line_bound"] == 194.0
        assert data["spiral_bound"] == 36866.0

    def test_hex_spire(self, capsys):
        rc = cli.main(["bound", "--trap", "hex-spire"])
        assert rc == 0
        data = json.loads(capsys.readouterr().out)
        assert data["probability"] == "1/216"
        assert data["expected_shells"] == 216.0

    def test_straight_path(self, capsys):
        rc = cli.main(["bound", "--trap", "straight-path",
                       "--degree", "4", "--length", "3"])
        assert rc == 0
        assert json.loads(capsys.readouterr().out)["probability"] == "1/64"

    def test_star(self, capsys):
        rc = cli.main(["bound", "--trap", "star", "--degree", "4",
                       "--neighbor-degrees", "3,3,5"])
        assert rc == 0
        assert json.loads(capsys.readouterr().out)["probability"] == "1/180"

    def test_missing_args(self, capsys):
        assert cli.main(["bound", "--trap", "straight-path"]) == 1


class TestGraphCheckCommand:
    def test_ok(self, tmp_path, capsys):
        path = tmp_path / "tri.adj"
        path.write_text("n 3\n0: 1 2\n1: 0 2\n2: 0 1\n")
        assert cli.main(["graph", "check", str(path)]) == 0
        assert "vertices=3" in capsys.readouterr().out

    def test_invalid_file(self, tmp_path, capsys):
        path = tmp_path / "bad.adj"
        path.write_text("n 2\n0: 1\n1: 1\n")
        assert cli.main(["graph", "check", str(path)]) == 2

    def test_missing_file(self, capsys):
        assert cli.main(["graph", "check", "/nonexistent.adj"]) == 2


class TestExperimentCommand:
    def test_star_like_preset_via_zprocess(self, tmp_path, capsys):
        summary = tmp_path / "z.json"
        rc = cli.main(["experiment", "--preset", "zprocess", "--n", "3",
                       "--trials", "500", "--seed", "5",
                       "--summary", str(summary)])
        assert rc == 0
        data = json.loads(summary.read_text())
        assert data["brute_force"] == "4046/729"
        assert abs(data["exact"] - 4046 / 729) < 1e-9

    def test_occupancy_preset(self, tmp_path):
        summary = tmp_path / "o.json"
        rc = cli.main(["experiment", "--preset", "occupancy", "--n", "3",
                       "--trials", "400", "--seed", "6",
                       "--summary", str(summary)])
        assert rc == 0
        data = json.loads(summary.read_text())
        assert data["exact_fraction"] == "5/2"

    def test_kn_coverage_small(self, tmp_path, capsys):
        out = tmp_path / "rows.csv"
        summary = tmp_path / "s.json"
        rc = cli.main(["experiment", "--preset", "kn-coverage", "--n", "10",
                       "--trials", "50", "--seed", "4", "--out", str(out),
                       "--summary", str(summary)])
        assert rc == 0
        assert len(out.read_text().strip().splitlines()) == 51
        data = json.loads(summary.read_text())
        assert data["config"]["trials"] == 50
        assert "occupancy_exact" in data["reference"]

    def test_trap_frequency_small(self, tmp_path):
        summary = tmp_path / "t.json"
        rc = cli.main(["experiment", "--preset", "trap-frequency",
                       "--dim", "2", "--samples", "5000", "--seed", "2",
                       "--summary", str(summary)])
        assert rc == 0
        data = json.loads(summary.read_text())
        assert data["analytic"] == "1/192"

    def test_grid_tours_small(self, tmp_path):
        out = tmp_path / "g.csv"
        summary = tmp_path / "g.json"
        rc = cli.main(["experiment", "--preset", "grid-tours", "--k", "2",
                       "--n-values", "4,8", "--trials", "20", "--seed", "3",
                       "--out", str(out), "--summary", str(summary)])
        assert rc == 0
        data = json.loads(summary.read_text())
        assert len(data["table"]) == 2
        assert out.read_text().startswith("rows,cols,trials")

    def test_tree_escape_small(self, tmp_path):
        summary = tmp_path / "te.json"
        rc = cli.main(["experiment", "--preset", "tree-escape",
                       "--depth-cap", "3", "--trials", "500", "--seed", "8",
                       "--summary", str(summary)])
        assert rc == 0
        data = json.loads(summary.read_text())
        assert data["exact_truncated_product"] == "8/15"

    def test_seed_required(self, capsys):
        rc = cli.main(["experiment", "--preset", "zprocess", "--n", "3"])
        assert rc == 1

    def test_unknown_preset_usage_error(self, capsys):
        rc = cli.main(["experiment", "--preset", "nope", "--seed", "1"])
        assert rc == 1

    def test_csv_reruns_byte_identical(self, tmp_path):
        paths = [tmp_path / "a.csv", tmp_path / "b.csv"]
        for p in paths:
            rc = cli.main(["experiment", "--preset", "kn-coverage",
                           "--n", "8", "--trials", "40", "--seed", "12",
                           "--out", str(p)])
            assert rc == 0
        assert paths[0].read_bytes() == paths[1].read_bytes()


class TestConfigFile:
    def test_config_supplies_values(self, tmp_path, capsys):
        cfg = tmp_path / "cfg.json"
        cfg.write_text(json.dumps({"graph": "star:8", "seed": 1,
                                   "budget": 100}))
        rc = cli.main(["walk", "--config", str(cfg), "--graph", "star:8"])
        assert rc == 0
        assert "period=2" in capsys.readouterr().out

    def test_flags_override_config(self, tmp_path, capsys):
        cfg = tmp_path / "cfg.json"
        cfg.write_text(json.dumps({"n": 3, "trials": 100}))
        summary = tmp_path / "s.json"
        rc = cli.main(["experiment", "--preset", "zprocess", "--n", "2",
                       "--seed", "9", "--config", str(cfg),
                       "--summary", str(summary)])
        assert rc == 0
        data = json.loads(summary.read_text())
        assert data["n"] == 2           # flag wins
        assert data["trials"] == 100    # config fills the gap

    def test_unknown_config_key(self, tmp_path, capsys):
        cfg = tmp_path / "cfg.json"
        cfg.write_text(json.dumps({"bogus": 1}))
        rc = cli.main(["walk", "--config", str(cfg), "--graph", "z2",
                       "--seed", "1"])
        assert rc == 1

    def test_workers_env_default(self, tmp_path, monkeypatch):
        monkeypatch.setenv("BASICWALK_WORKERS", "2")
        rc = cli.main(["experiment", "--preset", "kn-coverage", "--n", "6",
                       "--trials", "20", "--seed", "2"])
        assert rc == 0


def test_fixture_half_coverage_walk(capsys):
    import pathlib
    fixture = pathlib.Path(__file__).parent / "data" / "k10_half.ports"
    rc = cli.main(["walk", "--graph", "k10",
                   "--labeling", f"fixture:{fixture}", "--budget", "200"])
    assert rc == 0
    assert "unique_vertices=5" in capsys.readouterr().out
