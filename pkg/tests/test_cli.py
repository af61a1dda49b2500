import numpy as np

import gbfpum.cli
from gbfpum.cli import main
from gbfpum.clustering import import_partition
from gbfpum.errors import SolveFailureError
from gbfpum.gbf import GBFSpec, SampleSet, save_sample_set
from gbfpum.graph import LaplacianKind, laplacian, load_graph
from gbfpum.pum import enlarge_cover, pou_weights, pum_interpolate
from gbfpum.spectral import eigendecompose, leading_sum_signal, load_signal


def run(*args):
    return main([str(a) for a in args])


class TestGen:
    def test_grid(self, tmp_path, capsys):
        assert run("gen", "--grid", "4x5", "--out", tmp_path / "g") == 0
        g = load_graph(tmp_path / "g.edges", tmp_path / "g.coords")
        assert g.n == 20 and g.m == 4 * 4 + 3 * 5
        assert "g.edges" in capsys.readouterr().out

    def test_geometric_deterministic(self, tmp_path):
        run("gen", "--geometric", 30, 0.3, "--seed", 4, "--out", tmp_path / "a")
        run("gen", "--geometric", 30, 0.3, "--seed", 4, "--out", tmp_path / "b")
        assert (tmp_path / "a.edges").read_bytes() == (
            tmp_path / "b.edges"
        ).read_bytes()
        assert (tmp_path / "a.coords").read_bytes() == (
            tmp_path / "b.coords"
        ).read_bytes()

    def test_usage_both_sources(self, tmp_path):
        code = run(
            "gen", "--grid", "3x3", "--geometric", 4, 0.5,
            "--out", tmp_path / "g",
        )
        assert code == 1

    def test_usage_no_source(self, tmp_path):
        assert run("gen", "--out", tmp_path / "g") == 1

    def test_usage_bad_grid_spec(self, tmp_path):
        assert run("gen", "--grid", "4by5", "--out", tmp_path / "g") == 1

    def test_usage_nonpositive_radius(self, tmp_path):
        assert run(
            "gen", "--geometric", 10, -0.5, "--out", tmp_path / "g"
        ) == 1


class TestCluster:
    def test_triangles(self, tmp_path, capsys, two_triangles):
        from gbfpum.graph import save_graph

        save_graph(two_triangles, tmp_path / "g.edges", tmp_path / "g.coords")
        code = run(
            "cluster", "--graph", tmp_path / "g.edges", "--method", "greedy",
            "--seed", 0, "--out", tmp_path / "p.txt",
        )
        assert code == 0
        assert "J=2 MOD=0.5000" in capsys.readouterr().out
        p = import_partition(tmp_path / "p.txt", 6)
        assert p.n_communities == 2

    def test_filtered_needs_coords(self, tmp_path, two_triangles):
        from gbfpum.graph import save_graph

        save_graph(two_triangles, tmp_path / "g.edges")
        code = run(
            "cluster", "--graph", tmp_path / "g.edges", "--method", "filtered",
            "--out", tmp_path / "p.txt",
        )
        assert code == 2

    def test_malformed_graph_is_data_error(self, tmp_path):
        (tmp_path / "g.edges").write_text("0 1 junk\n")
        code = run(
            "cluster", "--graph", tmp_path / "g.edges", "--method", "greedy",
            "--out", tmp_path / "p.txt",
        )
        assert code == 2


class TestInterpolateRoundTrip:
    def test_pipeline_matches_in_memory(self, tmp_path):
        # gen -> cluster -> interpolate over files only
        assert run("gen", "--grid", "7x7", "--out", tmp_path / "g") == 0
        assert run(
            "cluster", "--graph", tmp_path / "g.edges",
            "--coords", tmp_path / "g.coords", "--method", "greedy",
            "--seed", 1, "--out", tmp_path / "p.txt",
        ) == 0

        g = load_graph(tmp_path / "g.edges", tmp_path / "g.coords")
        basis = eigendecompose(laplacian(g, LaplacianKind.NORMALIZED))
        x = leading_sum_signal(basis, 10)
        nodes = np.arange(0, g.n, 3)
        save_sample_set(
            SampleSet(nodes=nodes, values=x[nodes]), tmp_path / "w.txt"
        )

        assert run(
            "interpolate", "--graph", tmp_path / "g.edges",
            "--partition", tmp_path / "p.txt", "--samples", tmp_path / "w.txt",
            "--R", 2, "--eps", 0.001, "--s", 2, "--out", tmp_path / "xstar.sig",
        ) == 0

        emitted = load_signal(tmp_path / "xstar.sig")
        part = import_partition(tmp_path / "p.txt", g.n)
        cover = enlarge_cover(g, part, 2)
        pou = pou_weights(g, cover)
        expected = pum_interpolate(
            g, cover, pou, GBFSpec(0.001, 2.0),
            SampleSet(nodes=nodes, values=x[nodes]),
        )
        assert np.array_equal(emitted, expected)

    def test_negative_radius_is_usage_error(self, tmp_path):
        assert run(
            "interpolate", "--graph", __file__, "--partition", __file__,
            "--samples", __file__, "--R", -1, "--eps", 0.001, "--s", 2,
            "--out", tmp_path / "x.sig",
        ) == 1

    def test_out_of_range_sample_is_data_error(self, tmp_path):
        (tmp_path / "g.edges").write_text("0 1\n1 2\n")
        (tmp_path / "p.txt").write_text("0 0\n1 0\n2 1\n")
        (tmp_path / "w.txt").write_text("99 1.0\n")
        code = run(
            "interpolate", "--graph", tmp_path / "g.edges",
            "--partition", tmp_path / "p.txt",
            "--samples", tmp_path / "w.txt",
            "--R", 1, "--eps", 0.001, "--s", 2,
            "--out", tmp_path / "x.sig",
        )
        assert code == 2


class TestExperiment:
    def config(self, tmp_path, out="report.csv"):
        path = tmp_path / "exp.cfg"
        path.write_text(
            "generator = grid\nrows = 6\ncols = 6\n"
            "method = greedy,spectral\njmin = 2\njmax = 4\n"
            f"N = 12\nR = 1\neps = 0.001\ns = 2\nseed = 0\n"
            f"out = {tmp_path / out}\n"
        )
        return path

    def test_writes_rows_in_config_order(self, tmp_path):
        assert run("experiment", "--config", self.config(tmp_path)) == 0
        lines = (tmp_path / "report.csv").read_text().splitlines()
        assert lines[0] == "method,J,modularity,rmae,rrmse,wall_time_ms"
        assert lines[1].startswith("greedy,")
        assert lines[2].startswith("spectral,")

    def test_byte_identical_reruns(self, tmp_path):
        cfg = self.config(tmp_path)
        run("experiment", "--config", cfg)
        first = (tmp_path / "report.csv").read_bytes()
        run("experiment", "--config", cfg)
        assert (tmp_path / "report.csv").read_bytes() == first

    def test_missing_out_is_data_error(self, tmp_path):
        path = tmp_path / "exp.cfg"
        path.write_text(
            "generator = grid\nrows = 3\ncols = 3\n"
            "method = greedy\nN = 4\nR = 1\neps = 0.001\ns = 2\n"
        )
        assert run("experiment", "--config", path) == 2

    def test_malformed_config_is_data_error(self, tmp_path):
        path = tmp_path / "exp.cfg"
        path.write_text("this is not a config\n")
        assert run("experiment", "--config", path) == 2

    def test_numerical_failure_exit_code(self, tmp_path, monkeypatch):
        def boom(cfg):
            raise SolveFailureError("subdomain 3: singular")

        monkeypatch.setattr(gbfpum.cli.harness, "run_experiment", boom)
        assert run("experiment", "--config", self.config(tmp_path)) == 3

    def test_unknown_subcommand_is_usage_error(self):
        assert run("frobnicate") == 1

    def test_help_exits_clean(self, capsys):
        assert run("--help") == 0
        assert "Graph signal interpolation" in capsys.readouterr().out
