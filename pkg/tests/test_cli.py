import csv
import io
import json
import os

import pytest

import run
from app import CommandLine
from app.host.host import Host
from app.models.errors import UsageError


def invoke(capsys, *argv: str) -> tuple[int, str, str]:
    code = run.main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


@pytest.fixture
def codebook_file(tmp_path, capsys):
    path = str(tmp_path / "book.fgcb")
    code, _, _ = invoke(
        capsys, "codebook", "gen", "--d", "2048", "--seed", "3",
        "--nodes", "16", "--edges", "8", "--unitary", "--out", path,
    )
    assert code == 0
    return path


class TestParsing:
    def test_flags_map_to_fields(self):
        args = CommandLine.parse_arguments(
            ["reconstruct", "--in", "g.emb", "--cb", "b.fgcb", "--threshold", "auto", "--vertices", "1,5"]
        )
        assert (args.command, args.input_path, args.codebook_path) == ("reconstruct", "g.emb", "b.fgcb")
        assert args.threshold == "auto"
        assert args.vertices == [1, 5]
        assert args.d is None and args.unitary is None

    def test_bad_usage_raises(self):
        with pytest.raises(UsageError):
            CommandLine.parse_arguments(["codebook"])
        with pytest.raises(UsageError):
            CommandLine.parse_arguments(["capacity", "--n", "1,x"])

    def test_bad_usage_exit_code(self, capsys):
        code, _, err = invoke(capsys, "encode", "sideways")
        assert code == 1
        assert "foge-error kind=usage code=1" in err


class TestCodebookCommand:
    def test_gen_then_inspect(self, codebook_file, capsys):
        code, out, _ = invoke(capsys, "codebook", "inspect", "--in", codebook_file)
        document = json.loads(out)
        assert code == 0
        assert (document["d"], document["seed"], document["nodes"], document["edge_ids"]) == (2048, 3, 16, 8)
        assert document["unitary"] is True
        assert len(document["fingerprint"]) == 64
        assert document["config"]["command"] == "codebook"

    def test_inspect_takes_a_positional_path(self, codebook_file, capsys):
        code, out, _ = invoke(capsys, "codebook", "inspect", codebook_file)
        assert code == 0
        assert json.loads(out)["d"] == 2048

    def test_positional_and_flag_disagree(self):
        with pytest.raises(UsageError):
            CommandLine.parse_arguments(["codebook", "inspect", "a.fgcb", "--in", "b.fgcb"])

    def test_log_sidecar(self, codebook_file):
        assert os.path.exists(f"{codebook_file}.log")

    def test_gen_needs_an_output(self, capsys):
        code, _, err = invoke(capsys, "codebook", "gen", "--d", "64", "--nodes", "4")
        assert code == 1
        assert "--out" in err

    def test_import(self, tmp_path, capsys):
        vectors = tmp_path / "vectors.csv"
        vectors.write_text("key,dim=4\nALA,1,0,0,0\nGLY,0,1,0,0\n", encoding="utf-8")
        out_path = str(tmp_path / "imported.fgcb")
        code, out, _ = invoke(
            capsys, "codebook", "import", "--in", str(vectors), "--nodes", "4", "--edges", "1", "--out", out_path,
        )
        assert code == 0
        assert json.loads(out)["attributes"] == ["ALA", "GLY"]
        assert json.loads(out)["d"] == 4


class TestEncodeAndReconstruct:
    def test_triangle_roundtrip(self, codebook_file, resource_path, tmp_path, capsys):
        emb = str(tmp_path / "k3.emb")
        code, out, _ = invoke(capsys, "encode", "graph", "--cb", codebook_file, "--in", resource_path("k3.edges"), "--out", emb)
        assert code == 0
        assert json.loads(out)["n_declared"] == 3

        scores = str(tmp_path / "scores.csv")
        code, out, _ = invoke(capsys, "reconstruct", "--cb", codebook_file, "--in", emb, "--csv", scores)
        document = json.loads(out)
        assert code == 0
        assert document["recovered_n"] == 3
        assert document["edges"] == [[1, 2], [1, 3], [2, 3]]
        assert document["clamped"] is False
        with open(scores, encoding="utf-8") as file:
            rows = list(csv.DictReader(file))
        assert [row["accepted"] for row in rows] == ["true", "true", "true"]

    def test_encoding_is_idempotent(self, codebook_file, resource_path, tmp_path, capsys):
        first, second = tmp_path / "a.emb", tmp_path / "b.emb"
        for path in (first, second):
            code, _, _ = invoke(capsys, "encode", "graph", "--cb", codebook_file, "--in", resource_path("k3.edges"), "--out", str(path))
            assert code == 0
        assert first.read_bytes() == second.read_bytes()

    def test_keyed_hypergraph(self, codebook_file, resource_path, tmp_path, capsys):
        emb = str(tmp_path / "h.emb")
        code, _, _ = invoke(capsys, "encode", "hypergraph", "--cb", codebook_file, "--in", resource_path("icl_hypergraph.json"), "--out", emb)
        assert code == 0
        code, out, _ = invoke(capsys, "reconstruct", "--cb", codebook_file, "--in", emb)
        document = json.loads(out)
        assert document["recovered_n"] == 9
        assert [entry["members"] for entry in document["hyperedges"]] == [[2, 3, 6], [1, 4, 5, 7], [1, 2], [3, 5, 7, 8]]

    def test_neighborhood_with_global_labels(self, codebook_file, tmp_path, capsys):
        star = tmp_path / "star.edges"
        star.write_text("n=6\n1 2\n1 3\n1 4\n1 5\n1 6\n", encoding="utf-8")
        emb = str(tmp_path / "nb.emb")
        code, out, _ = invoke(capsys, "encode", "neighborhood", "--vertex", "4", "--cb", codebook_file, "--in", str(star), "--out", emb)
        assert code == 0
        assert json.loads(out)["mode"] == "neighborhood"
        code, out, _ = invoke(capsys, "reconstruct", "--cb", codebook_file, "--in", emb, "--vertices", "1,4")
        assert json.loads(out)["edges"] == [[1, 4]]

    def test_fingerprint_mismatch(self, codebook_file, resource_path, tmp_path, capsys):
        emb = str(tmp_path / "k3.emb")
        invoke(capsys, "encode", "graph", "--cb", codebook_file, "--in", resource_path("k3.edges"), "--out", emb)
        other = str(tmp_path / "other.fgcb")
        invoke(capsys, "codebook", "gen", "--d", "2048", "--seed", "4", "--nodes", "16", "--edges", "8", "--out", other)
        code, out, err = invoke(capsys, "reconstruct", "--cb", other, "--in", emb)
        assert code == 2
        assert out == ""
        assert "foge-error kind=io code=2" in err

    def test_corrupted_mode_byte(self, codebook_file, resource_path, tmp_path, capsys):
        emb = tmp_path / "k3.emb"
        invoke(capsys, "encode", "graph", "--cb", codebook_file, "--in", resource_path("k3.edges"), "--out", str(emb))
        data = bytearray(emb.read_bytes())
        data[6] = 42
        emb.write_bytes(bytes(data))
        code, out, err = invoke(capsys, "reconstruct", "--cb", codebook_file, "--in", str(emb))
        assert code == 2
        assert out == ""
        assert "foge-error kind=io code=2" in err

    def test_missing_input(self, codebook_file, tmp_path, capsys):
        code, _, err = invoke(capsys, "encode", "graph", "--cb", codebook_file, "--in", str(tmp_path / "nope.edges"), "--out", str(tmp_path / "x.emb"))
        assert code == 2
        assert "kind=io" in err

    def test_too_many_vertices(self, codebook_file, tmp_path, capsys):
        big = tmp_path / "big.edges"
        big.write_text("n=40\n1 40\n", encoding="utf-8")
        code, _, err = invoke(capsys, "encode", "graph", "--cb", codebook_file, "--in", str(big), "--out", str(tmp_path / "x.emb"))
        assert code == 3
        assert "kind=validation code=3" in err


class TestExperimentCommands:
    def test_capacity_csv(self, capsys):
        code, out, _ = invoke(capsys, "capacity", "--d", "512", "--n", "1,5", "--trials", "2", "--seed", "1")
        rows = list(csv.DictReader(io.StringIO(out)))
        assert code == 0
        assert [(row["n"], row["trial"]) for row in rows] == [("1", "0"), ("1", "1"), ("5", "0"), ("5", "1")]
        assert all(row["separation"] == "true" for row in rows[:2])

    def test_unitary_capacity_separates_ten_pairs(self, capsys):
        code, out, _ = invoke(capsys, "capacity", "--d", "4096", "--unitary", "--n", "10", "--trials", "3", "--seed", "1")
        rows = list(csv.DictReader(io.StringIO(out)))
        assert code == 0
        assert [row["separation"] for row in rows] == ["true", "true", "true"]

    def test_dirac_check(self, resource_path, capsys):
        code, out, _ = invoke(capsys, "dirac-check", "--in", resource_path("k3.edges"))
        document = json.loads(out)
        assert code == 0
        assert document["dirac_residual"] < 1e-8
        assert document["zero_eigenvalues"] == document["components"] == 1

    def test_probe_metrics_row(self, tmp_path, capsys):
        out_path = str(tmp_path / "metrics.csv")
        code, _, _ = invoke(
            capsys, "probe", "--task", "num_nodes", "--d", "256", "--size", "60",
            "--nodes", "16", "--edges", "8", "--out", out_path,
        )
        assert code == 0
        with open(out_path, encoding="utf-8") as file:
            rows = list(csv.DictReader(file))
        assert len(rows) == 1
        assert (rows[0]["task"], rows[0]["d"], rows[0]["model"], rows[0]["metric_name"]) == ("num_nodes", "256", "ridge", "mse")

    def test_dim_sweep(self, capsys):
        code, out, _ = invoke(
            capsys, "dim-sweep", "--task", "has_cycle", "--family", "tree", "--dims", "64,128",
            "--size", "40", "--nodes", "16", "--edges", "8",
        )
        rows = list(csv.DictReader(io.StringIO(out)))
        assert code == 0
        assert [row["d"] for row in rows] == ["64", "128"]
        assert max(float(row["relative_metric"]) for row in rows) == 1.0

    def test_invalid_generator_range(self, capsys):
        code, _, err = invoke(capsys, "probe", "--task", "num_nodes", "--n-min", "9", "--n-max", "3", "--d", "64", "--nodes", "16")
        assert code == 3
        assert "kind=validation" in err


class TestHost:
    def test_handlers_are_discovered(self):
        host = Host(CommandLine.parse_arguments(["dirac-check", "--in", "x"]))
        commands = sorted(handler.command for handler in host.handlers)
        assert commands == ["capacity", "codebook", "dim-sweep", "dirac-check", "encode", "probe", "reconstruct"]
