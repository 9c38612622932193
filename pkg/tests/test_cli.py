import subprocess
import sys
from pathlib import Path

import pytest

from gridtree import Placement, SpanningTree, hypothesis_flow
from gridtree.cli import main
from gridtree.fileio import (
    format_observation,
    format_placement,
    write_loads,
    write_placement,
)

DATA = Path(__file__).parent / "data"


@pytest.fixture()
def island_files(island, tmp_path):
    gpath = tmp_path / "island.graph"
    lpath = tmp_path / "island.loads"
    assert main(["fixture", "--out", str(gpath), "--loads", str(lpath)]) == 0
    return gpath, lpath


class TestHelpGolden:
    @pytest.mark.parametrize(
        "name", ["main", "fixture", "trees", "placements", "check-placement",
                 "detect", "sweep", "rank-placements"],
    )
    def test_help_matches_golden(self, name, capsys):
        argv = ["--help"] if name == "main" else [name, "--help"]
        assert main(argv) == 0
        out = capsys.readouterr().out
        assert out == (DATA / f"help_{name}.txt").read_text()

    def test_every_documented_flag_appears(self):
        text = "".join(
            (DATA / f"help_{n}.txt").read_text()
            for n in ["trees", "placements", "check-placement", "detect", "sweep",
                      "rank-placements", "fixture"]
        )
        for flag in ["--graph", "--loads", "--placement", "--obs", "--sigma",
                     "--sigma-grid", "--trials", "--seed", "--workers", "--out",
                     "--require-tau"]:
            assert flag in text


class TestUsageErrors:
    def test_unknown_flag_exits_1(self, capsys):
        assert main(["trees", "--graph", "x", "--bogus"]) == 1

    def test_missing_required_flag_exits_1(self, capsys):
        assert main(["trees"]) == 1

    def test_missing_file_exits_1(self, capsys):
        assert main(["trees", "--graph", "/nonexistent/net.graph"]) == 1
        assert "missing file" in capsys.readouterr().err

    def test_parse_error_reports_line(self, tmp_path, capsys):
        bad = tmp_path / "bad.graph"
        bad.write_text("vertices: a b\nedge 0 a z\n")
        assert main(["trees", "--graph", str(bad)]) == 1
        assert "gridtree:" in capsys.readouterr().err


class TestTreesAndPlacements:
    def test_restricted_tree_listing_has_44_lines(self, island_files, tmp_path):
        gpath, _ = island_files
        out = tmp_path / "trees.txt"
        assert main(["trees", "--graph", str(gpath), "--require-tau", "--out", str(out)]) == 0
        lines = out.read_text().splitlines()
        assert len(lines) == 44
        assert all(line.split()[:4] == ["0", "1", "2", "3"] for line in lines)

    def test_placement_listing_avoids_root_edges(self, island_files, tmp_path):
        gpath, _ = island_files
        out = tmp_path / "placements.txt"
        assert main(["placements", "--graph", str(gpath), "--require-tau", "--out", str(out)]) == 0
        lines = out.read_text().splitlines()
        assert len(lines) == 44
        assert all(set(line.split()).isdisjoint({"0", "1", "2", "3"}) for line in lines)


class TestCheckPlacement:
    def test_valid_placement(self, island, island_files, tmp_path, capsys):
        gpath, _ = island_files
        ppath = tmp_path / "p.place"
        ppath.write_text(format_placement(Placement((6, 7, 10, 12))))
        assert main(["check-placement", "--graph", str(gpath), "--placement", str(ppath)]) == 0
        assert capsys.readouterr().out.strip() == "valid"

    def test_invalid_placement(self, island_files, tmp_path, capsys):
        gpath, _ = island_files
        ppath = tmp_path / "p.place"
        ppath.write_text(format_placement(Placement((0, 1, 2, 3))))
        assert main(["check-placement", "--graph", str(gpath), "--placement", str(ppath)]) == 2
        assert capsys.readouterr().out.strip() == "invalid"


class TestDetect:
    def test_map_with_exact_observation_prints_true_tree(
        self, island, island_files, tmp_path, capsys
    ):
        gpath, lpath = island_files
        pl = Placement((6, 7, 10, 12))
        tree = SpanningTree(frozenset({0, 1, 2, 3, 4, 6, 9, 10, 12}))
        s = hypothesis_flow(island.graph, tree, pl, island.load_model.means)
        ppath, opath = tmp_path / "p.place", tmp_path / "o.obs"
        ppath.write_text(format_placement(pl))
        opath.write_text(format_observation(s))
        rc = main([
            "detect", "--graph", str(gpath), "--loads", str(lpath),
            "--placement", str(ppath), "--obs", str(opath),
            "--method", "map", "--require-tau",
        ])
        assert rc == 0
        assert capsys.readouterr().out.strip() == tree.label()

    def test_csv_row_written(self, island, island_files, tmp_path, capsys):
        gpath, lpath = island_files
        pl = Placement((6, 7, 10, 12))
        tree = SpanningTree(frozenset({0, 1, 2, 3, 4, 6, 9, 10, 12}))
        s = hypothesis_flow(island.graph, tree, pl, island.load_model.means)
        ppath, opath = tmp_path / "p.place", tmp_path / "o.obs"
        ppath.write_text(format_placement(pl))
        opath.write_text(format_observation(s))
        out = tmp_path / "res.csv"
        rc = main([
            "detect", "--graph", str(gpath), "--loads", str(lpath),
            "--placement", str(ppath), "--obs", str(opath),
            "--method", "deterministic", "--require-tau", "--out", str(out),
        ])
        assert rc == 0
        lines = out.read_text().splitlines()
        assert lines[0] == "method,tree,log_likelihood,iterations,converged"
        assert lines[1].startswith("deterministic,")

    def test_inconsistent_observation_exits_2(self, island, island_files, tmp_path, capsys):
        gpath, lpath = island_files
        pl = Placement((6, 7, 10, 12))
        ppath, opath = tmp_path / "p.place", tmp_path / "o.obs"
        ppath.write_text(format_placement(pl))
        opath.write_text(format_observation([10.0, -3.0, 2.5, 0.7]))
        rc = main([
            "detect", "--graph", str(gpath), "--loads", str(lpath),
            "--placement", str(ppath), "--obs", str(opath),
            "--method", "deterministic", "--require-tau",
        ])
        assert rc == 2


class TestSweepAndRanking:
    def test_sweep_reproducible_across_workers(self, island, island_files, tmp_path):
        gpath, lpath = island_files
        ppath = tmp_path / "p.place"
        ppath.write_text(format_placement(Placement((6, 7, 10, 12))))
        outs = []
        for workers, name in [(1, "a.csv"), (1, "b.csv"), (2, "c.csv")]:
            out = tmp_path / name
            rc = main([
                "sweep", "--graph", str(gpath), "--loads", str(lpath),
                "--placement", str(ppath), "--sigma-grid", "0.1,0.3",
                "--trials", "5", "--seed", "9", "--method", "map,fmst",
                "--require-tau", "--workers", str(workers), "--out", str(out),
            ])
            assert rc == 0
            outs.append(out.read_bytes())
        assert outs[0] == outs[1] == outs[2]

    def test_sweep_requires_sigma(self, island_files, tmp_path, capsys):
        gpath, lpath = island_files
        ppath = tmp_path / "p.place"
        ppath.write_text(format_placement(Placement((6, 7, 10, 12))))
        rc = main([
            "sweep", "--graph", str(gpath), "--loads", str(lpath),
            "--placement", str(ppath), "--trials", "2",
            "--out", str(tmp_path / "x.csv"),
        ])
        assert rc == 2

    def test_rank_placements_smoke(self, island_files, tmp_path):
        gpath, lpath = island_files
        out = tmp_path / "rank.csv"
        rc = main([
            "rank-placements", "--graph", str(gpath), "--loads", str(lpath),
            "--sigma", "0.0", "--trials", "1", "--seed", "0",
            "--require-tau", "--out", str(out),
        ])
        assert rc == 0
        lines = out.read_text().splitlines()
        assert lines[0] == "placement,g1,g2,rank"
        assert len(lines) == 45

    def test_rank_placements_needs_exactly_one_noise_flag(self, island_files, tmp_path):
        gpath, lpath = island_files
        rc = main([
            "rank-placements", "--graph", str(gpath), "--loads", str(lpath),
            "--trials", "1", "--out", str(tmp_path / "r.csv"),
        ])
        assert rc == 2


def test_console_module_smoke(tmp_path):
    gpath = tmp_path / "island.graph"
    res = subprocess.run(
        [sys.executable, "-m", "gridtree", "fixture", "--out", str(gpath)],
        capture_output=True, text=True,
    )
    assert res.returncode == 0
    res = subprocess.run(
        [sys.executable, "-m", "gridtree", "trees", "--graph", str(gpath), "--require-tau"],
        capture_output=True, text=True,
    )
    assert res.returncode == 0
    assert len(res.stdout.splitlines()) == 44
