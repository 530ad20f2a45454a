"""End-to-end command line behavior, run in process except one real pipe."""

from __future__ import annotations

import io
import json
import subprocess
import sys

import pytest

import dsets as D
from dsets import Splitting
from dsets.cli import main


@pytest.fixture
def run(monkeypatch, capsys):
    def invoke(argv, stdin=""):
        monkeypatch.setattr("sys.stdin", io.StringIO(stdin))
        code = main(argv)
        captured = capsys.readouterr()
        return code, captured.out, captured.err

    return invoke


def _payload(out):
    return json.loads(out)


# ---------------------------------------------------------------------------
# check


def test_check_passes_flower(run, catalogue):
    code, out, err = run(["check", "-"], catalogue["FLW4"].dset.to_json())
    assert code == 0
    assert _payload(out)["core_pass"] is True
    assert "d1 pass" in err


def test_check_flags_broken_input(run):
    broken = D.DSet.build(4, [(0, 1, 2, 3), (0, 2, 1, 3)])
    code, out, _ = run(["check", "-"], broken.to_json())
    assert code == 1
    assert _payload(out)["core_pass"] is False


def test_check_rejects_malformed_json(run):
    code, out, _ = run(["check", "-"], "{this is not json")
    assert code == 2
    assert _payload(out)["error"]["kind"] == "input"


def test_max_n_guard(run, catalogue):
    code, out, _ = run(["check", "-", "--max-n", "10"], catalogue["FLW12"].dset.to_json())
    assert code == 2
    assert "exceeds" in _payload(out)["error"]["message"]


def test_quiet_silences_stderr(run, catalogue):
    _, _, err = run(["check", "-", "--quiet"], catalogue["FLW4"].dset.to_json())
    assert err == ""


# ---------------------------------------------------------------------------
# from-tree / to-tree


def test_from_tree_emits_leaf_relation(run, catalogue):
    code, out, _ = run(["from-tree", "-"], catalogue["CAT4"].tree.to_json())
    assert code == 0
    assert D.DSet.from_json(out).positives == catalogue["CAT4"].dset.positives


def test_to_tree_reconstructs(run, catalogue):
    code, out, _ = run(["to-tree", "-"], catalogue["FLW4"].dset.to_json())
    assert code == 0
    tree = D.LeafTree.from_json(out)
    assert len(tree.internal_nodes()) == 1


def test_to_tree_refuses_broken_relation(run):
    broken = D.DSet.build(4, [(0, 1, 2, 3), (0, 2, 1, 3)])
    code, out, _ = run(["to-tree", "-"], broken.to_json())
    assert code == 1
    assert _payload(out)["representable"] is False


# ---------------------------------------------------------------------------
# splittings / extend


def test_splittings_count(run, catalogue):
    code, out, _ = run(["splittings", "-"], catalogue["CAT4"].dset.to_json())
    assert code == 0
    assert _payload(out)["count"] == 7


def test_splittings_methods_agree(run, catalogue):
    source = catalogue["CAT5"].dset.to_json()
    _, brute, _ = run(["splittings", "-", "--method", "brute"], source)
    _, tree, _ = run(["splittings", "-", "--method", "tree"], source)
    assert sorted(_payload(brute)["splittings"]) == sorted(_payload(tree)["splittings"])


def test_extend_attaches_element(run, catalogue, tmp_path):
    sfile = tmp_path / "cut.json"
    sfile.write_text(Splitting.build([{0, 1}, {2, 3}]).to_json())
    code, out, _ = run(
        ["extend", "-", "--splitting", str(sfile)], catalogue["CAT4"].dset.to_json()
    )
    assert code == 0
    assert D.DSet.from_json(out).positives == catalogue["CAT4M"].dset.positives


# ---------------------------------------------------------------------------
# classify / hull / indisc


def test_classify_monotonic(run, catalogue):
    code, out, _ = run(
        ["classify", "-", "--seq", "0,1,2,3,4"], catalogue["CAT5"].dset.to_json()
    )
    assert code == 0
    assert _payload(out)["label"] == "monotonic"


def test_classify_scrambled_exits_one(run, catalogue):
    code, out, _ = run(
        ["classify", "-", "--seq", "0,2,1,3"], catalogue["CAT5"].dset.to_json()
    )
    assert code == 1
    assert _payload(out)["witness"]["kind"] == "forbidden_pattern"


def test_hull_reports_interior(run, catalogue):
    code, out, _ = run(
        ["hull", "-", "--seq", "0,1,2,3,4"], catalogue["CAT5X"].dset.to_json()
    )
    assert code == 0
    payload = _payload(out)
    assert payload["hull"] == [0, 1, 2, 3, 4, 5]
    assert payload["columns"][0]["h3"] == [5]


def test_indisc_discernible_exits_one(run, catalogue):
    code, out, _ = run(
        ["indisc", "-", "--seq", "0,1,2,3,4", "--over", "5"],
        catalogue["CAT5X"].dset.to_json(),
    )
    assert code == 1
    payload = _payload(out)
    assert payload["weakly_indiscernible"] is False
    assert payload["witness"]["kind"] == "order_type"


def test_indisc_frontier_exits_zero(run, catalogue):
    code, out, _ = run(
        ["indisc", "-", "--seq", "0,1,2,3,4", "--over", "5,6"],
        catalogue["CAT5L"].dset.to_json(),
    )
    assert code == 0
    assert _payload(out)["weakly_indiscernible"] is True


# ---------------------------------------------------------------------------
# probe / homreport


def test_probe_forced_candidate(run, catalogue, tmp_path):
    mfile = tmp_path / "map.json"
    mfile.write_text(json.dumps({"0": 0, "1": 1, "2": 2}))
    code, out, _ = run(
        ["probe", "-", "--map", str(mfile), "--add", "3"],
        catalogue["CAT4"].dset.to_json(),
    )
    assert code == 0
    assert _payload(out)["candidates"] == [3]


def test_probe_stuck_exits_one(run, catalogue, tmp_path):
    tinted = catalogue["CAT4"].dset.recolor((0, 0, 0, 1))
    mfile = tmp_path / "map.json"
    mfile.write_text(json.dumps({"2": 0, "0": 2, "1": 1}))
    code, out, _ = run(["probe", "-", "--map", str(mfile), "--add", "3"], tinted.to_json())
    assert code == 1
    assert _payload(out)["candidates"] == []


def test_probe_rejects_non_iso_map(run, catalogue, tmp_path):
    mfile = tmp_path / "map.json"
    mfile.write_text(json.dumps({"0": 0, "1": 2, "2": 1, "3": 3}))
    code, out, _ = run(
        ["probe", "-", "--map", str(mfile), "--add", "0"],
        catalogue["CAT4"].dset.to_json(),
    )
    assert code == 1
    assert _payload(out)["partial_iso"] is False


def test_homreport_flower_all_good(run, catalogue):
    code, out, _ = run(["homreport", "-"], catalogue["FLW5"].dset.to_json())
    assert code == 0
    assert _payload(out)["nonextendable"]["found"] is False


def test_homreport_caterpillar_flags_density(run, catalogue):
    code, out, _ = run(["homreport", "-"], catalogue["CAT4"].dset.to_json())
    assert code == 1
    assert _payload(out)["conditions"]["dense"]["verdict"] is False


# ---------------------------------------------------------------------------
# gen


def test_gen_list(run):
    code, out, _ = run(["gen", "--list"])
    assert code == 0
    assert _payload(out)["fixtures"] == D.fixture_names()


def test_gen_fixture_as_tree(run, catalogue):
    code, out, _ = run(["gen", "--fixture", "CAT4", "--as", "tree"])
    assert code == 0
    tree = D.LeafTree.from_json(out)
    assert D.are_isomorphic_trees(tree, catalogue["CAT4"].tree)


def test_gen_spec_with_coloring(run):
    code, out, _ = run(
        ["gen", "--spec", "kind=star,leaves=5", "--coloring", "round_robin:2"]
    )
    assert code == 0
    assert D.DSet.from_json(out).colors == (0, 1, 0, 1, 0)


def test_gen_needs_exactly_one_source(run):
    code, out, _ = run(["gen", "--fixture", "CAT4", "--spec", "kind=star,leaves=4"])
    assert code == 2
    code, out, _ = run(["gen"])
    assert code == 2


def test_gen_tree_output_rejects_coloring(run):
    code, out, _ = run(
        ["gen", "--fixture", "CAT4", "--as", "tree", "--coloring", "uniform"]
    )
    assert code == 2


def test_gen_spec_respects_max_n(run):
    code, out, _ = run(["gen", "--spec", "kind=star,leaves=20", "--max-n", "12"])
    assert code == 2


# ---------------------------------------------------------------------------
# export-dot


def test_export_dot_stdout(run, catalogue):
    code, out, _ = run(["export-dot", "-"], catalogue["CAT4"].tree.to_json())
    assert code == 0
    assert out.count(" -- ") == 5
    assert out.count("shape=point") == 2


def test_export_dot_from_dset_with_colors(run, catalogue):
    tinted = catalogue["CAT4"].dset.recolor((0, 0, 0, 1))
    code, out, _ = run(["export-dot", "-", "--from-dset"], tinted.to_json())
    assert code == 0
    assert out.count('color_index="0"') == 3
    assert out.count('color_index="1"') == 1


def test_export_dot_deterministic(run, catalogue):
    source = catalogue["CAT5"].tree.to_json()
    _, first, _ = run(["export-dot", "-"], source)
    _, second, _ = run(["export-dot", "-"], source)
    assert first == second


def test_export_dot_output_dir(run, catalogue, tmp_path, monkeypatch):
    monkeypatch.setenv("DSETS_OUTDIR", str(tmp_path))
    code, out, _ = run(
        ["export-dot", "-", "--output", "cat4.dot"], catalogue["CAT4"].tree.to_json()
    )
    assert code == 0
    written = tmp_path / "cat4.dot"
    assert written.exists()
    assert _payload(out)["written"] == str(written)


# ---------------------------------------------------------------------------
# real pipe


def test_gen_pipes_into_to_tree():
    cmd = (
        f"{sys.executable} -m dsets gen --fixture CAT4 --quiet"
        f" | {sys.executable} -m dsets to-tree --quiet"
    )
    proc = subprocess.run(cmd, shell=True, capture_output=True, text=True)
    assert proc.returncode == 0
    tree = D.LeafTree.from_json(proc.stdout)
    assert len(tree.nodes) == 6
