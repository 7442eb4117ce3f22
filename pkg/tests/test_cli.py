import json
from fractions import Fraction

import pytest

from corelab.cli import main

from helpers import DATA

SINGLE = str(DATA / "single_exclusion.json")
TWO_WAY = str(DATA / "two_way_conflict.json")
SIMPLE = str(DATA / "two_bidders_one_item.json")
K4 = str(DATA / "k4.edges")


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_auction_table(capsys):
    code, out, _ = run(capsys, "auction", SINGLE)
    assert code == 0
    assert "4 | 5    | (1,1)" in out
    assert "assignment: 1<-0 2<-B 3<-A" in out
    assert "certificate: true" in out


def test_auction_tsv(capsys):
    code, out, _ = run(capsys, "auction", SINGLE, "--format", "tsv")
    lines = out.strip().splitlines()
    assert code == 0
    assert lines[0].split("\t") == ["t", "step", "prices", "D_1", "D_2", "D_3", "R_1", "R_2", "R_3", "O", "I"]
    assert lines[3].split("\t")[-1] == "{1}"


def test_auction_policies(capsys):
    code, out, _ = run(capsys, "auction", TWO_WAY, "--policy", "fixed:1", "--format", "json")
    assert code == 0 and json.loads(out)["welfare"] == 16
    code, out, _ = run(capsys, "auction", TWO_WAY, "--policy", "fixed:2", "--format", "json")
    assert json.loads(out)["welfare"] == 13
    code, out, _ = run(capsys, "auction", TWO_WAY, "--branches", "--format", "json")
    doc = json.loads(out)
    assert sorted(o["welfare"] for o in doc["outcomes"]) == [13, 16]
    assert all(o["prices"] == ["3/1", "1/1"] and o["core"] for o in doc["outcomes"])
    code, out, _ = run(capsys, "auction", TWO_WAY, "--policy", "branches")
    assert out.count("branch ") == 2


def test_auction_bad_policy(capsys):
    assert run(capsys, "auction", TWO_WAY, "--policy", "fixed:9")[0] == 1
    assert run(capsys, "auction", TWO_WAY, "--policy", "random")[0] == 1
    assert run(capsys, "auction", TWO_WAY, "--policy", "fixed:0")[0] == 1


def test_solve(capsys):
    code, out, _ = run(capsys, "solve", TWO_WAY, "--format", "json")
    doc = json.loads(out)
    assert code == 0 and doc["welfare"] == 16 and doc["qbc"] and doc["core"]
    code, out, _ = run(capsys, "solve", SIMPLE, "--oracle")
    assert code == 0 and "welfare:    10" in out and "q-BC:       true" in out


def test_solve_node_cap(capsys, monkeypatch):
    assert run(capsys, "solve", TWO_WAY, "--max-nodes", "1")[0] == 2
    monkeypatch.setenv("CORELAB_MAX_NODES", "1")
    code, _, err = run(capsys, "solve", TWO_WAY)
    assert code == 2 and "exceeded" in err
    monkeypatch.setenv("CORELAB_MAX_NODES", "zero")
    assert run(capsys, "solve", TWO_WAY)[0] == 1


def test_input_errors(capsys, tmp_path, monkeypatch):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert run(capsys, "auction", str(bad))[0] == 1
    assert run(capsys, "solve", str(tmp_path / "missing.json"))[0] == 1
    assert run(capsys, "auction", SINGLE, "--reserves", "1")[0] == 1


def test_stdin_and_reserve_override(capsys, monkeypatch):
    import io

    monkeypatch.setattr("sys.stdin", io.StringIO((DATA / "single_exclusion.json").read_text()))
    code, out, _ = run(capsys, "solve", "-", "--reserves", "2,0", "--format", "json")
    doc = json.loads(out)
    assert code == 0 and doc["core"]
    assert Fraction(doc["prices"][0]) >= 2


def test_check(capsys, tmp_path):
    code, out, _ = run(capsys, "check", SIMPLE, "--assignment", "0,0", "--prices", "0", "--format", "json")
    assert code == 0 and json.loads(out) == {"core": False, "blocking_pairs": [[1, 1], [2, 1]]}
    f = tmp_path / "o.json"
    f.write_text(json.dumps({"assignment": [0, 2, 1], "prices": ["1", "1"]}))
    code, out, _ = run(capsys, "check", SINGLE, "--outcome", str(f))
    assert code == 0 and "core:       true" in out
    assert run(capsys, "check", SINGLE)[0] == 1
    assert run(capsys, "check", SINGLE, "--assignment", "1,1,0", "--prices", "1,0")[0] == 1


def test_gadget(capsys, tmp_path):
    code, out, _ = run(capsys, "gadget", "verify", K4, "--k", "1")
    assert code == 0 and out.strip().endswith("overall: PASS")
    out_file, names = tmp_path / "m.json", tmp_path / "n.json"
    code, _, err = run(capsys, "gadget", "build", K4, "--k", "2", "--out", str(out_file), "--names", str(names))
    assert code == 0 and "threshold 1612" in err
    assert len(json.loads(out_file.read_text())["bidders"]) == 30
    assert json.loads(names.read_text())["bidders"][0] == "beta[0-1]"
    bad = tmp_path / "tri.edges"
    bad.write_text("0 1\n1 2\n0 2\n")
    assert run(capsys, "gadget", "verify", str(bad))[0] == 1


def test_genpos(capsys):
    code, out, _ = run(capsys, "genpos", SINGLE, "--format", "json")
    assert code == 0 and json.loads(out)["verdict"] == "false"
    code, out, _ = run(capsys, "genpos", SINGLE, "--max-walks", "2")
    assert code == 0 and "unknown-within-bound" in out


@pytest.mark.parametrize("mechanism", ["auction", "solver"])
def test_ic(capsys, mechanism):
    code, out, _ = run(capsys, "ic", "--mechanism", mechanism, "--format", "json")
    doc = json.loads(out)
    assert code == 0
    assert doc["truthful_utility"] == "0" and doc["deviating_utility"] == "9"
    assert doc["deviating"]["prices"] == ["1/1", "1/1"]


def test_gen(capsys, tmp_path):
    code, a, _ = run(capsys, "gen", "--seed", "5", "--n", "3", "--m", "2", "--reserves", "0:2")
    _, b, _ = run(capsys, "gen", "--seed", "5", "--n", "3", "--m", "2", "--reserves", "0:2")
    assert code == 0 and a == b
    assert len(json.loads(a)["bidders"]) == 3
    out = tmp_path / "g.json"
    assert run(capsys, "gen", "--out", str(out))[0] == 0 and out.exists()
    assert run(capsys, "gen", "--values", "5")[0] == 1
    assert run(capsys, "gen", "--values", "5:1")[0] == 1
