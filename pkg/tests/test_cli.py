import json
import subprocess
import sys

import pytest

from rainbowrc.cli import main
from rainbowrc.graphcore import read_edge_list
from rainbowrc.rainbowcolor import read_coloring


def lines(capsys):
    return [json.loads(ln) for ln in capsys.readouterr().out.splitlines() if ln.strip()]


@pytest.fixture
def graph_file(tmp_path):
    path = tmp_path / "g.txt"
    assert main(["gen", "--n", "200", "--r", "4", "--seed", "3", "--out", str(path)]) == 0
    return path


def test_gen(tmp_path, capsys):
    path = tmp_path / "g.txt"
    assert main(["gen", "--n", "200", "--r", "4", "--seed", "3", "--out", str(path)]) == 0
    g = read_edge_list(path)
    assert g.n == 200 and g.r == 4
    assert "attempts=" in capsys.readouterr().err


def test_gen_deterministic(tmp_path):
    for name in ("a", "b"):
        main(["gen", "--n", "100", "--r", "4", "--seed", "9", "--out", str(tmp_path / name)])
    assert (tmp_path / "a").read_bytes() == (tmp_path / "b").read_bytes()


def test_gen_exhausted(tmp_path, capsys):
    assert main(["gen", "--n", "2", "--r", "2", "--max-attempts", "3", "--out", str(tmp_path / "x")]) == 1


def test_inspect(graph_file, capsys):
    capsys.readouterr()
    assert main(["inspect", "--in", str(graph_file)]) == 0
    out = lines(capsys)
    kinds = [o["kind"] for o in out]
    assert kinds[0] == "params" and "balls" in kinds and "sparsity" in kinds
    assert any(o["kind"] == "short_cycles" and o["k"] == 3 for o in out)
    balls = next(o for o in out if o["kind"] == "balls")
    assert sum(balls.get(c, 0) for c in ("TreeLike", "Unicyclic", "Multicyclic")) == 200


def test_color_and_verify(graph_file, tmp_path, capsys):
    col = tmp_path / "c.txt"
    assert main(["color", "--in", str(graph_file), "--seed", "1", "--order", "random",
                 "--out", str(col)]) == 0
    c = read_coloring(col)
    assert c.m == 400 and c.extra_colors == 0
    capsys.readouterr()
    assert main(["color", "--in", str(graph_file), "--verify", "--coloring", str(col)]) == 0
    assert lines(capsys)[0]["proper"] is True

    bad = tmp_path / "bad.txt"
    bad.write_text("400 1 0\n" + "".join(f"{e} 0\n" for e in range(400)))
    assert main(["color", "--in", str(graph_file), "--verify", "--coloring", str(bad)]) == 1
    assert lines(capsys)[0]["violation"] is not None

    patched = tmp_path / "p.txt"
    assert main(["color", "--in", str(graph_file), "--out", str(patched), "--patch",
                 "--patch-radius", "2", "--patch-max-cycle", "4"]) == 0
    assert read_coloring(patched).extra_colors > 0

    capsys.readouterr()
    for mode in ("budget", "constructive"):
        assert main(["verify", "--graph", str(graph_file), "--coloring", str(patched),
                     "--mode", mode, "--pairs", "sample:25", "--seed", "4"]) == 0
        out = lines(capsys)
        assert len(out) == 25
        assert set(out[0]) == {"x", "y", "status", "path_len", "nodes_searched"}
        assert sum(o["status"] == "found" for o in out) >= 23


def test_verify_all_exhaustive(tmp_path, capsys):
    g = tmp_path / "g.txt"
    c = tmp_path / "c.txt"
    main(["gen", "--n", "12", "--r", "4", "--seed", "0", "--out", str(g)])
    main(["color", "--in", str(g), "--out", str(c)])
    capsys.readouterr()
    assert main(["verify", "--graph", str(g), "--coloring", str(c), "--mode", "exhaustive",
                 "--pairs", "all"]) == 0
    out = lines(capsys)
    assert len(out) == 66 and all(o["status"] == "found" for o in out)


def test_color_requires_out(graph_file):
    with pytest.raises(SystemExit):
        main(["color", "--in", str(graph_file)])


def test_tree_lemma(capsys):
    assert main(["tree-lemma", "--d", "3", "--ell", "1"]) == 0
    out = capsys.readouterr().out.splitlines()
    assert out[0] == "m=6"
    assert out[1].startswith("T1 d=3 height=1") and out[2].startswith("T2 ")
    assert main(["tree-lemma", "--d", "2", "--ell", "3", "--mode", "search", "--iters", "40000"]) == 0
    assert int(capsys.readouterr().out.splitlines()[0][2:]) <= 8


def test_sweep(tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"cells": [[20, 4, 2.0], [30, 4, 2.0]], "trials": 2}))
    assert main(["sweep", "--config", str(cfg), "--out-dir", str(tmp_path / "o")]) == 0
    assert len((tmp_path / "o" / "trials.jsonl").read_text().splitlines()) == 4
    assert len((tmp_path / "o" / "aggregate.csv").read_text().splitlines()) == 3


def test_sweep_infrastructure_errors(tmp_path, capsys):
    assert main(["sweep", "--config", str(tmp_path / "missing.json"), "--out-dir", str(tmp_path)]) == 2
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"cells": [[21, 3, 2.0]]}))
    assert main(["sweep", "--config", str(bad), "--out-dir", str(tmp_path)]) == 2


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "rainbowrc", "--help"], capture_output=True, text=True)
    assert res.returncode == 0
    for sub in ("gen", "inspect", "color", "verify", "tree-lemma", "sweep"):
        assert sub in res.stdout
