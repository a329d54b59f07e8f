import json

import numpy as np
import pytest

from quasicert import cli
from quasicert import io as qio
from quasicert.errors import ParseError
from quasicert.generators import gnp, witness_kernel
from quasicert.graph import SimpleGraph
from quasicert.patterns import builtin_pattern
from quasicert.regularity import Partition, ReducedMatrix


def run(capsys, *argv):
    code = cli.main([str(a) for a in argv])
    out = capsys.readouterr()
    return code, out.out, out.err


def write(tmp_path, name, text):
    path = tmp_path / name
    path.write_text(text)
    return path


K4_TEXT = "4 6\n0 1\n0 2\n0 3\n1 2\n1 3\n2 3\n"


def test_edge_list_round_trip():
    G = gnp(30, 0.4, seed=2)
    text = qio.graph_to_text(G, ["gnp n=30 p=0.4 seed=2"])
    assert text.startswith("# gnp n=30 p=0.4 seed=2\n30 ")
    assert qio.graph_from_text(text) == G
    assert qio.graph_to_text(qio.graph_from_text(text), ["gnp n=30 p=0.4 seed=2"]) == text


@pytest.mark.parametrize("text", ["", "3\n", "3 1\n0 1\n1 2\n", "3 1\n0 3\n", "3 1\n1 1\n",
                                  "3 2\n0 1\n1 0\n", "a b\n", "0 0\n"])
def test_edge_list_errors(text):
    with pytest.raises(ParseError):
        qio.graph_from_text(text)


def test_comments_anywhere():
    G = qio.graph_from_text("# head\n3 1\n# middle\n0 2\n\n")
    assert G.edges() == [(0, 2)]


def test_pattern_and_json_round_trips():
    F = builtin_pattern("C4tri")
    text = qio.pattern_to_text(F)
    assert "# pattern C4tri" in text
    assert qio.pattern_from_text(text) == F
    K = witness_kernel(0.5, 0.25)
    K2 = qio.kernel_from_text(qio.kernel_to_text(K))
    assert np.array_equal(K2.D, K.D)
    P = Partition.from_labels([0, 1, 0, 1, 2])
    assert qio.partition_from_text(qio.partition_to_text(P)).to_json() == P.to_json()
    R = ReducedMatrix([[0.5, 0.25], [0.25, 1.0]], [2, 3])
    assert qio.reduced_from_text(qio.reduced_to_text(R)).to_json() == R.to_json()
    with pytest.raises(ParseError):
        qio.kernel_from_text("{not json")
    with pytest.raises(ParseError):
        qio.partition_from_text('{"n": 3, "classes": ["0x3"]}')


def test_generate_header_and_validation(tmp_path, capsys):
    out = tmp_path / "g.el"
    code, _, _ = run(capsys, "generate", "gnp", "--n", 400, "--p", 0.5, "--seed", 7, "-o", out)
    assert code == 0
    assert out.read_text().splitlines()[0] == "# gnp n=400 p=0.5 seed=7"
    assert qio.graph_from_text(out.read_text()) == gnp(400, 0.5, seed=7)
    assert run(capsys, "generate", "gnp", "--n", 10, "--p", 1.5)[0] == 2
    assert run(capsys, "generate", "witness", "--n", 10, "--p", 0.5)[0] == 2
    with pytest.raises(SystemExit) as exc:
        cli.main(["generate", "nope"])
    assert exc.value.code == 2


def test_generate_witness_and_blocks(tmp_path, capsys):
    code, text, _ = run(capsys, "generate", "witness", "--p", 0.5, "--eps", 0.25, "--n", 400, "--seed", 1)
    assert code == 0 and text.startswith("# witness n=400 p=0.5 eps=0.25 seed=1\n")
    code, text, _ = run(capsys, "generate", "block", "--n", 6, "--sizes", "3,3", "--P", "[[1,0],[0,1]]")
    assert code == 0 and qio.graph_from_text(text) == SimpleGraph.disjoint_cliques([3, 3])
    kern = write(tmp_path, "k.json", qio.kernel_to_text(witness_kernel(0.5, 0.25)))
    assert run(capsys, "generate", "kernel", "--n", 20, "--kernel", kern)[0] == 0


def test_density_command(tmp_path, capsys):
    k4 = write(tmp_path, "k4.el", K4_TEXT)
    code, text, _ = run(capsys, "density", k4, "--patterns", "K2,K3")
    report = json.loads(text)
    assert code == 0
    assert report["densities"]["K2"]["density"] == 0.75
    assert report["densities"]["K3"]["density"] == 0.375
    assert report["densities"]["K3"]["fast"] == report["densities"]["K3"]["generic"]
    c5 = write(tmp_path, "c5.el", "5 5\n0 1\n1 2\n2 3\n3 4\n0 4\n")
    assert json.loads(run(capsys, "density", c5, "--patterns", "K3")[1])["densities"]["K3"]["density"] == 0
    pat = write(tmp_path, "p.el", qio.pattern_to_text(builtin_pattern("S")))
    report = json.loads(run(capsys, "density", k4, "--patterns", "", "--pattern-file", pat)[1])
    assert report["densities"]["S"]["density_exact"] == "9/64"
    assert report["densities"]["S"]["fast"]["hom"] == "144"


def test_density_errors(tmp_path, capsys, monkeypatch):
    bad = write(tmp_path, "bad.el", "2 1\n0 5\n")
    assert run(capsys, "density", bad)[0] == 3
    assert run(capsys, "density", tmp_path / "missing.el")[0] == 3
    k4 = write(tmp_path, "k4.el", K4_TEXT)
    assert run(capsys, "density", k4, "--patterns", "Q9")[0] == 2
    monkeypatch.setattr(cli, "fast_numerator", lambda name, G: (1, 1))
    code, _, err = run(capsys, "density", k4, "--patterns", "K3")
    assert code == 99 and "invariant" in err


def test_disc_command(tmp_path, capsys):
    G = SimpleGraph.disjoint_cliques([8, 8])
    path = write(tmp_path, "cc.el", qio.graph_to_text(G))
    report = json.loads(run(capsys, "disc", path, "--p", 0.5)[1])
    assert report["kind"] == "edge" and report["mode"] == "exact" and report["value"] == 0.125
    assert set(report) >= {"kind", "p", "value", "mode", "witnesses", "seed", "input_digest", "version"}
    report = json.loads(run(capsys, "disc", path, "--p", 0.5, "--kind", "clique", "--k", 3, "--l", 1)[1])
    assert report["kind"] == "clique3,1"
    assert run(capsys, "disc", path, "--p", 2)[0] == 2


def test_certify_command(tmp_path, capsys):
    path = write(tmp_path, "g.el", qio.graph_to_text(gnp(400, 0.5, seed=3)))
    report = json.loads(run(capsys, "certify", path, "--p", 0.5, "--eps", 0.05)[1])
    assert report["verdict"] == "quasirandom"
    assert report["soundness"] == "heuristic"
    assert report["stages"]["triangle"]["eta"] <= 0.02
    assert report["stages"]["edge"]["epsilon"] <= 0.05
    cliques = write(tmp_path, "cc.el", qio.graph_to_text(SimpleGraph.disjoint_cliques([200, 200])))
    report = json.loads(run(capsys, "certify", cliques, "--p", 0.5, "--eps", 0.05)[1])
    assert report["verdict"] == "inconclusive"
    # Delta(V, V, V) - p^3 n^3 for two disjoint K_200
    assert report["stages"]["triangle"]["eta"] == pytest.approx((2 * 200 * 199 * 198 - 400 ** 3 / 8) / 400 ** 3)


def test_certify_downgrades_exact_mode(tmp_path, capsys):
    path = write(tmp_path, "g.el", qio.graph_to_text(gnp(30, 0.5, seed=3)))
    code, text, err = run(capsys, "certify", path, "--p", 0.5, "--eps", 0.3, "--mode", "exact")
    report = json.loads(text)
    assert code == 0 and "downgraded" in err
    assert report["stages"]["edge"]["mode"] == "heuristic" and report["warnings"]


def test_experiment_command(capsys):
    code, text, _ = run(capsys, "experiment", "--seeds", "4:4")
    assert code == 0 and text == ""
    code, text, _ = run(capsys, "experiment", "--n", "20", "--seeds", "0:2")
    lines = text.splitlines()
    assert lines[0] == ",".join(cli.EXPERIMENT_FIELDS) and len(lines) == 3
    code, text, _ = run(capsys, "experiment", "--generator", "witness", "--eps", 0.25, "--n", "40",
                        "--seeds", "0:1", "--format", "json")
    rec = json.loads(text)
    assert rec["generator"] == "witness" and rec["delta"] >= 0
    assert run(capsys, "experiment", "--generator", "witness", "--seeds", "0:1")[0] == 2
    assert run(capsys, "experiment", "--seeds", "x")[0] == 2


def test_kernel_command(tmp_path, capsys):
    code, text, _ = run(capsys, "kernel", "--constant", 0.5, "--op", "U")
    assert json.loads(text)["D"] == [[0.125]]
    rep = json.loads(run(capsys, "kernel", "--witness", "0.5,0.25", "--op", "triangle-residual", "--p", 0.5)[1])
    assert rep["value"] == 7 / 64
    rep = json.loads(run(capsys, "kernel", "--witness", "0.5,0.25", "--op", "density", "--pattern", "K3")[1])
    assert rep["value"] == 0.125
    rep = json.loads(run(capsys, "kernel", "--witness", "0.5,0.25", "--op", "constant-deviation", "--p", 0.5)[1])
    assert rep["value"] == 1 / 32
    path = tmp_path / "w.json"
    assert run(capsys, "kernel", "--witness", "0.5,0.25", "--op", "roundtrip", "-o", path)[0] == 0
    assert run(capsys, "kernel", path, "--op", "roundtrip")[1] == path.read_text()
    bad = write(tmp_path, "bad.json", '{"m": 2, "mu": [0.5, 0.5], "D": [[0, 1], [0, 0]]}')
    assert run(capsys, "kernel", bad, "--op", "U")[0] == 3
    assert run(capsys, "kernel", "--op", "U")[0] == 2
    assert run(capsys, "kernel", "--constant", 0.5, "--op", "triangle-residual")[0] == 2
