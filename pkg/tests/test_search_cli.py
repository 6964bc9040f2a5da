import json

import pytest

from reconfig import cli
from reconfig import search as S
from reconfig.constructions import complement_path
from reconfig.graph import canonical_form, write_graph


def test_nonisomorphic_class_counts():
    # classical census of graphs up to isomorphism
    for n, count in ((1, 1), (2, 2), (3, 4), (4, 11), (5, 34), (6, 156)):
        assert len(S.nonisomorphic_masks(n)) == count


def test_reps_are_canonical_minima():
    for rep in S.nonisomorphic_masks(5)[:20]:
        g = S.mask_to_graph(5, rep)
        assert canonical_form(g) == rep
        assert S.graph_to_mask(g) == rep


def test_exhaustive_limit():
    from reconfig.graph import GraphError

    with pytest.raises(GraphError):
        S.nonisomorphic_masks(8)


def test_exhaustive_n5_k2(exhaustive_k2):
    res = exhaustive_k2[5]
    assert res.best_diameter == 3 and res.exhaustive
    assert res.classes_examined == 34
    cp, _ = complement_path(5)
    assert canonical_form(cp) in res.best_masks
    assert res.witness_edges is not None


def test_exhaustive_no_independent_set():
    res = S.exhaustive_search(4, 5)
    assert res.best_diameter is None and res.witness_edges is None


def test_exhaustive_n6_k3_regression():
    # ground truth established by the exhaustive run itself
    res = S.exhaustive_search(6, 3)
    assert res.best_diameter == 3
    assert len(res.best_masks) == 19


def test_exhaustive_cache_roundtrip(tmp_path):
    first = S.exhaustive_search(5, 2, cache_dir=str(tmp_path))
    assert (tmp_path / "exhaustive_n5_k2_tj.json").exists()
    second = S.exhaustive_search(5, 2, cache_dir=str(tmp_path))
    assert first.to_json() == second.to_json()


def test_random_search_deterministic():
    a = S.random_search(6, 2, trials=30, seed=7)
    b = S.random_search(6, 2, trials=30, seed=7)
    assert a.to_json() == b.to_json()
    assert a.best_diameter is not None


# -- command line ------------------------------------------------------------


def run_cli(capsys, *argv):
    code = cli.main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_cli_construct_and_diameter(tmp_path, capsys):
    prefix = str(tmp_path / "p7")
    code, out, _ = run_cli(capsys, "construct", "comp-path", "--n", "7",
                           "--out", prefix)
    assert code == 0
    info = json.loads(out)
    assert info["claimed_diameter_lb"] == 5
    assert (tmp_path / "p7.edges").exists()
    report = json.loads((tmp_path / "p7.report.json").read_text())
    assert report["k"] == 2 and report["start"] == [0, 1]

    code, out, _ = run_cli(capsys, "diameter", prefix + ".edges", "--k", "2")
    assert code == 0
    assert json.loads(out)["diameter"] == 5

    code, out, _ = run_cli(capsys, "diameter", prefix + ".edges", "--k", "2",
                           "--rule", "ts")
    assert code == 0
    assert json.loads(out)["diameter"] >= 5


def test_cli_construct_refusal(capsys, tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    code, _, err = run_cli(capsys, "construct", "circulant", "--p", "40",
                           "--s", "1")
    assert code == 2
    assert "not prime" in err


def test_cli_diameter_no_independent_set(tmp_path, capsys):
    from reconfig.graph import Graph

    path = str(tmp_path / "k5.edges")
    write_graph(Graph.complete(5), path)
    code, out, _ = run_cli(capsys, "diameter", path, "--k", "2")
    assert code == 0
    data = json.loads(out)
    assert data["diameter"] is None and data["reason"] == "no independent set"


def test_cli_diameter_capped(tmp_path, capsys):
    g, _ = complement_path(8)
    path = str(tmp_path / "p8.edges")
    write_graph(g, path)
    code, out, _ = run_cli(capsys, "--cap", "2", "diameter", path, "--k", "2")
    assert code == 3
    assert json.loads(out)["capped"] is True


def test_cli_decide2(tmp_path, capsys):
    g, _ = complement_path(5)
    path = str(tmp_path / "p5.edges")
    write_graph(g, path)
    code, out, _ = run_cli(capsys, "decide2", path, "--from", "0,1",
                           "--to", "3,4")
    assert code == 0
    data = json.loads(out)
    assert data["agree"] and data["reachable"]
    # non-independent endpoint refused
    code, _, err = run_cli(capsys, "decide2", path, "--from", "0,2",
                           "--to", "3,4")
    assert code == 2


def test_cli_search(capsys):
    code, out, _ = run_cli(capsys, "search", "--n", "5", "--k", "2",
                           "--exhaustive")
    assert code == 0
    data = json.loads(out)
    assert data["best_diameter"] == 3 and data["exhaustive"]

    code, _, err = run_cli(capsys, "search", "--n", "9", "--k", "2",
                           "--exhaustive")
    assert code == 2
    assert "--random" in err

    code, out, _ = run_cli(capsys, "--seed", "3", "search", "--n", "5",
                           "--k", "2", "--random", "10")
    assert code == 0
    assert json.loads(out)["exhaustive"] is False

    code, out, _ = run_cli(capsys, "search", "--n", "4", "--k", "5",
                           "--exhaustive")
    assert code == 0
    assert json.loads(out)["best_diameter"] is None


def test_cli_search_cached(tmp_path, capsys, monkeypatch):
    monkeypatch.setenv("RECONFIG_CACHE_DIR", str(tmp_path))
    code, out1, _ = run_cli(capsys, "search", "--n", "4", "--k", "2",
                            "--exhaustive")
    assert code == 0 and (tmp_path / "exhaustive_n4_k2_tj.json").exists()
    code, out2, _ = run_cli(capsys, "search", "--n", "4", "--k", "2",
                            "--exhaustive")
    assert out1 == out2


def test_cli_verify(capsys, tmp_path):
    code, out, _ = run_cli(capsys, "verify", "circulant-structure",
                           "--p", "17", "--s", "1")
    assert code == 0 and json.loads(out)["pass"]

    code, out, _ = run_cli(capsys, "verify", "63-free", "--p", "17", "--s", "1")
    assert code == 0 and json.loads(out)["pass"]

    g, _ = complement_path(6)
    path = str(tmp_path / "p6.edges")
    write_graph(g, path)
    code, out, _ = run_cli(capsys, "verify", "config-path", path, "--k", "2")
    assert code == 0 and json.loads(out)["pass"]

    code, out, _ = run_cli(capsys, "verify", "upper-bound-map", path,
                           "--k", "2", "--from", "0,1", "--to", "4,5")
    assert code == 0 and json.loads(out)["pass"]

    code, out, _ = run_cli(capsys, "verify", "claim-inter", "--budget", "47")
    assert code == 0 and json.loads(out)["pass"]

    out_path = str(tmp_path / "sat.edges")
    from reconfig.graph import Graph

    empty = str(tmp_path / "e4.edges")
    write_graph(Graph.empty(4), empty)
    code, out, _ = run_cli(capsys, "verify", "saturate", empty,
                           "--out", out_path)
    assert code == 0 and json.loads(out)["pass"]
    assert (tmp_path / "sat.edges").exists()


def test_cli_apset(capsys):
    code, out, _ = run_cli(capsys, "apset", "odd", "--n", "9", "--mod", "8")
    assert code == 0
    data = json.loads(out)
    assert data["elements"] == [1, 9] and data["size"] == 2

    code, out, _ = run_cli(capsys, "apset", "exact", "--n", "9")
    assert json.loads(out)["size"] == 5

    code, out, _ = run_cli(capsys, "apset", "behrend", "--n", "100")
    data = json.loads(out)
    assert data["method"] in ("behrend", "greedy")


def test_cli_usage_errors(capsys):
    with pytest.raises(SystemExit) as exc:
        cli.main(["bogus"])
    assert exc.value.code == 64
    capsys.readouterr()
    with pytest.raises(SystemExit) as exc:
        cli.main(["verify", "not-a-check"])
    assert exc.value.code == 64
    capsys.readouterr()


def test_console_script_installed():
    import subprocess

    proc = subprocess.run(
        ["reconfig", "apset", "exact", "--n", "5"],
        capture_output=True, text=True,
    )
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["size"] == 4


def test_cli_construct_toll_and_triple(tmp_path, capsys):
    base = str(tmp_path / "p4")
    run_cli(capsys, "construct", "comp-path", "--n", "4", "--out", base)

    code, out, _ = run_cli(capsys, "construct", "toll", base + ".edges",
                           "--k", "2", "--from", "0,1", "--to", "2,3",
                           "--n", "1", "--out", str(tmp_path / "toll"))
    assert code == 0
    info = json.loads(out)
    assert info["n"] == 12 and info["claimed_diameter_lb"] == 10

    code, out, _ = run_cli(capsys, "construct", "triple", base + ".edges",
                           "--k", "2", "--from", "0,1", "--to", "2,3",
                           "--p", "73", "--out", str(tmp_path / "ring"))
    assert code == 0
    assert json.loads(out)["k"] == 5

    code, out, _ = run_cli(capsys, "construct", "iterate-toll", "--steps", "1",
                           "--per-step-n", "2",
                           "--out", str(tmp_path / "it"))
    assert code == 0
    assert json.loads(out)["claimed_diameter_lb"] == 20

    code, out, _ = run_cli(capsys, "construct", "k3", "--budget", "17",
                           "--out", str(tmp_path / "k3"))
    assert code == 0
    assert json.loads(out)["claimed_diameter_lb"] == 13

    code, out, _ = run_cli(capsys, "construct", "general", "--k", "4",
                           "--budget", "30", "--out", str(tmp_path / "g4"))
    assert code == 0
    assert json.loads(out)["k"] == 4


def test_cli_decide2_single_algos(tmp_path, capsys):
    g, _ = complement_path(5)
    path = str(tmp_path / "p5.edges")
    write_graph(g, path)
    for algo in ("fast", "naive"):
        code, out, _ = run_cli(capsys, "decide2", path, "--from", "0,1",
                               "--to", "3,4", "--algo", algo)
        assert code == 0 and json.loads(out)["reachable"]


def test_cli_random_search_threads(capsys):
    code, out, _ = run_cli(capsys, "--threads", "2", "--seed", "5", "search",
                           "--n", "6", "--k", "2", "--random", "8")
    assert code == 0
    data = json.loads(out)
    assert data["trials"] == 8 and not data["exhaustive"]


def test_cli_apset_greedy(capsys):
    code, out, _ = run_cli(capsys, "apset", "greedy", "--n", "14")
    assert code == 0
    assert json.loads(out)["elements"] == [1, 2, 4, 5, 10, 11, 13, 14]


def test_cli_decide2_agreement_harness(tmp_path, capsys):
    # scripted sweep: both algorithms must agree (exit 0) on every instance
    import random

    from reconfig.graph import Graph

    rng = random.Random(200)
    path = str(tmp_path / "g.edges")
    done = 0
    while done < 200:
        n = rng.randint(3, 16)
        edges = [
            (u, v)
            for u in range(n)
            for v in range(u + 1, n)
            if rng.random() < rng.choice((0.25, 0.5, 0.75))
        ]
        g = Graph.from_edges(n, edges)
        pairs = [
            (u, v)
            for u in range(n)
            for v in range(u + 1, n)
            if not g.adj[u] >> v & 1
        ]
        if not pairs:
            continue
        a, b = rng.choice(pairs), rng.choice(pairs)
        write_graph(g, path)
        code, out, _ = run_cli(
            capsys, "decide2", path,
            "--from", f"{a[0]},{a[1]}", "--to", f"{b[0]},{b[1]}",
        )
        assert code == 0 and json.loads(out)["agree"]
        done += 1
