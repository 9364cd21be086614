import math

import pytest

import hfree


def test_pattern():
    c5 = hfree.parse_pattern("C5")
    assert (c5.vertex_count, c5.edge_count, c5.aut) == (5, 5, 10)
    assert c5.density_2 == "4/3"
    assert c5.strictly_2_balanced
    with pytest.raises(ValueError):
        hfree.parse_pattern("X9")


def test_constants():
    k = hfree.constants("C3", 10000)
    assert k["m"] == 30348
    assert math.isclose(k["p"], 0.01, rel_tol=1e-12)
    assert math.isclose(k["c"], 4.16e6, rel_tol=1e-12)
    assert hfree.compute_m("C3", 100, "0.01") == 21
    assert math.isclose(hfree.compute_q(1.0, "C3"), math.exp(-4.0), rel_tol=1e-12)


def test_process_to_exhaustion_is_maximal():
    p = hfree.Process(12, "C3", 4)
    assert p.open_count == 66
    assert p.run() is True
    assert p.terminated
    assert p.edge_count == p.step_count
    assert p.open_count + p.closed_count + p.edge_count == 66
    assert hfree.count_copies("C3", 12, p.edges) == 0
    closed = set(hfree.naive_closed_set(12, p.edges, "C3"))
    edges = set(p.edges)
    for u in range(12):
        for v in range(u + 1, 12):
            assert (u, v) in edges or (u, v) in closed
    with pytest.raises(RuntimeError):
        p.step()


def test_determinism_and_C_uv():
    a = hfree.Process(30, "C4", 9)
    b = hfree.Process(30, "C4", 9)
    a.run("steps:40")
    b.run("steps:40")
    assert a == b
    u, v = a.open_pairs[0]
    for x, y in a.C_uv(u, v):
        assert (u, v) in a.C_uv(x, y)
    assert a.O_F([(u, v)]) == a.C_uv(u, v)


def test_density_scan():
    k4 = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]
    r = hfree.density_scan(4, k4, 4)
    assert r["density"] == "3/2"
    assert r["witness"] == [0, 1, 2, 3]
    assert r["proven_optimal"]
    assert hfree.naive_max_density(4, k4) == ("3/2", [0, 1, 2, 3])


def test_verify_counts():
    (report,) = hfree.verify("counts")
    assert report["pass"]
    assert report["checks"] > 0


def test_simulate_and_analyze(tmp_path):
    text = "pattern = C3\nn = 40, 60, 80, 100\ntrials = 3\nseed = 3\n"
    out = tmp_path / "run"
    summary = hfree.simulate(text, out=str(out), workers=2)
    assert summary["trials"] == 12
    assert summary["failures"] == 0
    assert summary["config_hash"] == hfree.config_hash(text)
    result = hfree.analyze(out)
    assert [row["n"] for row in result["final"]] == [40, 60, 80, 100]
    assert 1.0 < result["exponent_fit"]["slope"] < 2.0
    with pytest.raises(ValueError):
        hfree.simulate(text, out=str(out))
