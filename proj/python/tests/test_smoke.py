import os
from pathlib import Path

import pytest

import tracknet

TEST_DATA = Path(os.environ.get("TRACKNET_TEST_DATA", Path(__file__).parents[2] / "tests" / "data"))


def test_canonicalize_and_resolve():
    assert tracknet.canonicalize_uri("HTTP://WWW.Example.CO.UK:80/x") is not None
    assert tracknet.canonicalize_uri("mailto:someone@example.com") is None
    assert tracknet.resolve_pld("static.ads.example.co.uk") == "example.co.uk"
    with pytest.raises(tracknet.Error):
        tracknet.resolve_pld("co.uk")


def test_extract_page():
    html = (
        '<script src="https://www.google-analytics.com/ga.js"></script>'
        '<img src="//cdn.example.com/logo.png">'
        '<iframe src="https://platform.twitter.com/w.html"></iframe>'
    )
    got = tracknet.extract_page("http://www.example.com/", html)
    assert got == ["google-analytics.com", "twitter.com"]


def test_pagerank_sums_to_one():
    links = [("a.com", "b.com"), ("b.com", "c.com"), ("c.com", "a.com"), ("d.com", "c.com")]
    ranks = tracknet.pagerank(links)
    assert set(ranks) == {"a.com", "b.com", "c.com", "d.com"}
    assert abs(sum(ranks.values()) - 1.0) < 1e-9
    assert ranks["c.com"] > ranks["d.com"]


def test_g2_fixture():
    stat, p = tracknet.g2_test(20, 5, 10, 15)
    assert stat == pytest.approx(8.630462173553422, rel=1e-10)
    assert p == pytest.approx(0.003305876912189962, rel=1e-8)


def test_point_biserial_separation():
    r, _ = tracknet.point_biserial([0, 0, 0, 1, 1, 1], [1.0, 1.0, 1.0, 2.0, 2.0, 2.0])
    assert r == 1.0


def test_zeta_and_power_law():
    assert tracknet.hurwitz_zeta(2.5, 5) == pytest.approx(0.06931053204432187, rel=1e-12)
    samples = [1] * 60 + [2] * 20 + [3] * 10 + [5] * 5 + [9] * 3 + [20] * 2
    fit = tracknet.fit_power_law(samples)
    assert fit["alpha"] > 1.0
    with pytest.raises(tracknet.Error):
        tracknet.fit_power_law([4] * 100)


def test_modularity_and_louvain():
    cliques = []
    for group in ("a", "b"):
        names = [f"{group}{i}" for i in range(4)]
        cliques += [(u, v, 1) for i, u in enumerate(names) for v in names[i + 1:]]
    edges = cliques + [("a0", "b0", 1)]
    assignment, q = tracknet.louvain(edges, seed=3)
    assert len(set(assignment.values())) == 2
    assert assignment["a1"] == assignment["a3"] != assignment["b2"]
    assert q == pytest.approx(tracknet.modularity(edges, assignment))
    assert tracknet.modularity([("x", "y", 1)], {"x": 0, "y": 0}) == pytest.approx(0.0, abs=1e-15)


def test_run_cli(tmp_path):
    code, out, _ = tracknet.run_cli(["--help"])
    assert code == 0 and "extract" in out
    code, _, err = tracknet.run_cli(["--out", str(tmp_path), "extract", "--corpus", str(TEST_DATA / "small_corpus")])
    assert code == 0, err
    assert (tmp_path / "edges.tsv").read_text().splitlines()
