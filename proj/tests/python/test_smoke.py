import math

import pytest

import htcheeger as h


def test_constants():
    assert h.pareto_C_lambda(5.0) == pytest.approx(2 ** 2.4, rel=1e-12)
    assert h.pareto_cheeger_bound(5.0) == pytest.approx(4 ** -0.8, rel=1e-12)
    assert h.C2(0.8, 1.0) == pytest.approx(64.0, rel=1e-12)
    with pytest.raises(ValueError, match="2/3 < alpha < 1"):
        h.C2(0.5, 1.0)


def test_measure_roundtrip():
    mu = h.pareto(5.0)
    assert mu.name
    for p in (0.1, 0.5, 0.9):
        assert mu.cdf(mu.quantile(p)) == pytest.approx(p, rel=1e-12)
    xs = mu.sample(seed=3, count=5)
    assert xs == mu.sample(seed=3, count=5)
    assert min(xs) >= 1.0


def test_cheeger_scan():
    est = h.half_line_scan(h.pareto(), 0.8)
    assert est["value"] == pytest.approx(4 ** -0.8, abs=1e-6)
    assert est["method"] == "half_line"
    grid = h.grid_bruteforce(h.pareto(), 0.8, cells=12)
    assert abs(grid["value"] / (4 ** -0.8) - 1) < 0.1


def test_estimate_uniform_variance():
    r = h.estimate(h.measure("uniform"), "identity", 1, samples=64000, seed=2)
    v = r["variance"]
    assert v["ci_low"] <= 1 / 12 <= v["ci_high"]
    g = h.estimate(h.pareto(), "max", 4, samples=6400, grad_q=2.0)["gradient"]
    assert g["norm"]["value"] == pytest.approx(1.0)


def test_verifiers():
    out = h.verify_pareto(dims=[4, 16, 64], samples=20000)
    assert out["verdict"] == "pass"
    assert [r["theorem_id"] for r in out["reports"]][-1] == "pareto_theorem/slope"
    tails = h.verify_tails(h.laplace(1.0), 1.0, thresholds=[0.5, 1.0])
    assert tails["verdict"] == "pass"
    t = h.tightness_report()
    assert t["verdict"] == "pass"
    m = h.ramp_moments(0.8, 2.0)
    assert m["variance"] == pytest.approx(47 / 576, rel=1e-12)


def test_linalg_and_fit():
    assert h.eigenvalues(2, [2.0, 1.0, 2.0]) == pytest.approx([3.0, 1.0])
    fit = h.scaling_fit([2, 4, 8], [2 * math.sqrt(x) for x in (2, 4, 8)])
    assert fit["slope"] == pytest.approx(0.5)


def test_cli_entry():
    code, out, err = h.cli("constants", "--lambda", 5)
    assert code == 0
    assert "5.27803" in out
    code, _, _ = h.cli()
    assert code == 1
