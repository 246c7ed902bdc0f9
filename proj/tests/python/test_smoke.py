import math
import os
import subprocess

import pytest

import lindley


def test_bayes_factor_and_posterior():
    assert lindley.bayes_factor(0.0, math.sqrt(3.0)) == pytest.approx(2.0, rel=1e-15)
    assert lindley.bayes_factor(2.0, 1.0) == pytest.approx(math.sqrt(2.0) / math.e, rel=1e-14)
    assert lindley.posterior_h0(1.96, 1e4, 0.5) > 0.999
    assert lindley.expected_kl(2.0) == 2.0


def test_priors():
    kl = lindley.PriorScheme.parse("kl")
    assert kl.name == "kl"
    assert lindley.m_of_sigma(kl, 2.0) == pytest.approx(math.exp(2.0) / math.sqrt(5.0), rel=1e-14)
    regime = lindley.classify_regime(lindley.PriorScheme.robert())
    assert regime["case"] == "ii"
    assert regime["limit"] == pytest.approx(math.sqrt(2.0 * math.pi), rel=1e-15)
    table = lindley.PriorScheme.table([(1.0, 0.5), (2.0, 0.3)])
    assert lindley.rho0(table, 1.5) == pytest.approx(0.4)
    with pytest.raises(lindley.RangeError):
        lindley.rho0(table, 3.0)


def test_calibration():
    kl = lindley.PriorScheme.kl()
    r = lindley.solve_sigma(0.05, 0.05, kl)
    assert abs(r.residual) <= 1e-10
    assert r.sigma_star == pytest.approx(2.108973394372083, abs=1e-9)
    assert lindley.positivity_bound(0.05, kl) == pytest.approx(2.8454877865455884, abs=1e-10)
    assert lindley.positivity_bound(0.05, lindley.PriorScheme.robert()) is None
    assert lindley.classical_threshold(0.05) == pytest.approx(3.841459, abs=1e-5)
    with pytest.raises(lindley.DomainError):
        lindley.psi(3.0, 0.05, kl)
    with pytest.raises(lindley.InfeasibleError):
        lindley.solve_sigma(0.05, 0.05, lindley.PriorScheme.robert())
    d = lindley.decide(4.0, 1.0, 0.05, kl)
    assert d["reject"] and d["via_threshold"]


def test_simulate_is_deterministic():
    kl = lindley.PriorScheme.kl()
    sigma = lindley.solve_sigma(0.05, 0.05, kl).sigma_star
    a = lindley.simulate(sigma, 0.05, kl, n=100_000, seed=4, workers=1)
    b = lindley.simulate(sigma, 0.05, kl, n=100_000, seed=4, workers=3)
    assert a.rejections == b.rejections
    assert a.rejections == a.threshold_rejections
    assert abs(a.estimate - 0.05) <= 3 * a.std_error + 1e-12


@pytest.mark.skipif("LINDLEY_CLI" not in os.environ, reason="CLI path not provided")
def test_cli_executable():
    out = subprocess.run(
        [os.environ["LINDLEY_CLI"], "regime", "--scheme", "kl"],
        capture_output=True, text=True, check=True,
    ).stdout
    assert "case: (iii)" in out
    bad = subprocess.run([os.environ["LINDLEY_CLI"], "posterior", "--x", "0", "--sigma", "-1"],
                         capture_output=True, text=True)
    assert bad.returncode == 2
