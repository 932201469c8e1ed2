import numpy as np
import pytest

from threshnet import (
    DomainError,
    FitDegenerateError,
    ParetoParams,
    ccdf,
    fit_powerlaw_discrete,
    gof_pvalue,
    mc_estimate,
    p_edge,
    p_edge_given_weight,
    p_wedge,
    sample_discrete_powerlaw,
)
from threshnet.statfit import ccdf_loglog_slope, with_p_value


def test_ccdf_trivial_cases():
    values, fracs = ccdf([1, 1, 1])
    assert np.array_equal(values, [1])
    assert np.array_equal(fracs, [1.0])
    values, fracs = ccdf([1, 2, 4])
    assert np.array_equal(values, [1, 2, 4])
    assert np.allclose(fracs, [1.0, 2 / 3, 1 / 3])


def test_ccdf_monotone_and_endpoint(rng):
    degrees = rng.integers(0, 50, size=1000)
    values, fracs = ccdf(degrees)
    assert np.all(np.diff(fracs) < 0)
    assert fracs[0] == np.mean(degrees >= values[0])
    with pytest.raises(DomainError):
        ccdf([])
    with pytest.raises(DomainError):
        ccdf([-1, 2])


def test_ccdf_loglog_slope_exact_powerlaw(rng):
    # ccdf of a pmf ~ k^-2 falls like k^-1
    samples = sample_discrete_powerlaw(rng, 2.0, 1, 10 ** 6)
    slope = ccdf_loglog_slope(samples, 10, 100)
    assert abs(slope + 1.0) < 0.1


def test_sampler_matches_pmf(rng):
    alpha, n = 2.5, 10 ** 6
    samples = sample_discrete_powerlaw(rng, alpha, 1, n)
    assert samples.min() >= 1
    from scipy.special import zeta

    for k in (1, 2, 5, 10):
        p = k ** -alpha / zeta(alpha, 1)
        frac = np.mean(samples == k)
        assert abs(frac - p) <= 4 * np.sqrt(p * (1 - p) / n)


def test_sampler_respects_xmin(rng):
    samples = sample_discrete_powerlaw(rng, 2.0, 7, 10 ** 4)
    assert samples.min() >= 7


@pytest.mark.parametrize("alpha", [1.5, 2.0, 2.5, 3.0])
def test_fit_recovers_exponent(alpha):
    rng = np.random.default_rng(int(alpha * 10))
    samples = sample_discrete_powerlaw(rng, alpha, 1, 10 ** 5)
    fit = fit_powerlaw_discrete(samples, x_min=1)
    assert abs(fit.alpha_hat - alpha) < 0.05
    assert fit.n_tail == 10 ** 5
    # the continuous shortcut is biased at x_min = 1; only sanity-check it
    assert 1.0 < fit.alpha_continuous < alpha + 0.5


def test_fit_scans_xmin(rng):
    # body noise below x_min = 5, clean power law above
    tail = sample_discrete_powerlaw(rng, 2.5, 5, 30000)
    body = rng.integers(1, 5, size=20000)
    fit = fit_powerlaw_discrete(np.concatenate([body, tail]))
    assert 4 <= fit.x_min <= 8
    assert abs(fit.alpha_hat - 2.5) < 0.1


def test_fit_reports_zeros(rng):
    samples = np.concatenate([sample_discrete_powerlaw(rng, 2.0, 1, 5000), np.zeros(100, dtype=int)])
    fit = fit_powerlaw_discrete(samples, x_min=1)
    assert fit.n_zero == 100


def test_fit_degenerate_inputs():
    with pytest.raises(FitDegenerateError):
        fit_powerlaw_discrete(np.full(200, 7))
    with pytest.raises(FitDegenerateError):
        fit_powerlaw_discrete([1, 2, 3])  # too few samples
    with pytest.raises(FitDegenerateError):
        fit_powerlaw_discrete(np.arange(1, 200), x_min=190)


def test_gof_accepts_true_powerlaw(rng):
    samples = sample_discrete_powerlaw(rng, 2.5, 1, 5000)
    fit = fit_powerlaw_discrete(samples, x_min=1)
    gof = gof_pvalue(samples, fit, n_bootstrap=200, seed=1)
    assert gof.p_value > 0.05
    assert gof.stderr == pytest.approx(
        np.sqrt(gof.p_value * (1 - gof.p_value) / 200), rel=1e-12
    )
    tagged = with_p_value(fit, gof)
    assert tagged.p_value == gof.p_value


def test_gof_rejects_geometric(rng):
    samples = rng.geometric(0.1, size=10 ** 5)
    fit = fit_powerlaw_discrete(samples, x_min=1)
    gof = gof_pvalue(samples, fit, n_bootstrap=100, seed=2)
    assert gof.p_value < 0.05


def test_gof_requires_enough_replicates(rng):
    samples = sample_discrete_powerlaw(rng, 2.5, 1, 1000)
    fit = fit_powerlaw_discrete(samples, x_min=1)
    with pytest.raises(DomainError):
        gof_pvalue(samples, fit, n_bootstrap=50)


def test_mc_estimate_trivial_hemisphere(pareto3):
    est = mc_estimate("edge", pareto3, 0.0, 10 ** 5, seed=3)
    assert abs(est.estimate - 0.5) <= 3 * est.stderr
    assert est.trials == 10 ** 5


def test_mc_estimate_matches_closed_forms(pareto3):
    est = mc_estimate("edge", pareto3, 10.0, 10 ** 6, seed=4)
    assert abs(est.estimate - p_edge(pareto3, 10.0)) <= 3 * est.stderr
    est = mc_estimate("edge_given_weight", pareto3, 10.0, 10 ** 6, seed=5, w=20.0)
    assert abs(est.estimate - p_edge_given_weight(20.0, pareto3, 10.0)) <= 3 * est.stderr
    est = mc_estimate("wedge", pareto3, 0.5, 10 ** 6, seed=6)
    assert abs(est.estimate - p_wedge(pareto3, 0.5)) <= 3 * est.stderr


def test_mc_estimate_validation(pareto3):
    with pytest.raises(DomainError):
        mc_estimate("edge", pareto3, 1.0, 100)
    with pytest.raises(DomainError):
        mc_estimate("edge_given_weight", pareto3, 1.0, 10 ** 4)
    with pytest.raises(DomainError):
        mc_estimate("directed_edge_given_weight", pareto3, 1.0, 10 ** 4, w=2.0)
    with pytest.raises(DomainError):
        mc_estimate("linkfn_edge_given_weight", pareto3, 1.0, 10 ** 4, w=2.0, alpha=1.0, beta=1.0)
    with pytest.raises(DomainError):
        mc_estimate("nonsense", pareto3, 1.0, 10 ** 4)


def test_gof_self_consistency_ensemble():
    # p-values on data drawn from the fitted law should rarely be small
    ok = 0
    for rep in range(10):
        rng = np.random.default_rng(100 + rep)
        samples = sample_discrete_powerlaw(rng, 2.2, 1, 2000)
        fit = fit_powerlaw_discrete(samples, x_min=1)
        gof = gof_pvalue(samples, fit, n_bootstrap=100, seed=rep)
        ok += gof.p_value > 0.05
    assert ok >= 9
