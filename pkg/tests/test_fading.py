import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy import integrate, stats

from stratolink.errors import DomainError, SeriesConvergenceError, UnsupportedRangeError
from stratolink.fading import (
    FIT_RANGE,
    EwParams,
    ew_cdf,
    ew_mean,
    ew_pdf,
    ew_quantile,
    ew_sample,
    fit_from_scintillation,
)

# Reference-setup downlink indices (61..81 deg) and the uplink index at 70 deg
TABLE1_SIGMA2 = [7.2735164e-4, 1.0035768e-3, 1.8382739e-3, 2.9725576e-3, 5.7856062e-3, 6.5216713e-4]

params = st.builds(
    EwParams,
    alpha=st.floats(0.2, 10.0),
    beta=st.floats(0.2, 20.0),
    eta=st.floats(0.1, 5.0),
)


def moment_by_density(p, k):
    """k-th moment by direct quadrature of I^k f(I), split around eta."""
    f = lambda x: x ** k * ew_pdf(x, p) if x > 0 else 0.0
    cuts = [0.0] + [p.eta * c for c in (0.5, 0.9, 1.0, 1.1, 2.0)] + [np.inf]
    return sum(integrate.quad(f, a, b, limit=500, epsabs=1e-14)[0] for a, b in zip(cuts, cuts[1:]))


# --- cdf / pdf / quantile --------------------------------------------------

def test_cdf_examples():
    assert ew_cdf(0.0, EwParams(3.0, 2.0, 1.5)) == 0.0
    assert ew_cdf(1.0, EwParams(1.0, 1.0, 1.0)) == pytest.approx(1 - math.exp(-1), rel=1e-15)
    assert ew_cdf(2.5, EwParams(2.0, 1.0, 2.5)) == pytest.approx((1 - math.exp(-1)) ** 2, rel=1e-15)
    assert ew_cdf(1e6, EwParams(2.0, 1.0, 1.0)) == 1.0


def test_cdf_rejects_negative():
    with pytest.raises(DomainError):
        ew_cdf(-0.1, EwParams(1, 1, 1))


@pytest.mark.parametrize("kw", [dict(alpha=0, beta=1, eta=1), dict(alpha=1, beta=-1, eta=1), dict(alpha=1, beta=1, eta=0)])
def test_params_validated(kw):
    with pytest.raises(DomainError):
        EwParams(**kw)


def test_pdf_examples():
    assert ew_pdf(1.0, EwParams(1.0, 1.0, 1.0)) == pytest.approx(math.exp(-1), rel=1e-15)
    with pytest.raises(DomainError):
        ew_pdf(0.0, EwParams(1, 1, 1))


def test_pdf_matches_finite_difference():
    rng = np.random.default_rng(7)
    for _ in range(20):
        p = EwParams(rng.uniform(0.5, 6), rng.uniform(0.5, 6), rng.uniform(0.5, 2))
        x = p.eta * rng.uniform(0.2, 2.0)
        h = 1e-6 * x
        fd = (ew_cdf(x + h, p) - ew_cdf(x - h, p)) / (2 * h)
        assert ew_pdf(x, p) == pytest.approx(fd, abs=1e-6, rel=1e-6)


@pytest.mark.parametrize("sigma2", TABLE1_SIGMA2 + [0.25, 1.0])
def test_pdf_normalized(sigma2):
    assert moment_by_density(fit_from_scintillation(sigma2), 0) == pytest.approx(1.0, abs=1e-8)


def test_quantile_examples():
    p = EwParams(1.0, 1.0, 1.0)
    assert ew_quantile(0.0, p) == 0.0
    assert ew_quantile(1 - math.exp(-1), p) == pytest.approx(1.0, rel=1e-14)
    for u in (-0.1, 1.0, 1.5):
        with pytest.raises(DomainError):
            ew_quantile(u, p)


def test_quantile_roundtrip_random():
    rng = np.random.default_rng(11)
    for _ in range(1000):
        p = EwParams(rng.uniform(0.2, 10), rng.uniform(0.2, 20), rng.uniform(0.1, 5))
        u = rng.uniform(0.0, 1 - 1e-12)
        back = ew_cdf(ew_quantile(u, p), p)
        assert abs(back - u) <= 1e-9 * max(u, 1e-300) or abs(back - u) <= 1e-15


@given(params, st.lists(st.floats(0.0, 50.0), min_size=2, max_size=30))
def test_cdf_nondecreasing(p, xs):
    xs = np.sort(np.asarray(xs))
    assert np.all(np.diff(ew_cdf(xs, p)) >= 0)


@given(st.floats(0.2, 20.0), st.floats(0.1, 5.0), st.floats(0.0, 30.0))
def test_alpha_one_is_weibull(beta, eta, x):
    assert ew_cdf(x, EwParams(1.0, beta, eta)) == pytest.approx(-math.expm1(-((x / eta) ** beta)), rel=1e-14, abs=0)


@given(params, st.floats(0.0, 1 - 1e-12))
def test_quantile_inverts_cdf(p, u):
    assert ew_cdf(ew_quantile(u, p), p) == pytest.approx(u, abs=1e-9)


# --- sampling --------------------------------------------------------------

def test_sampling_is_deterministic():
    p = EwParams(2.0, 1.5, 1.0)
    a = ew_sample(np.random.default_rng(5), p, 1000)
    b = ew_sample(np.random.default_rng(5), p, 1000)
    assert np.array_equal(a, b)


def test_exponential_sample_mean():
    x = ew_sample(np.random.default_rng(3), EwParams(1.0, 1.0, 1.0), 1_000_000)
    assert x.mean() == pytest.approx(1.0, abs=0.01)


@pytest.mark.slow
@pytest.mark.parametrize("sigma2", [6.5216713e-4, 7.2735164e-4, 5.7856062e-3, 0.05, 0.25])
def test_ks_against_cdf(sigma2):
    p = fit_from_scintillation(sigma2)
    x = ew_sample(np.random.default_rng(2024), p, 1_000_000)
    assert stats.kstest(x, lambda v: ew_cdf(v, p)).pvalue > 0.01


# --- mean ------------------------------------------------------------------

def test_mean_examples():
    assert ew_mean(EwParams(1.0, 1.0, 1.0)) == pytest.approx(1.0, rel=1e-10)
    assert ew_mean(EwParams(1.0, 2.0, 1.0)) == pytest.approx(0.886226925452758, rel=1e-10)
    # integer alpha: E[I] = eta Gamma(1 + 1/beta) (2 - 2^(-1/beta)) for alpha = 2
    assert ew_mean(EwParams(2.0, 1.0, 1.0)) == pytest.approx(1.5, rel=1e-10)


@given(st.floats(0.3, 8.0), st.floats(0.3, 10.0), st.floats(0.2, 3.0))
@settings(max_examples=40, deadline=None)
def test_mean_series_and_quadrature_agree(a, b, e):
    p = EwParams(a, b, e)
    assert ew_mean(p, "auto") == pytest.approx(ew_mean(p, "quadrature"), rel=1e-6)


def test_mean_series_failure_is_explicit():
    # alternating coefficients of C(alpha-1, j) decay too slowly for tiny 1/beta
    with pytest.raises(SeriesConvergenceError):
        ew_mean(EwParams(0.01, 1e3, 1.0), method="series")
    assert ew_mean(EwParams(0.01, 1e3, 1.0)) == pytest.approx(ew_mean(EwParams(0.01, 1e3, 1.0), "quadrature"))


def test_mean_unknown_method():
    with pytest.raises(DomainError):
        ew_mean(EwParams(1, 1, 1), method="monte-carlo")


@pytest.mark.parametrize("sigma2", [0.01, 0.05, 0.25, 1.0, 2.0])
def test_fit_has_unit_mean_by_density_quadrature(sigma2):
    p = fit_from_scintillation(sigma2)
    assert moment_by_density(p, 1) == pytest.approx(1.0, abs=0.02)
    assert ew_mean(p) == pytest.approx(1.0, abs=0.02)


# --- fit -------------------------------------------------------------------

@pytest.mark.parametrize("sigma2", [FIT_RANGE[0], 1e-3, FIT_RANGE[1]])
def test_fit_edges_finite_positive(sigma2):
    p = fit_from_scintillation(sigma2)
    assert all(math.isfinite(v) and v > 0 for v in p.astuple())
    assert type(p.alpha) is float


@pytest.mark.parametrize("sigma2", [-1.0, 0.0, FIT_RANGE[0] / 2, 5.01, float("nan")])
def test_fit_out_of_range(sigma2):
    with pytest.raises(UnsupportedRangeError):
        fit_from_scintillation(sigma2)


def test_fit_alpha_differs_between_regimes():
    a, b = fit_from_scintillation(0.1), fit_from_scintillation(1.0)
    assert a.alpha != b.alpha
    assert ew_mean(a) == pytest.approx(1.0, abs=0.02)
    assert ew_mean(b) == pytest.approx(1.0, abs=0.02)


def test_fit_known_values():
    # alpha and beta from the closed-form expressions evaluated with mpmath
    p = fit_from_scintillation(0.25)
    assert p.alpha == pytest.approx(4.778550985, rel=1e-9)
    assert p.beta == pytest.approx(0.9075512217, rel=1e-9)


@settings(max_examples=40, deadline=None)
@given(st.floats(1e-5, 5.0))
def test_fit_unit_mean_property(sigma2):
    assert ew_mean(fit_from_scintillation(sigma2)) == pytest.approx(1.0, abs=0.02)


@pytest.mark.parametrize("sigma2", [1.5e-3, 1.8382739e-3, 2.9725576e-3, 5.7856062e-3, 0.01, 0.05])
def test_fit_reproduces_weak_scintillation(sigma2):
    p = fit_from_scintillation(sigma2)
    m1, m2 = moment_by_density(p, 1), moment_by_density(p, 2)
    assert m2 / m1 ** 2 - 1 == pytest.approx(sigma2, rel=0.10)


@pytest.mark.xfail(strict=True, reason="the fit holds its variance within 10% only on about [1.2e-3, 0.055]")
@pytest.mark.parametrize("sigma2", [6.5216713e-4, 0.25, 1.0, 2.0])
def test_fit_reproduces_moderate_scintillation(sigma2):
    p = fit_from_scintillation(sigma2)
    m1, m2 = moment_by_density(p, 1), moment_by_density(p, 2)
    assert m2 / m1 ** 2 - 1 == pytest.approx(sigma2, rel=0.10)
