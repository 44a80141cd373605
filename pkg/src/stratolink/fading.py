"""Exponentiated-Weibull irradiance fading.

The EW law has CDF ``F(I) = (1 - exp(-(I/eta)^beta))^alpha`` with two shape
parameters ``alpha``, ``beta`` and a scale ``eta``. Parameters for a given
scintillation index come from the closed-form aperture-averaged fit::

    alpha = 7.220 s^(1/3) / Gamma(2.487 s^(1/6) - 0.104)
    beta  = (alpha s)^(-6/11)
    eta   = 1 / (alpha Gamma(1 + 1/beta) g1(alpha, beta))

where ``s`` is the scintillation index and ``g1`` normalizes the mean
irradiance to one.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np
from scipy import integrate
from scipy.special import gamma as gamma_fn

from .errors import DomainError, SeriesConvergenceError, UnsupportedRangeError

#: Scintillation indices accepted by :func:`fit_from_scintillation`.
FIT_RANGE = (1e-6, 5.0)

SERIES_MAX_TERMS = 200


@dataclass(frozen=True)
class EwParams:
    alpha: float
    beta: float
    eta: float

    def __post_init__(self):
        for name in ("alpha", "beta", "eta"):
            value = getattr(self, name)
            if not (value > 0 and math.isfinite(value)):
                raise DomainError(f"EW {name} must be positive and finite, got {value}")

    def astuple(self):
        return (self.alpha, self.beta, self.eta)


def _as_array(x):
    arr = np.asarray(x, dtype=float)
    return arr, arr.ndim == 0


def _out(arr, scalar):
    return float(arr) if scalar else arr


def ew_cdf(irradiance, p: EwParams):
    """CDF of the EW law; accepts scalars or arrays."""
    x, scalar = _as_array(irradiance)
    if np.any(x < 0) or np.any(np.isnan(x)):
        raise DomainError("irradiance must be non-negative")
    with np.errstate(over="ignore"):
        z = (x / p.eta) ** p.beta
        value = (-np.expm1(-z)) ** p.alpha
    return _out(value, scalar)


def ew_pdf(irradiance, p: EwParams):
    """Density of the EW law for strictly positive irradiance."""
    x, scalar = _as_array(irradiance)
    if np.any(x <= 0) or np.any(np.isnan(x)):
        raise DomainError("irradiance must be strictly positive for the density")
    a, b, e = p.alpha, p.beta, p.eta
    with np.errstate(over="ignore", under="ignore", invalid="ignore", divide="ignore"):
        r = x / e
        z = r ** b
        value = a * b / e * r ** (b - 1.0) * np.exp(-z) * (-np.expm1(-z)) ** (a - 1.0)
        # far tail: exp(-z) underflows while the last factor may overflow
        value = np.where(np.exp(-z) == 0.0, 0.0, value)
    return _out(value, scalar)


def ew_quantile(u, p: EwParams):
    """Inverse CDF, ``eta * (-ln(1 - u^(1/alpha)))^(1/beta)`` for ``u`` in [0, 1)."""
    q, scalar = _as_array(u)
    if np.any(q < 0) or np.any(q >= 1) or np.any(np.isnan(q)):
        raise DomainError("quantile level must lie in [0, 1)")
    with np.errstate(divide="ignore"):
        # -ln(1 - w) with w = u^(1/alpha): log1p for small w, expm1 as w -> 1
        log_w = np.log(q) / p.alpha
        w = np.exp(log_w)
        depth = np.where(w < 0.5, -np.log1p(-w), -np.log(-np.expm1(log_w)))
        value = p.eta * depth ** (1.0 / p.beta)
    return _out(value, scalar)


def ew_sample(rng, p: EwParams, size=None):
    """Draw EW irradiances by inverse-transform sampling.

    ``rng`` is a :class:`numpy.random.Generator` (or anything with a
    compatible ``random`` method); each draw consumes one uniform.
    """
    return ew_quantile(rng.random(size), p)


def _g1_series(alpha, beta, rel_tol=1e-12, max_terms=SERIES_MAX_TERMS):
    # sum_j (-1)^j C(alpha-1, j) (1+j)^(-1-1/beta)
    x = alpha - 1.0
    power = -1.0 - 1.0 / beta
    coeff = 1.0
    total = 0.0
    for j in range(max_terms):
        term = (-1.0) ** j * coeff * (1.0 + j) ** power
        total += term
        if abs(term) < rel_tol * abs(total):
            return total, j + 1
        coeff *= (x - j) / (j + 1)
        if coeff == 0.0:
            return total, j + 1
    raise SeriesConvergenceError(
        f"g1 series for alpha={alpha}, beta={beta} not converged after {max_terms} terms",
        terms_used=max_terms, last_term=term,
    )


def _mean_by_quadrature(p: EwParams) -> float:
    # E[I] = int_0^1 Q(u) du with u = v^alpha, so Q = eta (-ln(1 - v))^(1/beta)
    a, inv_b = p.alpha, 1.0 / p.beta

    def integrand(v):
        return a * v ** (a - 1.0) * (-math.log1p(-v)) ** inv_b

    with warnings.catch_warnings():
        warnings.simplefilter("ignore", integrate.IntegrationWarning)
        value, _ = integrate.quad(integrand, 0.0, 1.0, epsabs=0.0, epsrel=1e-12, limit=400)
    return p.eta * value


def ew_mean(p: EwParams, method: str = "auto") -> float:
    """Mean irradiance ``E[I]``.

    ``method="series"`` sums
    ``eta alpha Gamma(1+1/beta) sum_j (-1)^j C(alpha-1, j) (1+j)^(-1-1/beta)``
    to a relative tolerance of 1e-10 and raises
    :class:`SeriesConvergenceError` if that takes more than 200 terms;
    ``"quadrature"`` integrates the quantile function; ``"auto"`` tries the
    series and falls back to quadrature.
    """
    if method not in ("auto", "series", "quadrature"):
        raise DomainError(f"unknown method {method!r}")
    if method != "quadrature":
        try:
            g1, _ = _g1_series(p.alpha, p.beta, rel_tol=1e-10)
            return p.eta * p.alpha * gamma_fn(1.0 + 1.0 / p.beta) * g1
        except SeriesConvergenceError:
            if method == "series":
                raise
    return _mean_by_quadrature(p)


def _g1(alpha, beta):
    try:
        return _g1_series(alpha, beta)[0]
    except SeriesConvergenceError:
        unit = EwParams(alpha, beta, 1.0)
        return _mean_by_quadrature(unit) / (alpha * gamma_fn(1.0 + 1.0 / beta))


def fit_from_scintillation(sigma2: float) -> EwParams:
    """EW parameters for scintillation index ``sigma2`` with unit mean irradiance.

    Raises
    ------
    UnsupportedRangeError
        If ``sigma2`` lies outside :data:`FIT_RANGE`.
    """
    lo, hi = FIT_RANGE
    if not (lo <= sigma2 <= hi):
        raise UnsupportedRangeError(
            f"scintillation index {sigma2!r} outside supported fit range [{lo:g}, {hi:g}]"
        )
    alpha = 7.220 * sigma2 ** (1.0 / 3.0) / gamma_fn(2.487 * sigma2 ** (1.0 / 6.0) - 0.104)
    beta = (alpha * sigma2) ** (-6.0 / 11.0)
    eta = 1.0 / (alpha * gamma_fn(1.0 + 1.0 / beta) * _g1(alpha, beta))
    return EwParams(float(alpha), float(beta), float(eta))
