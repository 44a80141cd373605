"""Closed-form SNR statistics, outage probabilities and diversity orders.

For a hop with average SNR ``gb``, attenuation ``g`` and EW parameters
``(alpha, beta, eta)`` the instantaneous SNR ``gamma = gb * (g f)^2`` has CDF::

    F(gamma) = (1 - exp(-x^(beta/2)))^alpha,   x = gamma / ((eta g)^2 gb)

and, by the binomial theorem, the equivalent series::

    F(gamma) = sum_{r>=0} C(alpha, r) (-1)^r exp(-r x^(beta/2))

With decode-and-forward relaying the end-to-end SNR is the minimum of the two
hop SNRs, so the outage probability at threshold ``gamma_th`` is
``1 - (1 - F_AH)(1 - F_HB)``. Under SS-I the second hop is the scheduled
satellite's; under SS-II it is the maximum over N candidates, whose CDF is the
product of the candidate CDFs.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, replace
from typing import Optional, Sequence

import numpy as np

from .errors import DomainError, SeriesConvergenceError
from .fading import EwParams
from .scheduling import Strategy
from .special import binomial_series_tail


class Method(enum.Enum):
    CLOSED_FORM = "closed-form"
    SERIES = "series"
    MONTE_CARLO = "monte-carlo"


@dataclass(frozen=True)
class HopLink:
    avg_snr: float
    attenuation_g: float
    ew: EwParams

    def __post_init__(self):
        if not (self.avg_snr > 0):
            raise DomainError(f"avg_snr must be positive, got {self.avg_snr}")
        if not (0.0 < self.attenuation_g <= 1.0):
            raise DomainError(f"attenuation_g must lie in (0, 1], got {self.attenuation_g}")

    @property
    def snr_scale(self) -> float:
        """``(eta g)^2 gb``, the SNR at which the normalized argument is one."""
        return (self.ew.eta * self.attenuation_g) ** 2 * self.avg_snr

    def with_avg_snr(self, avg_snr: float) -> HopLink:
        return replace(self, avg_snr=avg_snr)


@dataclass(frozen=True)
class SeriesControl:
    """Truncation policy for the binomial series.

    Summation stops once a term falls below ``rel_tol`` times the partial
    sum. If ``max_terms`` terms are not enough and ``tail`` is set, the
    remainder is added by Euler-Maclaurin summation of the term function;
    otherwise :class:`SeriesConvergenceError` is raised.
    """

    rel_tol: float = 1e-12
    max_terms: int = 200
    tail: bool = True

    def __post_init__(self):
        if not (self.rel_tol > 0):
            raise DomainError("rel_tol must be positive")
        if self.max_terms < 1:
            raise DomainError("max_terms must be at least 1")


@dataclass(frozen=True)
class OutageEstimate:
    value: float
    method: Method
    std_error: Optional[float] = None
    terms_used: Optional[int] = None
    trials: Optional[int] = None

    def __post_init__(self):
        if not (0.0 <= self.value <= 1.0):
            raise DomainError(f"outage probability must lie in [0, 1], got {self.value}")
        if self.std_error is not None and self.std_error < 0:
            raise DomainError("std_error must be non-negative")


def _check_gamma(gamma):
    g = np.asarray(gamma, dtype=float)
    if np.any(g < 0) or np.any(np.isnan(g)):
        raise DomainError("SNR must be non-negative")
    return g


def _log_t(gamma, hop):
    # log of x^(beta/2)
    with np.errstate(divide="ignore"):
        return 0.5 * hop.ew.beta * np.log(gamma / hop.snr_scale)


def _log_one_minus_exp_neg(log_t):
    # log(1 - exp(-t)) given log t, accurate for tiny and huge t
    log_t = np.asarray(log_t, dtype=float)
    with np.errstate(over="ignore", divide="ignore", invalid="ignore"):
        t = np.exp(log_t)
        small = log_t < -20.0
        safe_t = np.where(small, 1.0, t)
        big = np.log(-np.expm1(-safe_t))
        return np.where(small, log_t - 0.5 * t, big)


def snr_log_cdf(gamma, hop: HopLink):
    """Natural log of the hop SNR CDF; keeps precision deep in the lower tail."""
    g = _check_gamma(gamma)
    value = np.where(g == 0, -np.inf, hop.ew.alpha * _log_one_minus_exp_neg(_log_t(np.where(g == 0, 1.0, g), hop)))
    return float(value) if value.ndim == 0 else value


def snr_log_survival(gamma, hop: HopLink):
    """Natural log of ``1 - F(gamma)``, accurate when F is close to one."""
    g = _check_gamma(gamma)
    log_f = np.asarray(snr_log_cdf(g, hop))
    return _log_one_minus(log_f)


def _log_one_minus(log_f):
    # log(1 - F) from log F: log1p for small F, expm1 when F is near one
    log_f = np.asarray(log_f, dtype=float)
    with np.errstate(divide="ignore"):
        value = np.where(log_f < -math.log(2.0), np.log1p(-np.exp(log_f)), np.log(-np.expm1(log_f)))
    return float(value) if value.ndim == 0 else value


def snr_cdf_direct(gamma, hop: HopLink):
    """Hop SNR CDF in closed form; scalar or array input."""
    value = np.exp(np.asarray(snr_log_cdf(gamma, hop)))
    return float(value) if value.ndim == 0 else value


def snr_cdf_series(gamma: float, hop: HopLink, ctl: SeriesControl = SeriesControl()):
    """Hop SNR CDF by the binomial series.

    Returns
    -------
    (value, terms_used) : (float, int)
        ``terms_used`` counts explicitly summed terms; when the remainder
        estimate was needed it equals ``ctl.max_terms``.
    """
    gamma = float(_check_gamma(gamma))
    if gamma == 0.0:
        return 0.0, 0
    alpha = hop.ew.alpha
    t = math.exp(float(_log_t(gamma, hop)))
    z = math.exp(-t)
    coeff = 1.0  # (-1)^r C(alpha, r)
    power = 1.0  # z^r
    total = 0.0
    for r in range(ctl.max_terms):
        term = coeff * power
        total += term
        if r > alpha and abs(term) <= ctl.rel_tol * abs(total):
            return total, r + 1
        coeff *= -(alpha - r) / (r + 1)
        power *= z
        if coeff == 0.0 or power == 0.0:
            return total, r + 1
    if not ctl.tail:
        raise SeriesConvergenceError(
            f"CDF series not converged after {ctl.max_terms} terms "
            f"(alpha={alpha:g}, t={t:.3e})",
            terms_used=ctl.max_terms, last_term=term,
        )
    if ctl.max_terms <= alpha + 1:
        raise SeriesConvergenceError(
            f"max_terms={ctl.max_terms} too small for a remainder estimate at alpha={alpha:g}",
            terms_used=ctl.max_terms,
        )
    return total + binomial_series_tail(alpha, t, ctl.max_terms), ctl.max_terms


def _combine(log_survivals) -> float:
    # P = 1 - prod(1 - F_i), evaluated as -expm1(sum log(1 - F_i))
    return float(min(1.0, max(0.0, -math.expm1(math.fsum(log_survivals)))))


def _check_threshold(gamma_th):
    if not (gamma_th > 0):
        raise DomainError(f"gamma_th must be positive, got {gamma_th}")


def _second_hop_log_cdf_ss2(candidates, gamma_th):
    return sum(snr_log_cdf(gamma_th, hop) for hop in candidates)


def outage_ss1(
    hop_ah: HopLink,
    hop_hb_scheduled: HopLink,
    gamma_th: float,
    ctl: Optional[SeriesControl] = None,
    method: Method | str = Method.CLOSED_FORM,
) -> OutageEstimate:
    """Outage probability with the min-zenith satellite on the second hop."""
    _check_threshold(gamma_th)
    method = Method(method)
    if method is Method.SERIES:
        ctl = ctl or SeriesControl()
        fa, na = snr_cdf_series(gamma_th, hop_ah, ctl)
        fb, nb = snr_cdf_series(gamma_th, hop_hb_scheduled, ctl)
        value = 1.0 - (1.0 - fa) * (1.0 - fb)
        return OutageEstimate(min(1.0, max(0.0, value)), Method.SERIES, terms_used=max(na, nb))
    if method is not Method.CLOSED_FORM:
        raise DomainError(f"outage_ss1 cannot compute method {method.value!r}")
    value = _combine([snr_log_survival(gamma_th, hop_ah), snr_log_survival(gamma_th, hop_hb_scheduled)])
    return OutageEstimate(value, Method.CLOSED_FORM)


def outage_ss2(
    hop_ah: HopLink,
    candidates: Sequence[HopLink],
    gamma_th: float,
    ctl: Optional[SeriesControl] = None,
    method: Method | str = Method.CLOSED_FORM,
) -> OutageEstimate:
    """Outage probability when the max-SNR candidate carries the second hop."""
    _check_threshold(gamma_th)
    if len(candidates) == 0:
        raise DomainError("candidate list must not be empty")
    method = Method(method)
    if method is Method.SERIES:
        ctl = ctl or SeriesControl()
        fa, terms = snr_cdf_series(gamma_th, hop_ah, ctl)
        product = 1.0
        for hop in candidates:
            fk, nk = snr_cdf_series(gamma_th, hop, ctl)
            product *= fk
            terms = max(terms, nk)
        value = 1.0 - (1.0 - fa) * (1.0 - product)
        return OutageEstimate(min(1.0, max(0.0, value)), Method.SERIES, terms_used=terms)
    if method is not Method.CLOSED_FORM:
        raise DomainError(f"outage_ss2 cannot compute method {method.value!r}")
    log_surv_b = _log_one_minus(_second_hop_log_cdf_ss2(candidates, gamma_th))
    value = _combine([snr_log_survival(gamma_th, hop_ah), log_surv_b])
    return OutageEstimate(value, Method.CLOSED_FORM)


def outage(strategy, hop_ah, scheduled, candidates, gamma_th, ctl=None, method=Method.CLOSED_FORM):
    """Dispatch to :func:`outage_ss1` or :func:`outage_ss2`."""
    if Strategy.parse(strategy) is Strategy.SS1:
        return outage_ss1(hop_ah, scheduled, gamma_th, ctl, method)
    return outage_ss2(hop_ah, candidates, gamma_th, ctl, method)


def diversity_gain_formula(strategy, alpha_ah: float, betas) -> float:
    """Diversity order predicted from EW shape parameters.

    SS-I: ``min(alpha_AH, beta_K)`` for the scheduled satellite's beta.
    SS-II: ``sum_k min(alpha_AH, beta_k)`` over all candidates.
    """
    betas = np.atleast_1d(np.asarray(betas, dtype=float))
    if alpha_ah <= 0 or betas.size == 0 or np.any(betas <= 0):
        raise DomainError("diversity gain needs positive alpha and at least one positive beta")
    if Strategy.parse(strategy) is Strategy.SS1:
        if betas.size != 1:
            raise DomainError("SS-I takes exactly one (scheduled) beta")
        return float(min(alpha_ah, betas[0]))
    return float(sum(min(alpha_ah, b) for b in betas))


def empirical_slope(outage_curve) -> float:
    """Log-log decay rate of an outage curve.

    Fits ``-log10 P`` against ``log10 gb`` by least squares over the
    highest-SNR half of the points (at least two).

    Parameters
    ----------
    outage_curve : sequence of (gb_linear, P)
    """
    pts = np.asarray(outage_curve, dtype=float)
    if pts.ndim != 2 or pts.shape[1] != 2 or pts.shape[0] < 2:
        raise DomainError("need at least two (average SNR, outage) pairs")
    snr, prob = pts[:, 0], pts[:, 1]
    if np.any(np.diff(snr) <= 0) or np.any(snr <= 0):
        raise DomainError("average SNR values must be positive and strictly increasing")
    if np.any(prob <= 0) or np.any(prob > 1):
        raise DomainError("outage values must lie in (0, 1] for a log-log slope")
    keep = max(2, math.ceil(len(snr) / 2))
    x = np.log10(snr[-keep:])
    y = -np.log10(prob[-keep:])
    slope, _ = np.polyfit(x, y, 1)
    return float(slope)
