"""Series helpers: generalized binomial coefficients and binomial-series tails."""

from __future__ import annotations

import math
import warnings

import numpy as np
from scipy import integrate, special


def generalized_binomials(x: float, n: int) -> np.ndarray:
    """Return ``C(x, j)`` for ``j = 0..n-1`` and real ``x``.

    Uses the product recurrence ``C(x, j+1) = C(x, j) * (x - j) / (j + 1)``,
    which stays finite for every real ``x`` (no Gamma poles).
    """
    out = np.empty(n)
    c = 1.0
    for j in range(n):
        out[j] = c
        c *= (x - j) / (j + 1)
    return out


def binomial_series_tail(alpha: float, t: float, start: int) -> float:
    """Remainder ``sum_{r >= start} C(alpha, r) (-1)^r exp(-r t)``.

    For non-integer ``alpha`` and ``r > alpha`` the summand extends to the
    smooth function ``Gamma(r - alpha) / (Gamma(-alpha) Gamma(r + 1)) e^{-r t}``
    of real ``r``, so the remainder is evaluated by Euler-Maclaurin summation:
    the integral from ``start`` to infinity plus endpoint corrections up to
    the third derivative. ``start`` should exceed ``alpha + 1``; with
    ``start`` in the hundreds the neglected fifth-derivative term is below
    1e-13 of the first omitted summand.
    """
    if float(alpha).is_integer() and alpha >= 0:
        return 0.0
    if start <= alpha + 1:
        raise ValueError("tail start must exceed alpha + 1")
    norm = special.rgamma(-alpha)

    def summand(r):
        # poch(r + 1, -alpha - 1) = Gamma(r - alpha) / Gamma(r + 1); unlike a
        # gammaln difference it stays accurate for r far beyond 1e15
        return norm * special.poch(r + 1.0, -alpha - 1.0) * math.exp(-r * t)

    m = float(start)
    head = summand(m)
    if head == 0.0:
        return 0.0
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", integrate.IntegrationWarning)
        # r = m e^v keeps the algebraic decay and the exp(-r t) cutoff, which
        # sits near r = 1/t, on a finite smooth interval whatever t is
        v_max = math.log(max(m, 60.0 / t) / m) + 1.0 if t > 0 else 700.0
        integral, _ = integrate.quad(
            lambda v: m * math.exp(v) * summand(m * math.exp(v)), 0.0, v_max,
            epsabs=0.0, epsrel=1e-13, limit=500,
        )
    d1 = special.psi(m - alpha) - special.psi(m + 1.0) - t
    d2 = special.polygamma(1, m - alpha) - special.polygamma(1, m + 1.0)
    d3 = special.polygamma(2, m - alpha) - special.polygamma(2, m + 1.0)
    first = head * d1
    third = head * (d1 ** 3 + 3.0 * d1 * d2 + d3)
    return integral + head / 2.0 - first / 12.0 + third / 720.0
