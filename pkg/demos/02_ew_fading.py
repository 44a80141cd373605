"""Exponentiated-Weibull fading: fit, sample, and compare with the CDF.

Prints an empirical-versus-analytic CDF table for a weak and a moderate
scintillation index, plus the sample mean that the fit normalizes to one.
"""

import numpy as np

from stratolink import ew_cdf, ew_mean, ew_sample, fit_from_scintillation

rng = np.random.default_rng(7)

for sigma2 in (1e-3, 0.25):
    p = fit_from_scintillation(sigma2)
    x = ew_sample(rng, p, 200_000)
    print(f"sigma2={sigma2:g}: alpha={p.alpha:.4f} beta={p.beta:.4f} eta={p.eta:.4f}")
    print(f"  E[I] series={ew_mean(p):.6f}  sample={x.mean():.6f}  sample var={x.var():.4g}")
    for q in (0.01, 0.1, 0.5, 0.9, 0.99):
        level = np.quantile(x, q)
        print(f"  I={level:8.5f}  empirical F={q:.2f}  analytic F={ew_cdf(level, p):.4f}")
    print()
