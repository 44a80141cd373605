"""Closed-form outage versus average SNR for both strategies and all regimes.

The table mirrors the usual outage-versus-SNR figure: rows are average SNR
in dB, columns are (regime, strategy) pairs.
"""

import numpy as np

from stratolink import Scenario, closed_form_sweep

grid = np.arange(0.0, 61.0, 4.0)
columns = {}
for regime in ("moderate", "high", "extreme"):
    s = Scenario(gamma_bar_db=tuple(grid)).with_regime(regime)
    for strategy in ("ss1", "ss2"):
        columns[f"{regime[:3]}/{strategy}"] = [est.value for _, est in closed_form_sweep(s, strategy)]

print(f"{'dB':>5} " + " ".join(f"{name:>11}" for name in columns))
for i, g in enumerate(grid):
    print(f"{g:5.0f} " + " ".join(f"{col[i]:11.3e}" for col in columns.values()))
