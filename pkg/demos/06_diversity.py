"""Diversity order: the literal shape-parameter formula against measured slopes.

The measured log-log slope of the closed-form curve is compared with the
min(alpha, beta) formula and with alpha*beta/2 of the weakest hop.
"""

import numpy as np

from stratolink import Scenario, diversity_gain_formula, empirical_slope, prepare
from stratolink.scenario import closed_form_outage, db_to_linear

s = Scenario()
links = prepare(s)
up = links.uplink.ew
grid = np.arange(30.0, 51.0, 2.0)

for strategy in ("ss1", "ss2"):
    curve = [(float(db_to_linear(g)), closed_form_outage(s, strategy, g).value) for g in grid]
    betas = [links.scheduled.ew.beta] if strategy == "ss1" else [h.ew.beta for h in links.candidates]
    literal = diversity_gain_formula(strategy, up.alpha, betas)
    second = links.scheduled.ew if strategy == "ss1" else None
    hop_orders = [up.alpha * up.beta / 2]
    if second is not None:
        hop_orders.append(second.alpha * second.beta / 2)
    print(f"{strategy}: measured slope {empirical_slope(curve):.2f}, literal formula {literal:.3f}, "
          f"weakest-hop alpha*beta/2 {min(hop_orders):.2f}")
