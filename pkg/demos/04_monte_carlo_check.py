"""Monte-Carlo cross-check of the closed-form outage probabilities.

Runs 10^6 trials per point (use STRATOLINK_THREADS to cap workers) and
prints the z-score of each estimate against the closed form.
"""

from stratolink import Scenario, simulate_outage
from stratolink.scenario import closed_form_outage

s = Scenario().with_regime("moderate")
print(f"{'dB':>4} {'strategy':>8} {'closed form':>12} {'monte carlo':>12} {'std err':>9} {'z':>6}")
for p, g in enumerate((6.0, 7.0, 8.0, 9.0, 10.0)):
    for strategy in ("ss1", "ss2"):
        exact = closed_form_outage(s, strategy, g).value
        est = simulate_outage(s, strategy, g, trials=1_000_000, point_index=p)
        z = (est.value - exact) / est.std_error if est.std_error else float("nan")
        print(f"{g:4.0f} {strategy:>8} {exact:12.4e} {est.value:12.4e} {est.std_error:9.2e} {z:6.2f}")
