"""Per-hop link budget for the reference constellation.

Walks through the slant path, Beer-Lambert transmittance and scintillation
index of every hop, then shows which candidate SS-I would schedule.
"""

from stratolink import Scenario, VolcanicRegime, prepare, slant_path_length, transmittance

s = Scenario()
links = prepare(s)

# %% Slant paths and transmittance per regime
print(f"{'hop':>10} {'zenith':>6} {'L [km]':>9} " + " ".join(f"{r.name.lower():>10}" for r in VolcanicRegime))
hops = [("uplink", s.zenith_ah_deg)] + [(f"cand {k}", z) for k, z in enumerate(s.zenith_b_deg, start=1)]
for name, z in hops:
    L_km = slant_path_length(s.geometry(z)) / 1e3
    gs = [transmittance(r.coefficients(s.rho_fraction), L_km) for r in VolcanicRegime]
    print(f"{name:>10} {z:6.1f} {L_km:9.1f} " + " ".join(f"{g:10.3e}" for g in gs))

# %% Scintillation and EW fits (independent of the volcanic regime)
print()
print(f"{'hop':>10} {'sigma2':>10} {'alpha':>8} {'beta':>8} {'eta':>8}")
rows = [("uplink", links.uplink_sigma2, links.uplink.ew)]
rows += [(f"cand {k}", s2, h.ew) for k, (s2, h) in enumerate(zip(links.candidate_sigma2, links.candidates), start=1)]
for name, s2, ew in rows:
    print(f"{name:>10} {s2:10.3e} {ew.alpha:8.4f} {ew.beta:8.2f} {ew.eta:8.4f}")

print(f"\nSS-I schedules candidate {links.scheduled_index} "
      f"(zenith {s.zenith_b_deg[links.scheduled_index - 1]:g} deg)")
