"""Outage at 10 dB as the HAPS moves between 18 and 30 km.

A higher platform leaves less turbulence above it, so scintillation and
outage fall quickly. The second table plugs in an altitude-dependent
stratospheric extinction (illustrative numbers, not measured data).
"""

from dataclasses import replace

from stratolink import Scenario
from stratolink.cli import run_altitude_sweep
from stratolink.scheduling import Strategy

altitudes = (18, 20, 22, 24, 26, 28, 30)
strategies = [Strategy.SS1, Strategy.SS2]


def show(title, scenario):
    print(title)
    for row in run_altitude_sweep(scenario, strategies, altitudes, 10.0):
        print(f"  {row.h_haps_km:5.0f} km  {row.strategy:>5}  {row.estimate.value:.3e}")


show("moderate regime preset", Scenario())
table = ((18.0, 2e-4), (22.0, 1e-4), (25.0, 3e-4), (30.0, 5e-5))
show("\nwith an altitude table for the stratospheric extinction", replace(Scenario(), theta2_table=table))
