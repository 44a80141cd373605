"""Experiment description and the derived per-hop link parameters.

A :class:`Scenario` holds configuration values in the units people write them
in (km, degrees, nm, dB). :func:`prepare` turns it into a :class:`LinkSet`:
slant paths, attenuation, scintillation indices and EW fits for the uplink
and every candidate downlink. The defaults reproduce the reference setup of a
500 km constellation served by a 22 km HAPS.
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass, field, replace
from typing import Optional, Sequence

import numpy as np

from .analytics import HopLink, Method, OutageEstimate, SeriesControl, outage
from .atmosphere import (
    MESOSPHERIC_THETA,
    AttenuationCoefficients,
    OpticalBeam,
    TurbulenceProfile,
    VolcanicRegime,
    scintillation_downlink,
    scintillation_uplink,
    transmittance,
)
from .errors import DomainError
from .fading import EwParams, fit_from_scintillation
from .geometry import PathGeometry, slant_path_length
from .scheduling import (
    CandidateSatellite,
    Strategy,
    scheduled_params_direct,
    scheduled_params_ss1,
    select_min_zenith,
)

DEFAULT_ZENITHS_DEG = (81.0, 73.0, 66.0, 77.0, 61.0)
DEFAULT_GAMMA_BAR_DB = tuple(float(x) for x in range(0, 21, 2))
DEFAULT_TRIALS = 10_000_000
DEFAULT_SEED = 20210901

SS1_RULES = ("direct", "extrema")


def db_to_linear(x_db):
    return 10.0 ** (np.asarray(x_db, dtype=float) / 10.0)


def linear_to_db(x):
    return 10.0 * np.log10(x)


@dataclass(frozen=True)
class Scenario:
    """Full experiment description.

    ``theta2_per_km`` overrides the volcanic ``regime`` preset, and
    ``theta2_table`` (pairs of HAPS altitude in km and stratospheric
    extinction in km^-1, interpolated linearly) overrides both.
    ``ss1_rule`` selects how the SS-I hop's EW parameters are formed:
    ``"direct"`` uses the min-zenith candidate's own fit, ``"extrema"``
    takes componentwise extremes over all candidates.
    """

    h_sat_km: float = 500.0
    h_haps_km: float = 22.0
    zenith_ah_deg: float = 70.0
    zenith_b_deg: tuple = DEFAULT_ZENITHS_DEG
    regime: Optional[VolcanicRegime] = VolcanicRegime.MODERATE
    theta1_per_km: float = MESOSPHERIC_THETA
    theta2_per_km: Optional[float] = None
    rho_fraction: float = 0.1
    theta2_table: Optional[tuple] = None
    wavelength_nm: float = 1550.0
    aperture_m: float = 0.1
    v_g_mps: float = 60.0
    ground_A: float = 1.7e-14
    gamma_bar_db: tuple = DEFAULT_GAMMA_BAR_DB
    gamma_th_db: float = 7.0
    trials: int = DEFAULT_TRIALS
    seed: int = DEFAULT_SEED
    ss1_rule: str = "direct"
    quad_tol: float = 1e-8

    def __post_init__(self):
        # normalize sequences so the dataclass stays hashable
        object.__setattr__(self, "zenith_b_deg", tuple(float(z) for z in self.zenith_b_deg))
        object.__setattr__(self, "gamma_bar_db", tuple(float(g) for g in self.gamma_bar_db))
        if self.theta2_table is not None:
            table = tuple((float(h), float(t)) for h, t in self.theta2_table)
            object.__setattr__(self, "theta2_table", table)
        self._validate()

    def _validate(self):
        if not (self.h_haps_km > 0):
            raise DomainError(f"geometry.h_haps_km must be positive, got {self.h_haps_km}")
        if not (self.h_sat_km > self.h_haps_km):
            raise DomainError(
                f"geometry.h_sat_km ({self.h_sat_km}) must exceed geometry.h_haps_km ({self.h_haps_km})"
            )
        for name, z in [("geometry.zenith_ah_deg", self.zenith_ah_deg)] + [
            (f"geometry.zenith_b_deg[{i}]", z) for i, z in enumerate(self.zenith_b_deg)
        ]:
            if not (0.0 <= z < 90.0):
                raise DomainError(f"{name} must lie in [0, 90) degrees, got {z}")
        if len(self.zenith_b_deg) == 0:
            raise DomainError("geometry.zenith_b_deg must list at least one candidate")
        if self.theta2_per_km is None and self.regime is None and self.theta2_table is None:
            raise DomainError("atmosphere needs a regime, theta2_per_km or an altitude table")
        if self.theta1_per_km < 0 or (self.theta2_per_km is not None and self.theta2_per_km < 0):
            raise DomainError("atmosphere extinction coefficients must be non-negative")
        if self.theta2_table is not None:
            hs = [h for h, _ in self.theta2_table]
            if len(hs) < 1 or any(b <= a for a, b in zip(hs, hs[1:])):
                raise DomainError("atmosphere.theta2_table altitudes must be strictly increasing")
            if any(t < 0 for _, t in self.theta2_table):
                raise DomainError("atmosphere.theta2_table extinction values must be non-negative")
        if not (0.0 <= self.rho_fraction <= 1.0):
            raise DomainError(f"atmosphere.rho_fraction must lie in [0, 1], got {self.rho_fraction}")
        if not (self.wavelength_nm > 0):
            raise DomainError("beam.wavelength_nm must be positive")
        if not (self.aperture_m > 0):
            raise DomainError("beam.aperture_m must be positive")
        if not (self.v_g_mps > 0):
            raise DomainError("turbulence.v_g_mps must be positive")
        if not (self.ground_A > 0):
            raise DomainError("turbulence.ground_A must be positive")
        if not all(math.isfinite(g) for g in self.gamma_bar_db) or not math.isfinite(self.gamma_th_db):
            raise DomainError("run SNR values must be finite")
        if int(self.trials) != self.trials or self.trials < 1:
            raise DomainError(f"run.trials must be a positive integer, got {self.trials}")
        if int(self.seed) != self.seed or not (0 <= self.seed < 2 ** 64):
            raise DomainError("run.seed must be an integer in [0, 2^64)")
        if self.ss1_rule not in SS1_RULES:
            raise DomainError(f"ss1_rule must be one of {SS1_RULES}, got {self.ss1_rule!r}")
        if not (0 < self.quad_tol <= 1e-2):
            raise DomainError("quad_tol must lie in (0, 1e-2]")

    @property
    def n_candidates(self) -> int:
        return len(self.zenith_b_deg)

    @property
    def gamma_th(self) -> float:
        return float(db_to_linear(self.gamma_th_db))

    @property
    def beam(self) -> OpticalBeam:
        return OpticalBeam(self.wavelength_nm * 1e-9, self.aperture_m)

    @property
    def turbulence(self) -> TurbulenceProfile:
        return TurbulenceProfile(self.v_g_mps, self.ground_A)

    def theta_strato(self) -> float:
        if self.theta2_table is not None:
            hs, ts = zip(*self.theta2_table)
            return float(np.interp(self.h_haps_km, hs, ts))
        if self.theta2_per_km is not None:
            return float(self.theta2_per_km)
        return self.regime.theta_strato

    def attenuation(self) -> AttenuationCoefficients:
        return AttenuationCoefficients(self.theta1_per_km, self.theta_strato(), self.rho_fraction)

    def geometry(self, zenith_deg: float) -> PathGeometry:
        return PathGeometry.from_degrees(self.h_sat_km * 1e3, self.h_haps_km * 1e3, zenith_deg)

    def with_regime(self, regime: VolcanicRegime | str) -> Scenario:
        if isinstance(regime, str):
            regime = VolcanicRegime.parse(regime)
        return replace(self, regime=regime, theta2_per_km=None, theta2_table=None)


@dataclass(frozen=True)
class LinkSet:
    """Per-hop channel parameters at unit average SNR.

    Attributes
    ----------
    uplink : HopLink
        Satellite A to HAPS.
    candidates : tuple of HopLink
        HAPS to each region-B satellite, in scenario order.
    scheduled : HopLink
        The SS-I hop (min-zenith candidate's attenuation with parameters
        from the scenario's ``ss1_rule``).
    scheduled_index : int
        1-based index of the min-zenith candidate.
    """

    uplink: HopLink
    candidates: tuple
    scheduled: HopLink
    scheduled_index: int
    uplink_sigma2: float
    candidate_sigma2: tuple
    satellites: tuple = field(repr=False)

    def at(self, gamma_bar_db: float):
        """(uplink, scheduled, candidates) with both hops at average SNR ``gamma_bar_db``."""
        gb = float(db_to_linear(gamma_bar_db))
        return (
            self.uplink.with_avg_snr(gb),
            self.scheduled.with_avg_snr(gb),
            tuple(h.with_avg_snr(gb) for h in self.candidates),
        )


def hop_from_geometry(scenario: Scenario, zenith_deg: float, direction: str):
    """Scintillation index, transmittance and EW fit for one hop.

    ``direction`` is ``"up"`` (satellite to HAPS, aperture averaged) or
    ``"down"`` (HAPS to satellite).
    """
    geom = scenario.geometry(zenith_deg)
    if direction == "up":
        sigma2 = scintillation_uplink(geom, scenario.beam, scenario.turbulence, scenario.quad_tol)
    elif direction == "down":
        sigma2 = scintillation_downlink(geom, scenario.beam, scenario.turbulence, scenario.quad_tol)
    else:
        raise DomainError(f"direction must be 'up' or 'down', got {direction!r}")
    g = transmittance(scenario.attenuation(), slant_path_length(geom) / 1e3)
    if g <= 0.0:
        raise DomainError(f"attenuation underflows to zero at zenith {zenith_deg} deg")
    return sigma2, g, fit_from_scintillation(sigma2)


@functools.lru_cache(maxsize=256)
def prepare(scenario: Scenario) -> LinkSet:
    """Compute geometry, attenuation, scintillation and EW fits for every hop."""
    up_sigma2, up_g, up_ew = hop_from_geometry(scenario, scenario.zenith_ah_deg, "up")
    uplink = HopLink(1.0, up_g, up_ew)
    sats, hops, sigmas = [], [], []
    for k, z in enumerate(scenario.zenith_b_deg, start=1):
        s2, g, ew = hop_from_geometry(scenario, z, "down")
        sigmas.append(s2)
        hops.append(HopLink(1.0, g, ew))
        sats.append(CandidateSatellite(k, math.radians(z), ew, g, 1.0))
    k_star = select_min_zenith(sats)
    if scenario.ss1_rule == "extrema":
        ew_sched = scheduled_params_ss1(sats)
    else:
        ew_sched = scheduled_params_direct(sats)
    scheduled = HopLink(1.0, hops[k_star - 1].attenuation_g, ew_sched)
    if ew_sched == hops[k_star - 1].ew:
        scheduled = hops[k_star - 1]
    return LinkSet(uplink, tuple(hops), scheduled, k_star, up_sigma2, tuple(sigmas), tuple(sats))


def closed_form_outage(
    scenario: Scenario,
    strategy,
    gamma_bar_db: float,
    method: Method | str = Method.CLOSED_FORM,
    ctl: Optional[SeriesControl] = None,
) -> OutageEstimate:
    links = prepare(scenario)
    up, sched, cands = links.at(gamma_bar_db)
    return outage(strategy, up, sched, cands, scenario.gamma_th, ctl=ctl, method=method)


def closed_form_sweep(
    scenario: Scenario,
    strategy,
    grid: Optional[Sequence[float]] = None,
    method: Method | str = Method.CLOSED_FORM,
    ctl: Optional[SeriesControl] = None,
):
    """``[(gamma_bar_db, OutageEstimate), ...]`` over ``grid`` (default: scenario grid)."""
    grid = scenario.gamma_bar_db if grid is None else grid
    strategy = Strategy.parse(strategy)
    return [(float(g), closed_form_outage(scenario, strategy, g, method, ctl)) for g in grid]
