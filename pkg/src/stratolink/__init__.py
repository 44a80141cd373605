"""Outage analysis of HAPS-relayed optical inter-satellite links."""

from .analytics import (
    HopLink,
    Method,
    OutageEstimate,
    SeriesControl,
    diversity_gain_formula,
    empirical_slope,
    outage_ss1,
    outage_ss2,
    snr_cdf_direct,
    snr_cdf_series,
)
from .atmosphere import (
    AttenuationCoefficients,
    OpticalBeam,
    TurbulenceProfile,
    VolcanicRegime,
    cn2_at,
    scintillation_downlink,
    scintillation_uplink,
    transmittance,
)
from .errors import (
    ConvergenceError,
    DomainError,
    QuadratureError,
    ScenarioParseError,
    SeriesConvergenceError,
    StratolinkError,
    UnsupportedRangeError,
)
from .fading import EwParams, ew_cdf, ew_mean, ew_pdf, ew_quantile, ew_sample, fit_from_scintillation
from .geometry import PathGeometry, slant_path_length
from .montecarlo import TrialOutcome, simulate_outage, sweep
from .scenario import LinkSet, Scenario, closed_form_sweep, prepare
from .scheduling import (
    CandidateSatellite,
    Strategy,
    scheduled_params_direct,
    scheduled_params_ss1,
    select_max_snr,
    select_min_zenith,
)

__version__ = "0.1.0"
