"""Stratospheric attenuation and turbulence strength along a slant path.

Attenuation follows a two-layer Beer-Lambert law: a mesospheric extinction
coefficient acts over a fraction ``rho`` of the path and a stratospheric
(volcanic-aerosol) coefficient over the rest. Coefficients are in km^-1 and
path lengths in km.

Turbulence is described by a Hufnagel-Valley refractive-index structure
profile whose high-altitude term scales with the stratospheric wind speed.
Two scintillation indices are provided:

* :func:`scintillation_uplink` - satellite-to-HAPS hop with aperture averaging
  over a receive aperture of diameter ``D``::

      8.7 k^(7/6) (H - h0)^(5/6) sec^(11/6)(zeta)
          * Re Int_{h0}^{H} Cn2(h) [(a + i u)^(5/6) - a^(5/6)] dh

  with ``a = k D^2 / (16 L)`` and ``u = (h - h0) / (H - h0)``.

* :func:`scintillation_downlink` - HAPS-to-satellite hop::

      2.2 k^(7/6) (H - h0)^(5/6) sec^(11/6)(zeta)
          * Int_{h0}^{H} Cn2(h) (1 - u)^(5/6) u^(5/6) dh

Both integrals run over ``[h_haps, h_sat]``.
"""

from __future__ import annotations

import enum
import math
import warnings
from dataclasses import dataclass
from typing import Callable, Union

import numpy as np
from scipy import integrate

from .errors import DomainError, QuadratureError
from .geometry import PathGeometry, slant_path_length

#: Mesospheric extinction used by every volcanic preset, km^-1.
MESOSPHERIC_THETA = 1e-5

#: Default ground-level Cn2 anchor of the Hufnagel-Valley profile, m^(-2/3).
DEFAULT_GROUND_CN2 = 1.7e-14

#: Evaluation cap for the adaptive rule; QUADPACK spends 21 per subinterval.
MAX_EVALUATIONS = 1_000_000

SIMPSON_PANELS = 10_000


@dataclass(frozen=True)
class AttenuationCoefficients:
    theta_meso: float
    theta_strato: float
    rho_fraction: float = 0.1

    def __post_init__(self):
        if self.theta_meso < 0 or self.theta_strato < 0:
            raise DomainError("extinction coefficients must be non-negative")
        if not (0.0 <= self.rho_fraction <= 1.0):
            raise DomainError(f"rho_fraction must lie in [0, 1], got {self.rho_fraction}")


class VolcanicRegime(enum.Enum):
    """Preset stratospheric extinction levels (km^-1)."""

    MODERATE = 1e-4
    HIGH = 1e-3
    EXTREME = 4e-3

    @property
    def theta_strato(self) -> float:
        return self.value

    def coefficients(self, rho_fraction: float = 0.1) -> AttenuationCoefficients:
        return AttenuationCoefficients(MESOSPHERIC_THETA, self.value, rho_fraction)

    @classmethod
    def parse(cls, name: str) -> VolcanicRegime:
        try:
            return cls[name.strip().upper()]
        except KeyError:
            valid = ", ".join(m.name.lower() for m in cls)
            raise DomainError(f"unknown volcanic regime {name!r} (expected one of {valid})") from None


@dataclass(frozen=True)
class TurbulenceProfile:
    """Hufnagel-Valley Cn2 profile.

    ``wind_speed_vg`` (m/s) replaces the rms upper-atmosphere wind of the
    classic HV5/7 model; ``ground_cn2_A`` is the near-ground anchor.
    """

    wind_speed_vg: float = 60.0
    ground_cn2_A: float = DEFAULT_GROUND_CN2
    model: str = "hufnagel-valley"

    def __post_init__(self):
        if not (self.wind_speed_vg > 0):
            raise DomainError(f"wind_speed_vg must be positive, got {self.wind_speed_vg}")
        if not (self.ground_cn2_A > 0):
            raise DomainError(f"ground_cn2_A must be positive, got {self.ground_cn2_A}")
        if self.model != "hufnagel-valley":
            raise DomainError(f"unsupported turbulence model {self.model!r}")

    def cn2(self, altitude_m):
        h = np.asarray(altitude_m, dtype=float)
        wind = 0.00594 * (self.wind_speed_vg / 27.0) ** 2 * (1e-5 * h) ** 10 * np.exp(-h / 1000.0)
        return wind + 2.7e-16 * np.exp(-h / 1500.0) + self.ground_cn2_A * np.exp(-h / 100.0)


@dataclass(frozen=True)
class OpticalBeam:
    wavelength: float = 1550e-9
    aperture_diameter: float = 0.1

    def __post_init__(self):
        if not (self.wavelength > 0):
            raise DomainError(f"wavelength must be positive, got {self.wavelength}")
        if not (self.aperture_diameter > 0):
            raise DomainError(f"aperture_diameter must be positive, got {self.aperture_diameter}")

    @property
    def wavenumber(self) -> float:
        return 2.0 * math.pi / self.wavelength


Cn2Source = Union[TurbulenceProfile, Callable[[np.ndarray], np.ndarray]]


def transmittance(coeffs: AttenuationCoefficients, path_length_km: float) -> float:
    """Beer-Lambert power transmittance over ``path_length_km``."""
    if path_length_km < 0:
        raise DomainError(f"path length must be non-negative, got {path_length_km}")
    rho = coeffs.rho_fraction
    optical_depth = (
        coeffs.theta_meso * rho * path_length_km
        + coeffs.theta_strato * (1.0 - rho) * path_length_km
    )
    return math.exp(-optical_depth)


def cn2_at(altitude_m, profile: TurbulenceProfile):
    """Refractive-index structure parameter at ``altitude_m``, m^(-2/3).

    Accepts scalars or arrays; returns the same shape.
    """
    h = np.asarray(altitude_m, dtype=float)
    if np.any(h < 0):
        raise DomainError("altitude must be non-negative")
    value = profile.cn2(h)
    return float(value) if value.ndim == 0 else value


def _cn2_callable(profile: Cn2Source):
    if isinstance(profile, TurbulenceProfile):
        return profile.cn2
    if callable(profile):
        return lambda h: np.asarray(profile(h), dtype=float) * np.ones_like(h)
    raise TypeError("profile must be a TurbulenceProfile or a callable Cn2(h)")


def _prefactor(coefficient: float, geom: PathGeometry, beam: OpticalBeam) -> float:
    return (
        coefficient
        * beam.wavenumber ** (7.0 / 6.0)
        * geom.vertical_extent ** (5.0 / 6.0)
        * geom.secant ** (11.0 / 6.0)
    )


def _uplink_kernel(geom, beam, cn2):
    extent = geom.vertical_extent
    a = beam.wavenumber * beam.aperture_diameter ** 2 / (16.0 * slant_path_length(geom))
    a56 = a ** (5.0 / 6.0)

    def kernel(dh):
        dh = np.asarray(dh, dtype=float)
        bracket = (a + 1j * (dh / extent)) ** (5.0 / 6.0) - a56
        # Re of the integral equals the integral of Re (linearity)
        return cn2(geom.h_haps + dh) * bracket.real

    return kernel


def _downlink_kernel(geom, cn2):
    extent = geom.vertical_extent

    def kernel(dh):
        dh = np.asarray(dh, dtype=float)
        u = np.clip(dh / extent, 0.0, 1.0)
        return cn2(geom.h_haps + dh) * ((1.0 - u) * u) ** (5.0 / 6.0)

    return kernel


def _adaptive(kernel, extent: float, quad_tol: float) -> float:
    # Cn2 falls off within a few km of the HAPS; breakpoints keep the
    # adaptive rule from sampling only the flat tail.
    breaks = [b for b in (1e3, 3e3, 1e4, 3e4, 1e5) if b < extent]
    limit = MAX_EVALUATIONS // 21
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", integrate.IntegrationWarning)
        value, abserr, info, *message = integrate.quad(
            lambda x: float(kernel(x)), 0.0, extent, points=breaks or None,
            epsabs=0.0, epsrel=quad_tol, limit=limit, full_output=1,
        )
    if message and abserr > quad_tol * abs(value):
        raise QuadratureError(
            f"adaptive quadrature did not converge ({message[0].splitlines()[0]}; "
            f"value={value:.6e}, error estimate={abserr:.3e}, evaluations={info['neval']})",
            value=value, error_estimate=abserr,
        )
    return value


def composite_simpson(values: np.ndarray, step: float) -> float:
    """Composite Simpson rule on an odd number of equally spaced samples."""
    n = values.size - 1
    if n < 2 or n % 2:
        raise DomainError("Simpson's rule needs an even number of panels")
    return step / 3.0 * (values[0] + values[-1] + 4.0 * values[1:-1:2].sum() + 2.0 * values[2:-1:2].sum())


def _graded_simpson(kernel, extent: float, panels: int) -> float:
    # dh = extent * s^3 clusters nodes at the HAPS end, where Cn2 is large
    # and the 5/6-power factor is not smooth.
    s = np.linspace(0.0, 1.0, panels + 1)
    y = kernel(extent * s ** 3) * 3.0 * extent * s ** 2
    return composite_simpson(y, 1.0 / panels)


def _integrate(kernel, extent, quad_tol, method, panels):
    if not (0 < quad_tol <= 1e-2):
        raise DomainError(f"quad_tol must lie in (0, 1e-2], got {quad_tol}")
    if method == "adaptive":
        return _adaptive(kernel, extent, quad_tol)
    if method == "simpson":
        return _graded_simpson(kernel, extent, panels)
    raise DomainError(f"unknown quadrature method {method!r}")


def scintillation_uplink(
    geom: PathGeometry,
    beam: OpticalBeam,
    profile: Cn2Source,
    quad_tol: float = 1e-8,
    method: str = "adaptive",
    panels: int = SIMPSON_PANELS,
) -> float:
    """Aperture-averaged scintillation index of the satellite-to-HAPS hop.

    Parameters
    ----------
    geom : PathGeometry
        Altitudes and zenith angle of the hop.
    beam : OpticalBeam
        Wavelength and receive aperture diameter.
    profile : TurbulenceProfile or callable
        Cn2 source; a callable receives altitudes in meters.
    quad_tol : float
        Relative tolerance of the adaptive rule.
    method : {"adaptive", "simpson"}
        ``"simpson"`` is a fixed graded-grid rule kept for cross-checking.

    Returns
    -------
    float
        Scintillation index (dimensionless).
    """
    kernel = _uplink_kernel(geom, beam, _cn2_callable(profile))
    integral = _integrate(kernel, geom.vertical_extent, quad_tol, method, panels)
    return _prefactor(8.7, geom, beam) * integral


def scintillation_downlink(
    geom: PathGeometry,
    beam: OpticalBeam,
    profile: Cn2Source,
    quad_tol: float = 1e-8,
    method: str = "adaptive",
    panels: int = SIMPSON_PANELS,
) -> float:
    """Scintillation index of the HAPS-to-satellite hop (no aperture averaging)."""
    kernel = _downlink_kernel(geom, _cn2_callable(profile))
    integral = _integrate(kernel, geom.vertical_extent, quad_tol, method, panels)
    return _prefactor(2.2, geom, beam) * integral
