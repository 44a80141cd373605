"""Flat-slab slant-path geometry between a satellite and a HAPS."""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import DomainError


@dataclass(frozen=True)
class PathGeometry:
    """Altitudes in meters above ground, zenith angle in radians."""

    h_sat: float
    h_haps: float
    zenith: float

    def __post_init__(self):
        if not (self.h_haps > 0):
            raise DomainError(f"h_haps must be positive, got {self.h_haps}")
        if not (self.h_sat > self.h_haps):
            raise DomainError(
                f"h_sat ({self.h_sat}) must exceed h_haps ({self.h_haps})"
            )
        if not (0.0 <= self.zenith < math.pi / 2):
            raise DomainError(f"zenith must lie in [0, pi/2), got {self.zenith}")

    @classmethod
    def from_degrees(cls, h_sat: float, h_haps: float, zenith_deg: float) -> PathGeometry:
        return cls(h_sat, h_haps, math.radians(zenith_deg))

    @property
    def vertical_extent(self) -> float:
        """h_sat - h_haps in meters."""
        return self.h_sat - self.h_haps

    @property
    def secant(self) -> float:
        return 1.0 / math.cos(self.zenith)

    def with_zenith(self, zenith: float) -> PathGeometry:
        return PathGeometry(self.h_sat, self.h_haps, zenith)


def slant_path_length(geom: PathGeometry) -> float:
    """Propagation distance ``(h_sat - h_haps) * sec(zenith)`` in meters."""
    # re-check: callers may hand in duck-typed objects
    if not (0.0 <= geom.zenith < math.pi / 2):
        raise DomainError(f"zenith must lie in [0, pi/2), got {geom.zenith}")
    if geom.h_sat <= geom.h_haps:
        raise DomainError("h_sat must exceed h_haps")
    if geom.zenith == 0.0:
        return float(geom.h_sat - geom.h_haps)
    return (geom.h_sat - geom.h_haps) / math.cos(geom.zenith)
