"""Opportunistic selection of the second-hop satellite.

Two strategies are supported:

* SS-I picks the candidate with the smallest zenith angle. It needs only
  geometry, so the choice does not depend on the channel state.
* SS-II picks the candidate with the largest instantaneous SNR.

Candidate indices are 1-based (``k = 1..N``) throughout, matching the way
satellites are numbered in scenario files. Ties go to the lowest index.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import DomainError
from .fading import EwParams


class Strategy(enum.Enum):
    SS1 = "ss1"
    SS2 = "ss2"

    @classmethod
    def parse(cls, value) -> Strategy:
        if isinstance(value, cls):
            return value
        key = str(value).strip().lower().replace("-", "").replace("_", "")
        aliases = {"ss1": cls.SS1, "ssi": cls.SS1, "ss2": cls.SS2, "ssii": cls.SS2}
        try:
            return aliases[key]
        except KeyError:
            raise DomainError(f"unknown strategy {value!r} (expected ss1 or ss2)") from None

    @property
    def label(self) -> str:
        return "SS-I" if self is Strategy.SS1 else "SS-II"


@dataclass(frozen=True)
class CandidateSatellite:
    index: int
    zenith: float
    ew: EwParams
    attenuation_g: float
    avg_snr: float

    def __post_init__(self):
        if self.index < 1:
            raise DomainError(f"candidate index must be >= 1, got {self.index}")
        if not (0.0 <= self.zenith < math.pi / 2):
            raise DomainError(f"candidate {self.index}: zenith must lie in [0, pi/2)")
        if not (0.0 < self.attenuation_g <= 1.0):
            raise DomainError(f"candidate {self.index}: attenuation_g must lie in (0, 1]")
        if not (self.avg_snr > 0):
            raise DomainError(f"candidate {self.index}: avg_snr must be positive")


def _require_nonempty(items, what):
    if len(items) == 0:
        raise DomainError(f"{what} must not be empty")


def select_min_zenith(candidates: Sequence[CandidateSatellite]) -> int:
    """Index ``k`` of the candidate with the smallest zenith angle."""
    _require_nonempty(candidates, "candidate list")
    best = min(candidates, key=lambda c: (c.zenith, c.index))
    return best.index


def select_max_snr(instantaneous_snrs: Sequence[float]) -> int:
    """1-based position of the largest SNR; the first maximum wins."""
    _require_nonempty(instantaneous_snrs, "SNR list")
    return int(np.argmax(np.asarray(instantaneous_snrs, dtype=float))) + 1


def scheduled_params_ss1(candidates: Sequence[CandidateSatellite]) -> EwParams:
    """Componentwise extremes ``(min alpha, max beta, max eta)`` over the candidates.

    This bounds the scheduled hop by the most favourable fit parameters in
    the set. It coincides with :func:`scheduled_params_direct` only when all
    three fitted parameters vary monotonically with zenith across the set.
    """
    _require_nonempty(candidates, "candidate list")
    return EwParams(
        min(c.ew.alpha for c in candidates),
        max(c.ew.beta for c in candidates),
        max(c.ew.eta for c in candidates),
    )


def scheduled_params_direct(candidates: Sequence[CandidateSatellite]) -> EwParams:
    """Fitted parameters of the min-zenith candidate itself."""
    k = select_min_zenith(candidates)
    return next(c.ew for c in candidates if c.index == k)


def params_monotone_in_zenith(candidates: Sequence[CandidateSatellite]) -> bool:
    """True when alpha falls while beta and eta rise as zenith decreases.

    Under this condition the extremes rule and the direct rule agree.
    """
    ordered = sorted(candidates, key=lambda c: c.zenith)
    alphas = [c.ew.alpha for c in ordered]
    betas = [c.ew.beta for c in ordered]
    etas = [c.ew.eta for c in ordered]
    return (
        all(a <= b for a, b in zip(alphas, alphas[1:]))
        and all(a >= b for a, b in zip(betas, betas[1:]))
        and all(a >= b for a, b in zip(etas, etas[1:]))
    )
