"""Trial-level Monte-Carlo simulation of the relayed link.

Each trial draws an EW fading sample per hop, forms the hop SNRs
``gb * (g f)^2``, applies the scheduling rule on the second hop and declares
outage when the smaller of the two hop SNRs is at or below the threshold.

Randomness is counter based. The uniform feeding trial ``i`` of hop ``h`` at
sweep position ``p`` is word ``i`` of a Philox stream keyed by
``(seed, p, h)``; trials are processed in fixed blocks that can be generated
independently, so the estimate does not depend on how blocks are spread
over worker threads. Hop 0 is the uplink and hop ``k`` the k-th candidate.
SS-I and SS-II read the same streams (common random numbers).
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .analytics import HopLink, Method, OutageEstimate
from .errors import DomainError
from .fading import ew_quantile
from .scenario import LinkSet, Scenario, prepare
from .scheduling import Strategy

BLOCK_TRIALS = 1 << 16
THREADS_ENV = "STRATOLINK_THREADS"


@dataclass(frozen=True)
class TrialOutcome:
    """Per-trial SNRs (arrays of equal length) and outage flags."""

    gamma_ah: np.ndarray
    gamma_hb: np.ndarray
    gamma_end_to_end: np.ndarray
    outage_flag: np.ndarray


def resolve_workers(workers: Optional[int] = None) -> int:
    """Worker count: explicit argument, else ``STRATOLINK_THREADS`` (0 = all cores)."""
    if workers is None:
        raw = os.environ.get(THREADS_ENV, "0").strip() or "0"
        try:
            workers = int(raw)
        except ValueError:
            raise DomainError(f"{THREADS_ENV} must be an integer, got {raw!r}") from None
    if workers < 0:
        raise DomainError("worker count must be non-negative")
    return workers or (os.cpu_count() or 1)


def stream_key(seed: int, point_index: int, hop_index: int) -> np.ndarray:
    return np.random.SeedSequence(seed, spawn_key=(point_index, hop_index)).generate_state(2, np.uint64)


def trial_uniforms(seed: int, point_index: int, hop_index: int, start: int, count: int) -> np.ndarray:
    """Uniforms in the open interval (0, 1) for trials ``start .. start+count-1``."""
    if start % 4:
        raise DomainError("block start must be a multiple of 4")
    bitgen = np.random.Philox(key=stream_key(seed, point_index, hop_index), counter=start // 4)
    raw = bitgen.random_raw(count)
    return ((raw >> np.uint64(11)).astype(np.float64) + 0.5) * 2.0 ** -53


def _hop_snr(hop: HopLink, u: np.ndarray) -> np.ndarray:
    f = ew_quantile(u, hop.ew)
    return hop.avg_snr * (hop.attenuation_g * f) ** 2


def simulate_trials(
    links: LinkSet,
    strategy,
    gamma_bar_db: float,
    gamma_th: float,
    seed: int,
    start: int = 0,
    count: int = BLOCK_TRIALS,
    point_index: int = 0,
) -> TrialOutcome:
    """Run trials ``start .. start+count-1`` and return every trial's SNRs."""
    strategy = Strategy.parse(strategy)
    up, sched, cands = links.at(gamma_bar_db)
    gamma_ah = _hop_snr(up, trial_uniforms(seed, point_index, 0, start, count))
    if strategy is Strategy.SS1:
        k = links.scheduled_index
        gamma_hb = _hop_snr(sched, trial_uniforms(seed, point_index, k, start, count))
    else:
        gamma_hb = np.zeros(count)
        for k, hop in enumerate(cands, start=1):
            np.maximum(gamma_hb, _hop_snr(hop, trial_uniforms(seed, point_index, k, start, count)), out=gamma_hb)
    end_to_end = np.minimum(gamma_ah, gamma_hb)
    return TrialOutcome(gamma_ah, gamma_hb, end_to_end, end_to_end <= gamma_th)


def _count_block(args):
    links, strategy, gamma_bar_db, gamma_th, seed, start, count, point_index = args
    out = simulate_trials(links, strategy, gamma_bar_db, gamma_th, seed, start, count, point_index)
    return int(np.count_nonzero(out.outage_flag))


def count_outages(
    links: LinkSet,
    strategy,
    gamma_bar_db: float,
    gamma_th: float,
    trials: int,
    seed: int,
    point_index: int = 0,
    workers: Optional[int] = None,
) -> int:
    """Number of outage trials among ``trials``, summed over independent blocks."""
    if trials < 1:
        raise DomainError(f"trials must be at least 1, got {trials}")
    strategy = Strategy.parse(strategy)
    jobs = [
        (links, strategy, gamma_bar_db, gamma_th, seed, s, min(BLOCK_TRIALS, trials - s), point_index)
        for s in range(0, trials, BLOCK_TRIALS)
    ]
    n_workers = min(resolve_workers(workers), len(jobs))
    if n_workers <= 1:
        return sum(map(_count_block, jobs))
    with ThreadPoolExecutor(max_workers=n_workers) as pool:
        return sum(pool.map(_count_block, jobs))


def estimate_from_count(count: int, trials: int) -> OutageEstimate:
    p = count / trials
    return OutageEstimate(p, Method.MONTE_CARLO, std_error=math.sqrt(p * (1.0 - p) / trials), trials=trials)


def simulate_outage(
    scenario: Scenario,
    strategy,
    gamma_bar_db: Optional[float] = None,
    *,
    trials: Optional[int] = None,
    seed: Optional[int] = None,
    point_index: int = 0,
    workers: Optional[int] = None,
) -> OutageEstimate:
    """Monte-Carlo outage estimate at one average SNR.

    ``gamma_bar_db`` defaults to the first value of the scenario grid;
    ``trials`` and ``seed`` default to the scenario's. The standard error is
    ``sqrt(p (1 - p) / trials)``.
    """
    if gamma_bar_db is None:
        if not scenario.gamma_bar_db:
            raise DomainError("scenario has an empty average-SNR grid")
        gamma_bar_db = scenario.gamma_bar_db[0]
    trials = scenario.trials if trials is None else trials
    seed = scenario.seed if seed is None else seed
    links = prepare(scenario)
    count = count_outages(links, strategy, gamma_bar_db, scenario.gamma_th, trials, seed, point_index, workers)
    return estimate_from_count(count, trials)


def sweep(
    scenario: Scenario,
    strategy,
    gamma_bar_grid: Optional[Sequence[float]] = None,
    *,
    trials: Optional[int] = None,
    seed: Optional[int] = None,
    workers: Optional[int] = None,
):
    """``[(gamma_bar_db, OutageEstimate), ...]``; grid position ``p`` keys the streams."""
    grid = scenario.gamma_bar_db if gamma_bar_grid is None else gamma_bar_grid
    return [
        (float(g), simulate_outage(scenario, strategy, g, trials=trials, seed=seed, point_index=p, workers=workers))
        for p, g in enumerate(grid)
    ]
