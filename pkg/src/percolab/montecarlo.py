"""Monte Carlo experiments on top of the counter-based coupling field.

Trial t of an experiment with master seed s uses the site uniforms keyed by
``trial_key(s, t)``. Every trial is a pure function of (s, t, p), trials are
spread over a thread pool in contiguous chunks, and results are combined
with integer sums, so the output does not depend on the number of workers.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Optional, Sequence

import numpy as np
from numba import njit

from percolab import rng
from percolab.analytics import ell_of, p_critical_form, p_gradual_form
from percolab.engine import _NO_MASK, Configuration, closure
from percolab.errors import ParameterError
from percolab.topology import GraphShape

Z95 = 1.959964
DEFAULT_RESOLUTION = 2.0**-20
REGIMES = ("critical", "gradual")


def worker_count() -> int:
    """Threads to use: PERCOLAB_THREADS, with 0 or unset meaning one per CPU."""
    raw = os.environ.get("PERCOLAB_THREADS", "0").strip() or "0"
    try:
        k = int(raw)
    except ValueError as exc:
        raise ParameterError(f"PERCOLAB_THREADS must be an integer, got {raw!r}") from exc
    if k < 0:
        raise ParameterError("PERCOLAB_THREADS must be nonnegative")
    return k if k > 0 else (os.cpu_count() or 1)


def _map_trials(fn: Callable[[int, int], list], trials: int) -> list:
    """Run fn(start, stop) over contiguous chunks of range(trials); concatenate in order."""
    workers = min(worker_count(), trials)
    if workers <= 1:
        return list(fn(0, trials))
    bounds = [trials * i // workers for i in range(workers + 1)]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        parts = list(pool.map(lambda i: fn(bounds[i], bounds[i + 1]), range(workers)))
    return [x for part in parts for x in part]


def wilson_interval(successes: int, trials: int, z: float = Z95) -> tuple[float, float]:
    if trials <= 0:
        raise ParameterError("trials must be positive")
    phat = successes / trials
    z2 = z * z
    denom = 1 + z2 / trials
    center = (phat + z2 / (2 * trials)) / denom
    half = z * math.sqrt(phat * (1 - phat) / trials + z2 / (4 * trials * trials)) / denom
    return max(0.0, min(phat, center - half)), min(1.0, max(phat, center + half))


def resolve_p(shape: GraphShape, p: Optional[float] = None, a: Optional[float] = None,
              regime: Optional[str] = None) -> float:
    """p itself, or the scaling form of ``regime`` evaluated at a."""
    if p is None:
        if a is None or regime is None:
            raise ParameterError("give p, or a together with a regime")
        if a < 0:
            raise ParameterError("a must be nonnegative")
        ell = ell_of(shape.theta)
        if regime == "critical":
            p = p_critical_form(a, ell, shape.n)
        elif regime == "gradual":
            p = p_gradual_form(a, ell, shape.n, shape.m)
        else:
            raise ParameterError(f"unknown regime {regime!r}; choose from {REGIMES}")
    p = float(p)
    if not 0.0 <= p <= 1.0 or math.isnan(p):
        raise ParameterError("p must lie in [0,1]")
    return p


@dataclass(frozen=True)
class TrialBatch:
    shape: GraphShape
    p: Optional[float] = None
    trials: int = 1
    master_seed: int = 0
    a: Optional[float] = None
    regime: Optional[str] = None

    def __post_init__(self):
        if isinstance(self.trials, bool) or not isinstance(self.trials, int) or self.trials < 1:
            raise ParameterError("trials must be a positive integer")
        resolve_p(self.shape, self.p, self.a, self.regime)

    @property
    def probability(self) -> float:
        return resolve_p(self.shape, self.p, self.a, self.regime)


@dataclass(frozen=True)
class EstimateResult:
    successes: int
    trials: int
    estimate: Fraction
    ci_low: float
    ci_high: float
    mean_final_density: float
    provenance: dict = field(default_factory=dict)

    def as_dict(self) -> dict:
        return {
            "successes": self.successes,
            "trials": self.trials,
            "estimate": float(self.estimate),
            "ci_low": self.ci_low,
            "ci_high": self.ci_high,
            "mean_final_density": self.mean_final_density,
            "provenance": dict(self.provenance),
        }


def _provenance(shape: GraphShape, p: float, trials: int, seed: int) -> dict:
    return {
        "shape": [shape.d1, shape.d2, shape.m, shape.n, shape.theta],
        "p": p,
        "trials": trials,
        "master_seed": seed,
        "rng": "splitmix64-counter",
    }


# ---------------------------------------------------------------------------
# trial kernels


@njit(cache=True, nogil=True)
def _final_counts(keys, thresh, d1, d2, m, n, theta, nomask, out):
    """out[i] = size of the closure of the trial-i configuration at threshold ``thresh``."""
    size = m**d1 * n**d2
    occ = np.empty(size, np.bool_)
    for i in range(keys.shape[0]):
        init = rng.fill_occupied(keys[i], thresh, occ)
        if init == size:
            out[i] = size
        else:
            out[i] = init + closure(occ, nomask, True, d1, d2, m, n, theta)


def _keys(seed: int, start: int, stop: int) -> np.ndarray:
    return np.array([rng.trial_key(seed, t) for t in range(start, stop)], dtype=np.uint64)


def final_counts(shape: GraphShape, p: float, trials: int, seed: int) -> np.ndarray:
    """Final occupied count of each trial, as an int64 array indexed by trial."""
    thresh = np.uint64(rng.p_threshold(p))
    s = shape

    def chunk(start, stop):
        out = np.zeros(stop - start, np.int64)
        _final_counts(_keys(seed, start, stop), thresh, s.d1, s.d2, s.m, s.n, s.theta, _NO_MASK, out)
        return out.tolist()

    return np.array(_map_trials(chunk, trials), dtype=np.int64)


def sample_config(shape: GraphShape, p: float, seed: int, trial: int = 0) -> Configuration:
    return Configuration(shape, rng.occupied_mask(seed, trial, shape.size, p))


def estimate_span(batch: TrialBatch, z: float = Z95) -> EstimateResult:
    shape, p = batch.shape, batch.probability
    counts = final_counts(shape, p, batch.trials, batch.master_seed)
    successes = int((counts == shape.size).sum())
    lo, hi = wilson_interval(successes, batch.trials, z)
    total = int(counts.sum())
    return EstimateResult(
        successes=successes,
        trials=batch.trials,
        estimate=Fraction(successes, batch.trials),
        ci_low=lo,
        ci_high=hi,
        mean_final_density=total / (batch.trials * shape.size),
        provenance=_provenance(shape, p, batch.trials, batch.master_seed),
    )


# ---------------------------------------------------------------------------
# critical values along the coupling


def _spans_below(bits: np.ndarray, cut: np.uint64, shape: GraphShape) -> bool:
    occ = bits < cut
    k = int(np.count_nonzero(occ))
    if k == shape.size:
        return True
    s = shape
    return k + int(closure(occ, _NO_MASK, True, s.d1, s.d2, s.m, s.n, s.theta)) == s.size


def pathwise_pc(shape: GraphShape, seed: int, trial: int = 0,
                resolution: float = DEFAULT_RESOLUTION) -> float:
    """Smallest level p at which the coupled configuration {U < p} of one trial spans.

    The search runs over the order statistics of the trial's uniforms and
    stops once the bracket is narrower than ``resolution``; the returned
    value is the upper end, which spans. Returns 1.0 when theta exceeds the
    degree, since then only the full configuration spans.
    """
    if shape.theta > shape.degree:
        return 1.0
    bits = np.empty(shape.size, dtype=np.uint64)
    rng.fill_bits(np.uint64(rng.trial_key(seed, trial)), bits)
    order = np.sort(bits)
    # spans with the j smallest sites open  <=>  j >= j*
    lo, hi = 0, shape.size
    two53 = rng.TWO53
    while hi - lo > 1:
        if (int(order[hi - 1]) - int(order[lo - 1] if lo > 0 else 0)) / two53 <= resolution:
            break
        mid = (lo + hi) // 2
        if _spans_below(bits, order[mid - 1] + np.uint64(1), shape):
            hi = mid
        else:
            lo = mid
    return float(order[hi - 1]) / two53


def pathwise_samples(shape: GraphShape, trials: int, seed: int,
                     resolution: float = DEFAULT_RESOLUTION) -> np.ndarray:
    def chunk(start, stop):
        return [pathwise_pc(shape, seed, t, resolution) for t in range(start, stop)]

    return np.array(_map_trials(chunk, trials), dtype=np.float64)


@dataclass(frozen=True)
class QuantileEstimate:
    alpha: float
    estimate: float
    ci_low: float
    ci_high: float
    trials: int
    samples: tuple
    provenance: dict = field(default_factory=dict)

    def as_dict(self) -> dict:
        return {
            "alpha": self.alpha,
            "estimate": self.estimate,
            "ci_low": self.ci_low,
            "ci_high": self.ci_high,
            "trials": self.trials,
            "provenance": dict(self.provenance),
        }


def estimate_pc(shape: GraphShape, alpha: float, trials: int, seed: int,
                resolution: float = DEFAULT_RESOLUTION, confidence: float = 0.95,
                bootstrap: int = 1000, bootstrap_seed: int = 12345) -> QuantileEstimate:
    """Empirical alpha-quantile of pathwise critical values, with a percentile bootstrap CI."""
    if not 0.0 < alpha < 1.0:
        raise ParameterError("alpha must lie in (0,1)")
    if trials < 1:
        raise ParameterError("trials must be positive")
    samples = pathwise_samples(shape, trials, seed, resolution)
    est = float(np.quantile(samples, alpha, method="inverted_cdf"))
    gen = np.random.default_rng(bootstrap_seed)
    idx = gen.integers(0, trials, size=(bootstrap, trials))
    boots = np.quantile(samples[idx], alpha, axis=1, method="inverted_cdf")
    tail = (1.0 - confidence) / 2
    lo, hi = np.quantile(boots, [tail, 1.0 - tail])
    prov = _provenance(shape, float("nan"), trials, seed)
    del prov["p"]
    prov.update(resolution=resolution, bootstrap=bootstrap, bootstrap_seed=bootstrap_seed)
    return QuantileEstimate(alpha, est, min(float(lo), est), max(float(hi), est), trials,
                            tuple(float(x) for x in samples), prov)


# ---------------------------------------------------------------------------
# sweeps and densities


@dataclass(frozen=True)
class SweepPoint:
    a: float
    p: float
    result: EstimateResult


def sweep_transition(shape: GraphShape, regime: str, a_grid: Sequence[float], trials: int,
                     seed: int, z: float = Z95) -> list[SweepPoint]:
    """One span estimate per a, all grid points sharing the same coupled trials."""
    if len(a_grid) == 0:
        raise ParameterError("a_grid is empty")
    out = []
    for a in a_grid:
        p = resolve_p(shape, None, float(a), regime)
        res = estimate_span(TrialBatch(shape, p=p, trials=trials, master_seed=seed), z)
        out.append(SweepPoint(float(a), p, res))
    return out


@dataclass(frozen=True)
class DensityResult:
    mean: float
    std: float
    minimum: float
    maximum: float
    quartiles: tuple
    trials: int
    provenance: dict = field(default_factory=dict)

    def as_dict(self) -> dict:
        return {
            "mean": self.mean,
            "std": self.std,
            "min": self.minimum,
            "max": self.maximum,
            "quartiles": list(self.quartiles),
            "trials": self.trials,
            "provenance": dict(self.provenance),
        }


def estimate_density(shape: GraphShape, p: float, trials: int, seed: int) -> DensityResult:
    p = resolve_p(shape, p)
    if trials < 1:
        raise ParameterError("trials must be positive")
    counts = final_counts(shape, p, trials, seed)
    dens = counts / shape.size
    q = np.quantile(dens, [0.25, 0.5, 0.75])
    return DensityResult(
        mean=int(counts.sum()) / (trials * shape.size),
        std=float(dens.std()),
        minimum=float(dens.min()),
        maximum=float(dens.max()),
        quartiles=tuple(float(x) for x in q),
        trials=trials,
        provenance=_provenance(shape, p, trials, seed),
    )
