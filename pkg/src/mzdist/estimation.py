"""Monte Carlo photon counting with grid maximum-likelihood estimation."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Tuple

import numpy as np
from scipy.special import gammaln

from .errors import DegenerateLikelihood, InvalidInterval, UnsupportedDimension
from .fisher import cramer_rao_bound, fisher_prob_derivative
from .info import EPS_FLOOR, EPS_ZERO, TypeBounds, _as_probs, type_bounds
from .rotation import get_engine
from .spin import SpinState

DEFAULT_GRID_POINTS = 2001
TIE_RTOL = 1e-12
MAX_EXACT_K = 10_000
MISID_RULES = ("type_class", "nearest")


@dataclass(frozen=True)
class SampleRecord:
    theta_true: float
    k: int
    outcomes: np.ndarray  # m values
    seed: int


@dataclass(frozen=True)
class EstimationRun:
    window: Tuple[float, float]
    grid_points: int
    estimates: np.ndarray
    empirical_mse: float
    mse_stderr: float
    crb: float
    trials: int
    seed: int

    @property
    def ratio(self) -> float:
        return self.empirical_mse / self.crb


def _probs_at(probe: SpinState, thetas) -> np.ndarray:
    p = np.abs(get_engine(probe.j).amplitudes(probe.amps, thetas)) ** 2
    return p / p.sum(axis=1, keepdims=True)


def trial_seed(seed: int, trial: int) -> int:
    """Independent 64-bit seed for one trial, fixed by (seed, trial) alone."""
    return int(np.random.SeedSequence([seed, trial]).generate_state(1, np.uint64)[0])


def sample_outcomes(probe: SpinState, theta: float, k: int, seed: int) -> SampleRecord:
    """k photon-counting outcomes at phase theta, by inverse CDF."""
    if k < 0:
        raise ValueError("k must be non-negative")
    cdf = np.cumsum(_probs_at(probe, [theta])[0])
    u = np.random.default_rng(seed).random(k)
    idx = np.minimum(np.searchsorted(cdf, u * cdf[-1], side="right"), probe.j.dim - 1)
    outcomes = probe.j.m_values[idx]
    outcomes.flags.writeable = False
    return SampleRecord(float(theta), int(k), outcomes, int(seed))


def _check_window(window, grid_points: int):
    center, width = map(float, window)
    if grid_points < 3:
        raise ValueError("grid_points must be at least 3")
    if not (0 <= width <= 2 * np.pi):
        raise InvalidInterval(f"window width must lie in [0, 2 pi], got {width}")
    return center, width


def _grid(center: float, width: float, grid_points: int) -> np.ndarray:
    return center + width * np.linspace(-0.5, 0.5, grid_points)


def _argmax_near_center(loglik: np.ndarray, grid: np.ndarray, center: float) -> int:
    best = loglik.max()
    tied = np.nonzero(loglik >= best - TIE_RTOL * max(1.0, abs(best)))[0]
    return int(tied[np.argmin(np.abs(grid[tied] - center))])


def _mle_from_counts(counts, log_p, grid, center):
    """counts: (trials, d); log_p: (G, d) with -inf where p < EPS_ZERO."""
    seen = counts > 0
    impossible = (seen.astype(float) @ np.isneginf(log_p).T) > 0
    loglik = counts @ np.maximum(log_p, np.log(EPS_FLOOR)).T
    out = np.empty(counts.shape[0])
    for i in range(counts.shape[0]):
        if impossible[i].all():
            raise DegenerateLikelihood("every grid point gives zero probability to an observed outcome")
        out[i] = grid[_argmax_near_center(loglik[i], grid, center)]
    return out


def _log_grid(probe: SpinState, grid):
    p = _probs_at(probe, grid)
    with np.errstate(divide="ignore"):
        return np.where(p < EPS_ZERO, -np.inf, np.log(p))


def _counts(probe: SpinState, outcomes) -> np.ndarray:
    idx = np.rint(np.asarray(outcomes) + probe.j.j).astype(int)
    return np.bincount(idx, minlength=probe.j.dim).astype(float)


def mle_grid(record: SampleRecord, probe: SpinState, window, grid_points: int = DEFAULT_GRID_POINTS) -> float:
    """Grid point in window = (center, width) with the largest log-likelihood.

    Probabilities below EPS_ZERO count as zero and are clamped to EPS_FLOOR.
    Ties within a relative 1e-12 go to the point nearest the window center.
    """
    center, width = _check_window(window, grid_points)
    grid = _grid(center, width, grid_points)
    counts = _counts(probe, record.outcomes)[None, :]
    return float(_mle_from_counts(counts, _log_grid(probe, grid), grid, center)[0])


def mse_experiment(probe: SpinState, theta_true: float, window, k: int, trials: int, seed: int,
                   grid_points: int = DEFAULT_GRID_POINTS) -> EstimationRun:
    """Empirical mean-squared error of the grid MLE against 1/(k J(theta_true))."""
    center, width = _check_window(window, grid_points)
    if abs(theta_true - center) > width / 2 + 1e-15:
        raise InvalidInterval(f"theta_true={theta_true} lies outside the window")
    if trials < 1:
        raise ValueError("trials must be positive")
    grid = _grid(center, width, grid_points)
    counts = np.stack([_counts(probe, sample_outcomes(probe, theta_true, k, trial_seed(seed, t)).outcomes)
                       for t in range(trials)])
    est = _mle_from_counts(counts, _log_grid(probe, grid), grid, center)
    sq = (est - theta_true) ** 2
    stderr = float(sq.std(ddof=1) / np.sqrt(trials)) if trials > 1 else float("nan")
    crb = cramer_rao_bound(fisher_prob_derivative(probe, theta_true), k)
    est.flags.writeable = False
    return EstimationRun((center, width), grid_points, est, float(sq.mean()), stderr, crb, trials, int(seed))


def nearest_type(p, k: int) -> np.ndarray:
    """The k-type (counts summing to k) closest to k*p, by largest remainder."""
    target = _as_probs(p) * k
    counts = np.floor(target).astype(int)
    short = k - counts.sum()
    order = np.argsort(-(target - counts), kind="stable")
    counts[order[:short]] += 1
    return counts


def _typical_weight(counts, p1, p2, k: int, rule: str) -> np.ndarray:
    """1 if a dataset with these counts is judged typical of P1, 1/2 on exact ties, else 0."""
    counts = np.atleast_2d(counts)
    if rule == "type_class":
        return np.all(counts == nearest_type(p1, k), axis=1).astype(float)
    if rule == "nearest":
        # S[Q||P1] < S[Q||P2]  <=>  sum_m Q_m (ln P1_m - ln P2_m) > 0
        llr = counts @ (np.log(np.maximum(p1, EPS_FLOOR)) - np.log(np.maximum(p2, EPS_FLOOR)))
        tol = 1e-12 * max(1.0, k * np.max(np.abs(np.log(np.maximum(np.r_[p1, p2], EPS_FLOOR)))))
        return np.where(llr > tol, 1.0, np.where(llr >= -tol, 0.5, 0.0))
    raise ValueError(f"rule must be one of {MISID_RULES}, got {rule!r}")


def misid_experiment(p1, p2, k: int, trials: int, seed: int,
                     rule: str = "type_class") -> Tuple[float, TypeBounds]:
    """Fraction of size-k datasets drawn from P2 that are judged typical of P1.

    ``type_class``: the dataset's empirical type equals P1's nearest k-type.
    ``nearest``: the empirical type is closer to P1 than to P2 in relative
    entropy, with exact ties counted as one half.
    """
    a, b = _as_probs(p1), _as_probs(p2)
    if k < 1:
        raise ValueError("k must be a positive integer")
    bounds = type_bounds(a, b, k)
    counts = np.random.default_rng(seed).multinomial(k, b / b.sum(), size=trials)
    return float(_typical_weight(counts, a, b, k, rule).mean()), bounds


def exact_binary_misid(p1, p2, k: int, rule: str = "type_class") -> float:
    """Exact misidentification probability for two-outcome distributions, by enumeration."""
    a, b = _as_probs(p1), _as_probs(p2)
    if a.size != 2 or b.size != 2:
        raise UnsupportedDimension("exact enumeration needs two-outcome distributions")
    if not 1 <= k <= MAX_EXACT_K:
        raise ValueError(f"k must lie in [1, {MAX_EXACT_K}]")
    c = np.arange(k + 1)
    with np.errstate(divide="ignore", invalid="ignore"):
        logw = (gammaln(k + 1) - gammaln(c + 1) - gammaln(k - c + 1)
                + np.where(c > 0, c * np.log(b[0]), 0.0) + np.where(c < k, (k - c) * np.log(b[1]), 0.0))
    weight = _typical_weight(np.stack([c, k - c], axis=1), a, b, k, rule)
    return float(np.sum(weight * np.exp(logw)))
