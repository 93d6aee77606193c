"""Photon-counting distributions with their relative entropies and type bounds.

Divergences and entropies are in bits.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np
from scipy.special import gammaln

from .errors import DimensionMismatch, InvalidSpin
from .spin import SpinJ, SpinState, _frozen

# p1 at or below EPS_ZERO is treated as a structural zero (its term is 0);
# p2 is clamped to EPS_FLOOR so disjoint supports give a large finite value.
EPS_ZERO = 1e-15
EPS_FLOOR = 1e-300
LOG2_FLOOR = np.log2(EPS_FLOOR)

SUM_TOL = 1e-12


@dataclass(frozen=True)
class MeasurementDistribution:
    j: SpinJ
    probs: np.ndarray

    def __post_init__(self):
        p = _frozen(self.probs, dtype=float)
        if p.shape != (self.j.dim,):
            raise DimensionMismatch(f"expected {self.j.dim} probabilities, got shape {p.shape}")
        if np.any(p < 0) or abs(p.sum() - 1.0) > SUM_TOL:
            raise ValueError("probabilities must be non-negative and sum to 1")
        object.__setattr__(self, "probs", p)

    @classmethod
    def from_probs(cls, probs) -> "MeasurementDistribution":
        p = np.asarray(probs, dtype=float)
        return cls(SpinJ(p.size - 1), p)

    @property
    def dim(self) -> int:
        return self.j.dim


class Divergence(NamedTuple):
    bits: float
    clamped: bool


@dataclass(frozen=True)
class TypeBounds:
    """2^{-kS}/(k+1)^{2j+1} <= p(2 -> 1) <= 2^{-kS}, with S = S[P1||P2]."""

    k: int
    lower: float
    upper: float
    exponent: float
    log2_lower: float
    log2_upper: float


def _as_probs(p) -> np.ndarray:
    if isinstance(p, MeasurementDistribution):
        return p.probs
    return np.asarray(p, dtype=float)


def distribution(state: SpinState) -> MeasurementDistribution:
    p = np.abs(state.amps) ** 2
    return MeasurementDistribution(state.j, p / p.sum())


def noon_distribution_analytic(j: SpinJ, zeta: float, theta: float) -> MeasurementDistribution:
    """Closed-form photon-counting distribution for the NOON probe after the interferometer."""
    if j.two_j < 1:
        raise InvalidSpin("NOON distribution needs at least one photon")
    m = j.m_values
    jj = j.j
    log_binom = gammaln(j.two_j + 1) - gammaln(jj - m + 1) - gammaln(jj + m + 1) - j.two_j * np.log(2)
    parity = np.where(np.rint(jj + m).astype(int) % 2, -1.0, 1.0)
    fringe = np.cos(j.two_j * (theta + np.pi / 2) - zeta)
    p = np.clip(np.exp(log_binom) * (1 + parity * fringe), 0.0, None)
    return MeasurementDistribution(j, p / p.sum())


def kl_divergence(p1, p2, *, with_flag: bool = False):
    """Relative entropy S[P1||P2] = sum p1 log2(p1/p2), in bits.

    Terms with p1 <= EPS_ZERO contribute nothing; p2 is clamped below at
    EPS_FLOOR. With ``with_flag`` a ``Divergence`` is returned whose
    ``clamped`` field records whether the clamp was needed.
    """
    a, b = _as_probs(p1), _as_probs(p2)
    if a.shape != b.shape:
        raise DimensionMismatch(f"distributions have shapes {a.shape} and {b.shape}")
    live = a > EPS_ZERO
    clamped = bool(np.any(live & (b < EPS_FLOOR)))
    al = a[live]
    value = float(np.sum(al * (np.log2(al) - np.log2(np.maximum(b[live], EPS_FLOOR)))))
    value = max(value, 0.0)
    return Divergence(value, clamped) if with_flag else value


def pairwise_kl(rows1, rows2=None):
    """Matrix S[i, k] = S[rows1[i] || rows2[k]] and a mask of clamped pairs."""
    a = np.asarray(rows1, dtype=float)
    b = a if rows2 is None else np.asarray(rows2, dtype=float)
    if a.shape[1] != b.shape[1]:
        raise DimensionMismatch("distributions have different numbers of outcomes")
    live = a > EPS_ZERO
    a_live = np.where(live, a, 0.0)
    with np.errstate(divide="ignore"):
        self_term = np.sum(a_live * np.where(live, np.log2(np.where(live, a, 1.0)), 0.0), axis=1)
    log_b = np.log2(np.maximum(b, EPS_FLOOR))
    s = self_term[:, None] - a_live @ log_b.T
    clamped = (live.astype(float) @ (b < EPS_FLOOR).T.astype(float)) > 0
    return np.maximum(s, 0.0), clamped


def type_bounds(p1, p2, k: int) -> TypeBounds:
    if k < 1:
        raise ValueError("k must be a positive integer")
    a = _as_probs(p1)
    s = kl_divergence(p1, p2)
    log2_upper = -k * s
    log2_lower = log2_upper - a.size * np.log2(k + 1)
    return TypeBounds(k=k, lower=float(2.0 ** log2_lower), upper=float(2.0 ** log2_upper),
                      exponent=s, log2_lower=float(log2_lower), log2_upper=float(log2_upper))


def shannon_entropy(p) -> float:
    a = _as_probs(p)
    a = a[a > 0]
    return float(max(-np.sum(a * np.log2(a)), 0.0))
