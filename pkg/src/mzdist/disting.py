"""Global distinguishability D(chi, Delta) and its local limit.

D is the mean relative entropy S[P(t1) || P(t2)] over t1, t2 drawn uniformly
from the window [chi - Delta/2, chi + Delta/2], in bits. Because
S = sum_m p_m(t1) (ln p_m(t1) - ln p_m(t2)) / ln 2 separates in t1 and t2,

    D ln 2 = sum_m  mean_t[ p_m(t) (ln p_m(t) - mean_t ln p_m) ],

which is exactly what a tensor-product rule gives for the double integral.
The default route evaluates each outcome's one-dimensional means on panels
split at that outcome's zeros and deep minima, where ln p_m is singular or
sharply peaked, with nodes clustered at every panel edge. The plain tensor
rule on the raw double integral is kept as ``split_zeros=False``.
"""
from __future__ import annotations

import enum
import functools
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .errors import InvalidInterval, MZError
from .fisher import fisher_curve
from .info import EPS_FLOOR, EPS_ZERO, kl_divergence, pairwise_kl
from .rotation import get_engine
from .spin import SpinJ, SpinState, make_probe
from .wigner import log_wigner_d_column, wigner_d_column_zeros

LN_FLOOR = math.log(EPS_FLOOR)
LN2 = math.log(2.0)

# Panels narrower than this (relative to Delta) are merged away.
MIN_PANEL = 1e-12
# Amplitude roots with |ln|z|| below this become panel breaks.
ROOT_BAND = 0.5
# Nodes per panel: at least PANEL_SHARE * nodes_per_axis, and at least
# PANEL_DENSITY times the panel's share of the window.
PANEL_SHARE = 0.15
PANEL_DENSITY = 2.0


class QuadratureRule(enum.Enum):
    GAUSS_LEGENDRE = "GaussLegendre"
    TRAPEZOID = "Trapezoid"


@dataclass(frozen=True)
class QuadratureSpec:
    """nodes_per_axis=None picks ``default_nodes`` for the query."""

    nodes_per_axis: Optional[int] = None
    rule: QuadratureRule = QuadratureRule.GAUSS_LEGENDRE
    split_zeros: bool = True

    def __post_init__(self):
        if self.nodes_per_axis is not None and self.nodes_per_axis < 8:
            raise ValueError(f"nodes_per_axis must be at least 8, got {self.nodes_per_axis}")
        object.__setattr__(self, "rule", QuadratureRule(self.rule))


@dataclass(frozen=True)
class DistinguishabilityQuery:
    probe: SpinState
    chi: float
    delta: float
    quadrature: QuadratureSpec = QuadratureSpec()

    def __post_init__(self):
        if not (0.0 < self.delta < 2 * np.pi):
            raise InvalidInterval(f"Delta must lie in (0, 2 pi), got {self.delta!r}")


@dataclass(frozen=True)
class DistinguishabilityResult:
    value: float
    clamped_fraction: float
    nodes_used: int


def default_nodes(n: int, delta: float) -> int:
    """About 12 nodes per fringe period pi/j, never fewer than 48."""
    return max(48, math.ceil(12 * n * delta / np.pi))


# Probe models give per-outcome log probabilities together with their break points.

class _GenericModel:
    """Any pure probe, through its J_y-eigenbasis expansion."""

    def __init__(self, probe: SpinState):
        eng = get_engine(probe.j)
        self.dim = probe.j.dim
        self.mu = eng.eigenvalues
        # psi_m(t) = sum_mu U[m, mu] c_mu e^{i mu t}
        self.rows = eng.basis * eng.y_coefficients(probe.amps)[None, :]

    def _phases(self, thetas):
        return np.exp(1j * np.outer(thetas, self.mu))

    def log_probs(self, row: int, thetas):
        a = self._phases(thetas) @ self.rows[row]
        p = np.abs(a) ** 2
        with np.errstate(divide="ignore"):
            return p, np.log(p)

    def breaks(self, lo: float, hi: float):
        """Angles in [lo, hi] where some outcome's ln p has a zero or a sharp dip.

        Up to the unit factor e^{-i j t}, psi_m(t) is a polynomial of degree
        2j in z = e^{i t}, so ln p_m = const + sum_k ln|z - z_k|^2. A root z_k
        near the unit circle puts a dip of width about |1 - |z_k|| at arg z_k.
        Rows whose probability never exceeds EPS_ZERO come back as None.
        """
        out = []
        for w in self.rows:
            if np.sum(np.abs(w)) ** 2 <= EPS_ZERO:
                out.append(None)
                continue
            z = np.roots(w[::-1])
            z = z[np.abs(np.log(np.abs(z) + 1e-300)) < ROOT_BAND]
            out.append(_wrap(np.angle(z), lo, hi))
        return out


def _wrap(angles, lo: float, hi: float) -> np.ndarray:
    """Every 2 pi translate of the given angles that falls in [lo, hi]."""
    angles = np.asarray(angles, dtype=float)
    if angles.size == 0:
        return angles
    shifts = 2 * np.pi * np.arange(np.floor((lo - np.pi) / (2 * np.pi)), np.ceil((hi + np.pi) / (2 * np.pi)) + 1)
    z = (angles[:, None] + shifts[None, :]).ravel()
    return np.sort(z[(z >= lo) & (z <= hi)])


class _FockModel:
    """A J_z eigenstate: outcome amplitudes are one Wigner d column."""

    def __init__(self, j: SpinJ, m: float):
        self.j, self.m, self.dim = j, m, j.dim

    def log_probs(self, row: int, thetas):
        lp = 2 * log_wigner_d_column(self.j, self.m, thetas, rows=row)[0][:, 0]
        return np.exp(lp), lp

    def breaks(self, lo: float, hi: float):
        return [wigner_d_column_zeros(self.j, self.m, row, lo, hi) for row in range(self.dim)]


def _model(probe: SpinState):
    amps = probe.amps
    big = np.abs(amps) ** 2 > 1 - 1e-14
    if big.sum() == 1:
        return _FockModel(probe.j, float(probe.j.m_values[np.argmax(big)]))
    return _GenericModel(probe)


@functools.lru_cache(maxsize=None)
def _unit_rule(q: int, rule: QuadratureRule):
    """Rule on [0, 1] after the map x = I_t(4, 4), which flattens both ends.

    Returns each node's distance to the nearer end, which end that is, and
    the weights.
    """
    if rule is QuadratureRule.GAUSS_LEGENDRE:
        t, w = np.polynomial.legendre.leggauss(q)
        t, w = 0.5 * (t + 1), 0.5 * w
    else:
        t = np.linspace(0.0, 1.0, q)
        w = np.full(q, 1.0 / (q - 1))
        w[[0, -1]] *= 0.5
    near_start = t <= 0.5
    s = np.where(near_start, t, 1 - t)
    # distance to the nearer edge, kept separate so it never rounds to zero
    edge = s ** 4 * (35 - 84 * s + 70 * s ** 2 - 20 * s ** 3)
    w = w * 140 * (t * (1 - t)) ** 3
    for a in (edge, near_start, w):
        a.flags.writeable = False
    return edge, near_start, w


def _panel_nodes(breaks: np.ndarray, lo: float, hi: float, nodes: int, rule: QuadratureRule):
    delta = hi - lo
    pts = np.concatenate(([lo], np.sort(breaks[(breaks > lo) & (breaks < hi)]), [hi]))
    keep = np.concatenate(([True], np.diff(pts) > MIN_PANEL * delta))
    pts = pts[keep]
    pts[-1] = hi
    xs, ws = [], []
    for a, b in zip(pts[:-1], pts[1:]):
        width = b - a
        q = max(math.ceil(nodes * PANEL_SHARE), math.ceil(PANEL_DENSITY * nodes * width / delta), 12)
        edge, near_a, w = _unit_rule(q, rule)
        xs.append(np.where(near_a, a + width * edge, b - width * edge))
        ws.append(w * width / delta)
    return np.concatenate(xs), np.concatenate(ws)


def _disting_split(q: DistinguishabilityQuery, nodes: int):
    model = _model(q.probe)
    lo, hi = q.chi - q.delta / 2, q.chi + q.delta / 2
    breaks = model.breaks(lo, hi)
    total, used, clamped_pairs, all_pairs = 0.0, 0, 0, 0
    for row in range(model.dim):
        if breaks[row] is None:
            continue
        x, w = _panel_nodes(breaks[row], lo, hi, nodes, q.quadrature.rule)
        p, lp = model.log_probs(row, x)
        floored = ~np.isfinite(lp)
        lp = np.where(floored, LN_FLOOR, lp)
        live = p > EPS_ZERO
        pl = np.where(live, p, 0.0)
        total += float(np.sum(w * pl * (lp - np.sum(w * lp))))
        used += x.size
        clamped_pairs += int(live.sum()) * int(floored.sum())
        all_pairs += x.size ** 2
    value = max(total / LN2, 0.0)
    frac = clamped_pairs / all_pairs if all_pairs else 0.0
    return DistinguishabilityResult(value, frac, used)


def _axis_rule(k: int, rule: QuadratureRule):
    if rule is QuadratureRule.GAUSS_LEGENDRE:
        t, w = np.polynomial.legendre.leggauss(k)
        return 0.5 * t, 0.5 * w
    t = np.linspace(-0.5, 0.5, k)
    w = np.full(k, 1.0 / (k - 1))
    w[[0, -1]] *= 0.5
    return t, w


def _disting_tensor(q: DistinguishabilityQuery, nodes: int):
    t, w = _axis_rule(nodes, q.quadrature.rule)
    thetas = q.chi + q.delta * t
    p = np.abs(get_engine(q.probe.j).amplitudes(q.probe.amps, thetas)) ** 2
    s, clamped = pairwise_kl(p)
    value = max(float(w @ s @ w), 0.0)
    return DistinguishabilityResult(value, float(clamped.mean()), nodes)


def disting(q: DistinguishabilityQuery) -> DistinguishabilityResult:
    nodes = q.quadrature.nodes_per_axis or default_nodes(q.probe.j.n, q.delta)
    if q.quadrature.split_zeros:
        return _disting_split(q, nodes)
    return _disting_tensor(q, nodes)


def tensor_matrix(q: DistinguishabilityQuery):
    """Return (thetas, weights, S) for the plain tensor rule, with S[i, k] the pairwise divergence."""
    nodes = q.quadrature.nodes_per_axis or default_nodes(q.probe.j.n, q.delta)
    t, w = _axis_rule(nodes, q.quadrature.rule)
    thetas = q.chi + q.delta * t
    p = np.abs(get_engine(q.probe.j).amplitudes(q.probe.amps, thetas)) ** 2
    return thetas, w, pairwise_kl(p)[0]


def local_approx(probe: SpinState, chi: float, delta: float) -> float:
    """(Delta^2 / (8 ln 2)) [J(chi - Delta/2) + J(chi + Delta/2)], in bits."""
    if delta <= 0:
        raise InvalidInterval("Delta must be positive")
    values, _ = fisher_curve(probe, [chi - delta / 2, chi + delta / 2])
    return float(delta ** 2 / (8 * LN2) * values.sum())


def endpoint_divergence(probe: SpinState, chi: float, delta: float) -> float:
    """(1/4)(S[P(a) || P(b)] + S[P(b) || P(a)]) for the window ends a, b."""
    eng = get_engine(probe.j)
    p = np.abs(eng.amplitudes(probe.amps, [chi - delta / 2, chi + delta / 2])) ** 2
    return 0.25 * (kl_divergence(p[0], p[1]) + kl_divergence(p[1], p[0]))


@dataclass(frozen=True)
class SweepRow:
    family: str
    n: int
    chi: float
    delta: float
    value: float
    clamped_fraction: float
    nodes_used: int
    flag: str = ""


def _sweep_cell(family, n, chi, delta, quadrature):
    try:
        probe = make_probe(family, SpinJ(n))
        res = disting(DistinguishabilityQuery(probe, chi, delta, quadrature))
        return SweepRow(family.label, n, chi, delta, res.value, res.clamped_fraction, res.nodes_used)
    except MZError as exc:
        return SweepRow(family.label, n, chi, delta, float("nan"), float("nan"), 0,
                        f"{type(exc).__name__}: {exc}")


def disting_sweep(families, n_list: Sequence[int], chi_list: Sequence[float],
                  delta_list: Sequence[float], quadrature: QuadratureSpec = QuadratureSpec(),
                  workers: int = 1) -> list:
    """Every (family, n, chi, Delta) cell, in that nesting order.

    Cells that cannot be built (for example m = 0 at odd n) come back as rows
    with a ``flag`` message instead of stopping the sweep. Row order does not
    depend on ``workers``.
    """
    if not isinstance(families, (list, tuple)):
        families = [families]
    cells = [(f, n, c, d) for f in families for n in n_list for c in chi_list for d in delta_list]
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(lambda cell: _sweep_cell(*cell, quadrature), cells))
    return [_sweep_cell(*cell, quadrature) for cell in cells]
