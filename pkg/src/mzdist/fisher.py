"""Classical Fisher information of the photon-counting distribution.

Two independent routes are provided: the direct sum over dp/dtheta and the
rotational-energy discrepancy 4(<J_y^2> - <phi_dot^2>_c). Fisher information
uses natural logarithms and is in rad^-2; relative entropies elsewhere are in
bits, so the two differ by the factor ln 2 seen in ``local_approx``.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .errors import UnsupportedFamily, ZeroInformation
from .rotation import get_engine
from .spin import FockZ, Noon, PhaseState, SpinJ, SpinState, _generators

# Outcomes with p below this are handled by the zero-probability limit.
DEGENERATE_P = 1e-14


class FisherMethod(enum.Enum):
    PROB_DERIVATIVE = "ProbDerivative"
    ENERGY_DISCREPANCY = "EnergyDiscrepancy"
    CLOSED_FORM = "ClosedForm"


@dataclass(frozen=True)
class FisherResult:
    value: float
    method: FisherMethod
    theta: float
    degenerate_terms: int = 0


def _evolved(probe: SpinState, thetas):
    return get_engine(probe.j).amplitudes_and_derivatives(probe.amps, thetas)


def fisher_curve(probe: SpinState, thetas):
    """Fisher information from sum(pdot^2 / p) at every angle.

    Returns (values, degenerate_counts). Near an exact zero p ~ |psi_dot|^2 t^2,
    so pdot^2/p tends to 4|psi_dot|^2, which replaces the ratio there.
    """
    psi, dpsi = _evolved(probe, thetas)
    p = np.abs(psi) ** 2
    pdot = 2 * np.real(psi.conj() * dpsi)
    small = p < DEGENERATE_P
    with np.errstate(divide="ignore", invalid="ignore"):
        terms = np.where(small, 4 * np.abs(dpsi) ** 2, pdot ** 2 / np.where(small, 1.0, p))
    return terms.sum(axis=1), small.sum(axis=1)


def energy_discrepancy_curve(probe: SpinState, thetas):
    """4(<J_y^2> - sum_m r_m^2 phi_dot_m^2), skipping outcomes with r_m^2 < DEGENERATE_P."""
    psi, dpsi = _evolved(probe, thetas)
    r2 = np.abs(psi) ** 2
    jy2 = np.sum(np.abs(dpsi) ** 2, axis=1)  # |i J_y psi|^2 = <J_y^2>
    flux = np.imag(psi.conj() * dpsi)  # r^2 phi_dot
    small = r2 < DEGENERATE_P
    classical = np.where(small, 0.0, flux ** 2 / np.where(small, 1.0, r2)).sum(axis=1)
    return np.maximum(4 * (jy2 - classical), 0.0), small.sum(axis=1)


def fisher_prob_derivative(probe: SpinState, theta: float) -> FisherResult:
    v, deg = fisher_curve(probe, [theta])
    return FisherResult(float(v[0]), FisherMethod.PROB_DERIVATIVE, float(theta), int(deg[0]))


def fisher_energy_discrepancy(probe: SpinState, theta: float) -> FisherResult:
    v, deg = energy_discrepancy_curve(probe, [theta])
    return FisherResult(float(v[0]), FisherMethod.ENERGY_DISCREPANCY, float(theta), int(deg[0]))


def jy_variance(probe: SpinState) -> float:
    """<J_y^2> - <J_y>^2; four times this bounds the Fisher information."""
    jy = _generators(probe.j.two_j).Jy.entries
    v = jy @ probe.amps
    return float(np.vdot(v, v).real - np.vdot(probe.amps, v).real ** 2)


def closed_form_fisher(family, j: SpinJ) -> FisherResult:
    jj = j.j
    if isinstance(family, Noon):
        value = 4 * jj ** 2
    elif isinstance(family, FockZ):
        m = family.resolve_m(j)
        j.index(m)
        value = 2 * (jj * (jj + 1) - m ** 2)
    elif isinstance(family, PhaseState):
        value = 4 / 3 * jj * (jj + 1)
    else:
        raise UnsupportedFamily(f"no closed form for {family!r}")
    return FisherResult(float(value), FisherMethod.CLOSED_FORM, float("nan"))


def cramer_rao_bound(f, k: int) -> float:
    """Mean-squared-error floor 1/(k J) for k independent measurements."""
    value = f.value if isinstance(f, FisherResult) else float(f)
    if k < 1:
        raise ValueError("k must be a positive integer")
    if value <= 1e-300:
        raise ZeroInformation("Fisher information is zero; no unbiased estimator has finite error")
    return 1.0 / (k * value)
