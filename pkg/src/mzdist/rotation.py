"""Mach-Zehnder evolution exp(i J_y theta) and Wigner rotation matrices."""
from __future__ import annotations

import functools

import numpy as np

from .errors import DimensionMismatch
from .spin import OperatorMatrix, SpinJ, SpinState, _generators, _y_basis
from .wigner import log_wigner_d_column, wigner_d_column, wigner_d_column_zeros  # noqa: F401


class RotationEngine:
    """Cached J_y eigendecomposition for one spin j.

    With J_y = V diag(m) V^dagger, exp(i J_y theta) = V diag(e^{i m theta}) V^dagger,
    so each new angle costs O(d^2) after the one-off diagonalisation.
    """

    def __init__(self, j: SpinJ):
        self.j = j
        self.basis = _y_basis(j.two_j)
        self.eigenvalues = j.m_values
        self._basis_h = self.basis.conj().T

    def _check(self, state: SpinState):
        if state.j.two_j != self.j.two_j:
            raise DimensionMismatch(f"state has {state.j}, engine has {self.j}")

    def y_coefficients(self, amps) -> np.ndarray:
        return self._basis_h @ np.asarray(amps)

    def matrix(self, theta: float) -> np.ndarray:
        return (self.basis * np.exp(1j * self.eigenvalues * theta)) @ self._basis_h

    def amplitudes(self, amps, thetas) -> np.ndarray:
        """Evolved J_z amplitudes for every angle; shape (len(thetas), dim)."""
        c = self.y_coefficients(amps)
        phases = np.exp(1j * np.outer(np.atleast_1d(thetas), self.eigenvalues))
        return (phases * c) @ self.basis.T

    def amplitudes_and_derivatives(self, amps, thetas):
        c = self.y_coefficients(amps)
        phases = np.exp(1j * np.outer(np.atleast_1d(thetas), self.eigenvalues))
        psi = (phases * c) @ self.basis.T
        dpsi = (phases * (1j * self.eigenvalues * c)) @ self.basis.T
        return psi, dpsi

    def evolve(self, state: SpinState, theta: float) -> SpinState:
        self._check(state)
        return SpinState(self.j, self.amplitudes(state.amps, theta)[0])

    def derivative(self, state: SpinState) -> np.ndarray:
        """i J_y psi, the theta-derivative of the evolved state."""
        self._check(state)
        return 1j * (_generators(self.j.two_j).Jy.entries @ state.amps)


@functools.lru_cache(maxsize=None)
def _engine(two_j: int) -> RotationEngine:
    return RotationEngine(SpinJ(two_j))


def get_engine(j: SpinJ) -> RotationEngine:
    return _engine(j.two_j)


def evolve(state: SpinState, theta: float) -> SpinState:
    """e^{i J_y theta}|psi>: the state leaving the interferometer."""
    return get_engine(state.j).evolve(state, theta)


def state_derivative(state: SpinState) -> np.ndarray:
    return get_engine(state.j).derivative(state)


def wigner_d(j: SpinJ, theta: float) -> OperatorMatrix:
    """Matrix <j,m'| e^{i J_y theta} |j,m> (rows m', columns m)."""
    d = get_engine(j).matrix(theta)
    return OperatorMatrix(j, d.real)


@functools.lru_cache(maxsize=None)
def _beamsplitters(two_j: int):
    w, v = np.linalg.eigh(_generators(two_j).Jx.entries)
    plus = (v * np.exp(1j * w * np.pi / 2)) @ v.conj().T
    return plus, plus.conj().T


def mz_three_stage(state: SpinState, theta: float) -> SpinState:
    """Beamsplitter, phase shift, beamsplitter.

    exp(i J_x pi/2) exp(i J_z theta) exp(-i J_x pi/2) rotates J_z into +J_y,
    so this equals exp(+i J_y theta) exactly; the reverse ordering of the
    beamsplitter signs would give exp(-i J_y theta).
    """
    j = state.j
    bs_second, bs_first = _beamsplitters(j.two_j)
    amps = bs_first @ state.amps
    amps = np.exp(1j * j.m_values * theta) * amps
    return SpinState(j, bs_second @ amps)
