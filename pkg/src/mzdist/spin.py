"""Spin-j states and angular-momentum operators.

n photons shared between two modes behave as a spin j = n/2. The two-mode
Fock state |n_a>|n_b> is the J_z eigenstate |j, m> with m = (n_a - n_b)/2.
Every vector and matrix in this package is indexed m = -j, ..., +j in
ascending order, so array index i holds m = i - j.
"""
from __future__ import annotations

import functools
from dataclasses import dataclass
from typing import NamedTuple, Union

import numpy as np

from .errors import DimensionMismatch, InvalidM, InvalidSpin, NonHermitian, UnsupportedFamily

MAX_TWO_J = 200

NORM_TOL = 1e-10


def _frozen(a, dtype=complex):
    a = np.array(a, dtype=dtype)
    a.flags.writeable = False
    return a


@dataclass(frozen=True)
class SpinJ:
    """Total spin j, stored as the integer photon number two_j = 2j."""

    two_j: int

    def __post_init__(self):
        two_j = self.two_j
        if isinstance(two_j, bool) or not float(two_j).is_integer() or two_j < 0:
            raise InvalidSpin(f"two_j must be a non-negative integer, got {two_j!r}")
        if two_j > MAX_TWO_J:
            raise InvalidSpin(f"two_j={two_j} exceeds MAX_TWO_J={MAX_TWO_J}")
        object.__setattr__(self, "two_j", int(two_j))

    @classmethod
    def from_j(cls, j: float) -> "SpinJ":
        two_j = round(2 * j)
        if abs(2 * j - two_j) > 1e-12:
            raise InvalidSpin(f"j={j} is not a multiple of 1/2")
        return cls(two_j)

    @property
    def j(self) -> float:
        return self.two_j / 2

    @property
    def n(self) -> int:
        """Photon number."""
        return self.two_j

    @property
    def dim(self) -> int:
        return self.two_j + 1

    @property
    def m_values(self) -> np.ndarray:
        return np.arange(self.dim) - self.j

    def index(self, m: float) -> int:
        """Array index of eigenvalue m; raises InvalidM if m is not allowed."""
        two_m = 2 * m
        if abs(two_m - round(two_m)) > 1e-12:
            raise InvalidM(f"m={m} is not a multiple of 1/2")
        two_m = round(two_m)
        if abs(two_m) > self.two_j or (self.two_j - two_m) % 2:
            raise InvalidM(f"m={m} is not a valid projection for j={self.j:g}")
        return (self.two_j + two_m) // 2

    def __str__(self):
        return f"j={self.j:g}"


@dataclass(frozen=True)
class SpinState:
    """Pure state as J_z-basis amplitudes psi_m, m = -j..+j."""

    j: SpinJ
    amps: np.ndarray

    def __post_init__(self):
        amps = _frozen(self.amps)
        if amps.shape != (self.j.dim,):
            raise DimensionMismatch(
                f"expected {self.j.dim} amplitudes for {self.j}, got shape {amps.shape}")
        norm = np.linalg.norm(amps)
        if abs(norm - 1.0) > NORM_TOL:
            raise ValueError(f"state is not normalized (|psi| = {norm!r})")
        object.__setattr__(self, "amps", amps)

    @classmethod
    def normalized(cls, j: SpinJ, amps) -> "SpinState":
        amps = np.asarray(amps, dtype=complex)
        return cls(j, amps / np.linalg.norm(amps))

    @property
    def dim(self) -> int:
        return self.j.dim

    def overlap(self, other: "SpinState") -> complex:
        _check_dims(self.j, other.j)
        return complex(np.vdot(self.amps, other.amps))

    def fidelity(self, other: "SpinState") -> float:
        """|<self|other>|, insensitive to global phase."""
        return abs(self.overlap(other))


@dataclass(frozen=True)
class OperatorMatrix:
    j: SpinJ
    entries: np.ndarray

    def __post_init__(self):
        entries = _frozen(self.entries)
        if entries.shape != (self.j.dim, self.j.dim):
            raise DimensionMismatch(
                f"expected {self.j.dim}x{self.j.dim} matrix for {self.j}, got {entries.shape}")
        object.__setattr__(self, "entries", entries)

    @property
    def dim(self) -> int:
        return self.j.dim

    def dagger(self) -> "OperatorMatrix":
        return OperatorMatrix(self.j, self.entries.conj().T)

    def hermitian_defect(self) -> float:
        return float(np.max(np.abs(self.entries - self.entries.conj().T), initial=0.0))

    def unitarity_defect(self) -> float:
        e = self.entries
        return float(np.max(np.abs(e.conj().T @ e - np.eye(self.dim))))

    def apply(self, state: SpinState) -> np.ndarray:
        _check_dims(self.j, state.j)
        return self.entries @ state.amps

    def __matmul__(self, other):
        if isinstance(other, OperatorMatrix):
            _check_dims(self.j, other.j)
            return OperatorMatrix(self.j, self.entries @ other.entries)
        return self.entries @ np.asarray(other)

    def __add__(self, other: "OperatorMatrix") -> "OperatorMatrix":
        _check_dims(self.j, other.j)
        return OperatorMatrix(self.j, self.entries + other.entries)

    def __sub__(self, other: "OperatorMatrix") -> "OperatorMatrix":
        _check_dims(self.j, other.j)
        return OperatorMatrix(self.j, self.entries - other.entries)


def _check_dims(a: SpinJ, b: SpinJ):
    if a.two_j != b.two_j:
        raise DimensionMismatch(f"{a} does not match {b}")


# Probe families. FockZ.m may be a number or the symbols "+j" / "-j", which
# resolve per photon number so one family spans a whole sweep over n.

@dataclass(frozen=True)
class FockZ:
    m: Union[float, str] = 0.0
    tag = "fockz"

    def resolve_m(self, j: SpinJ) -> float:
        if isinstance(self.m, str):
            key = self.m.strip().replace(" ", "")
            if key in ("j", "+j"):
                return j.j
            if key == "-j":
                return -j.j
            raise InvalidM(f"unrecognised symbolic m {self.m!r}")
        return float(self.m)

    @property
    def label(self) -> str:
        m = self.m if isinstance(self.m, str) else f"{self.m:g}"
        return f"fockz(m={m})"


@dataclass(frozen=True)
class Noon:
    zeta: float = 0.0
    tag = "noon"

    @property
    def label(self) -> str:
        return f"noon(zeta={self.zeta:.12g})"


@dataclass(frozen=True)
class PhaseState:
    gamma: float = 0.0
    tag = "phase"

    @property
    def label(self) -> str:
        return f"phase(gamma={self.gamma:.12g})"


ProbeFamily = Union[FockZ, Noon, PhaseState]


class Generators(NamedTuple):
    Jx: OperatorMatrix
    Jy: OperatorMatrix
    Jz: OperatorMatrix
    Jsq: OperatorMatrix


@functools.lru_cache(maxsize=None)
def _ladder(two_j: int):
    j = SpinJ(two_j)
    m = j.m_values
    # <m+1|J+|m> = sqrt(j(j+1) - m(m+1)), on the subdiagonal for ascending m
    raise_ = np.diag(np.sqrt(j.j * (j.j + 1) - m[:-1] * (m[:-1] + 1)), k=-1)
    return raise_, raise_.T.copy()


@functools.lru_cache(maxsize=None)
def _generators(two_j: int) -> Generators:
    j = SpinJ(two_j)
    jp, jm = _ladder(two_j)
    jx = (jp + jm) / 2
    jy = (jp - jm) / 2j
    jz = np.diag(j.m_values).astype(complex)
    jsq = j.j * (j.j + 1) * np.eye(j.dim)
    return Generators(*(OperatorMatrix(j, a) for a in (jx, jy, jz, jsq)))


def make_generators(j: SpinJ) -> Generators:
    """Angular momentum generators in the J_z basis, with [J_x, J_y] = i J_z."""
    return _generators(j.two_j)


@functools.lru_cache(maxsize=None)
def _y_basis(two_j: int) -> np.ndarray:
    from .wigner import wigner_d_column  # wigner imports SpinJ from here

    j = SpinJ(two_j)
    m = j.m_values
    # exp(i J_y pi/2) from closed-form columns; eigh would leave entries near
    # 1e-16 with no correct digits, and those set the tails of distributions.
    d90 = np.stack([wigner_d_column(j, mu, [np.pi / 2])[0] for mu in m], axis=1)
    # exp(i J_x pi/2) = exp(i J_z pi/2) exp(i J_y pi/2) exp(-i J_z pi/2)
    ph = np.exp(1j * m * np.pi / 2)
    u = ph[:, None] * d90 * ph.conj()[None, :]
    u.flags.writeable = False
    return u


def y_eigenbasis(j: SpinJ) -> OperatorMatrix:
    """Unitary whose k-th column is |j, m_k>_y in the J_z basis.

    The columns are fixed as exp(i J_x pi/2)|j, m>_z: the first beamsplitter
    of the interferometer undoes this rotation and returns |j, m>_y to
    |j, m>_z. Any J_y eigenbasis gives the same measurement statistics for
    eigenstates, but the relative phase between columns decides what the
    NOON phase zeta and the phase-state ramp gamma mean.
    """
    return OperatorMatrix(j, _y_basis(j.two_j))


def make_fock_z(j: SpinJ, m: float) -> SpinState:
    amps = np.zeros(j.dim, dtype=complex)
    amps[j.index(m)] = 1.0
    return SpinState(j, amps)


def make_noon(j: SpinJ, zeta: float = 0.0) -> SpinState:
    """(|j,+j>_y + e^{i zeta}|j,-j>_y)/sqrt(2), a NOON state after the first beamsplitter."""
    if j.two_j < 1:
        raise InvalidSpin("a NOON probe needs at least one photon")
    u = _y_basis(j.two_j)
    return SpinState(j, (u[:, -1] + np.exp(1j * zeta) * u[:, 0]) / np.sqrt(2))


def make_phase_state(j: SpinJ, gamma: float = 0.0) -> SpinState:
    u = _y_basis(j.two_j)
    coeffs = np.exp(1j * j.m_values * gamma) / np.sqrt(j.dim)
    return SpinState(j, u @ coeffs)


def make_probe(family: ProbeFamily, j: SpinJ) -> SpinState:
    if isinstance(family, FockZ):
        return make_fock_z(j, family.resolve_m(j))
    if isinstance(family, Noon):
        return make_noon(j, family.zeta)
    if isinstance(family, PhaseState):
        return make_phase_state(j, family.gamma)
    raise UnsupportedFamily(f"unknown probe family {family!r}")


def expectation(state: SpinState, op: OperatorMatrix, tol: float = 1e-12) -> float:
    """<psi|M|psi> for Hermitian M."""
    _check_dims(state.j, op.j)
    scale = max(1.0, float(np.max(np.abs(op.entries), initial=0.0)))
    if op.hermitian_defect() > tol * scale:
        raise NonHermitian(f"operator is not Hermitian (defect {op.hermitian_defect():.3g})")
    return float(np.vdot(state.amps, op.entries @ state.amps).real)
