"""Partial traces of pure boson x qubit states and Bloch-sphere coordinates."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .model import PAULI_X, PAULI_Y, PAULI_Z

NORM_TOL = 1e-8
PSD_TOL = 1e-10


class DensityMatrixError(ValueError):
    pass


def _coefficients(state):
    """Reshape a product-basis vector into ``C[n, s]``."""
    v = np.asarray(state, dtype=complex).ravel()
    if v.size % 2:
        raise ValueError(f"state length {v.size} is not a boson x qubit dimension")
    norm = np.linalg.norm(v)
    if abs(norm - 1.0) > NORM_TOL:
        raise DensityMatrixError(f"state is not normalised (norm {norm:.12g})")
    return v.reshape(-1, 2)


def validate_density(rho, trace_tol=1e-10, psd_tol=PSD_TOL):
    """Check trace, Hermiticity and positivity; raise instead of repairing."""
    rho = np.asarray(rho)
    if abs(np.trace(rho) - 1.0) > trace_tol:
        raise DensityMatrixError(f"trace {np.trace(rho)} differs from 1")
    if np.max(np.abs(rho - rho.conj().T)) > 1e-12:
        raise DensityMatrixError("density matrix is not Hermitian")
    lowest = np.linalg.eigvalsh(rho).min()
    if lowest < -psd_tol:
        raise DensityMatrixError(f"density matrix has negative eigenvalue {lowest:.3e}")
    return rho


def trace_out_boson(state, basis=None):
    """Qubit density ``rho_S[s, s'] = sum_n C[n, s] conj(C[n, s'])``."""
    c = _coefficients(state)
    rho = c.T @ c.conj()
    return 0.5 * (rho + rho.conj().T)


def trace_out_qubit(state, basis=None):
    """Boson density ``rho_B[n, n'] = sum_s C[n, s] conj(C[n', s])``."""
    c = _coefficients(state)
    rho = c @ c.conj().T
    return 0.5 * (rho + rho.conj().T)


@dataclass(frozen=True)
class BlochVector:
    s_x: float
    s_y: float
    s_z: float

    @property
    def norm(self):
        return math.sqrt(self.s_x ** 2 + self.s_y ** 2 + self.s_z ** 2)

    @property
    def theta(self):
        """Polar angle from +z."""
        n = self.norm
        return math.acos(max(-1.0, min(1.0, self.s_z / n))) if n > 0 else 0.0

    @property
    def phi(self):
        """Azimuth in the x-y plane."""
        return math.atan2(self.s_y, self.s_x)

    def as_array(self):
        return np.array([self.s_x, self.s_y, self.s_z])


def bloch_vector(rho):
    rho = np.asarray(rho)
    return BlochVector(*(float(np.trace(rho @ p).real) for p in (PAULI_X, PAULI_Y, PAULI_Z)))


def density_from_bloch(s_x, s_y, s_z):
    return 0.5 * (np.eye(2) + s_x * PAULI_X + s_y * PAULI_Y + s_z * PAULI_Z)


def mean_boson_number(rho):
    rho = np.asarray(rho)
    return float(np.real(np.arange(rho.shape[0]) @ np.diag(rho)))
