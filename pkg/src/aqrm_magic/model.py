"""Asymmetric quantum Rabi model in a truncated Fock x qubit basis.

Basis ordering is interleaved: index ``2*n + s`` with ``s = 0`` for spin up
(Z = +1) and ``s = 1`` for spin down (Z = -1), ``n = 0..n_max``.  Every
full-space operator is therefore ``kron(boson_op, qubit_op)``.

The coupling is written so that ``g`` is the Rabi coupling of the
``xi = 1`` limit, ``g (a + a^dag) X``, and ``g (a sigma_+ + a^dag sigma_-)``
at ``xi = 0``::

    H = omega a^dag a + Delta Z
        + (g/2) [(1 + xi)(a + a^dag) X + (1 - xi)(a - a^dag) iY] + epsilon X
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

HERMITIAN_TOL = 1e-12

PAULI_X = np.array([[0, 1], [1, 0]], dtype=complex)
PAULI_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
PAULI_Z = np.array([[1, 0], [0, -1]], dtype=complex)
IDENTITY_2 = np.eye(2, dtype=complex)


@dataclass(frozen=True)
class ModelParams:
    """Hamiltonian parameters; energies share the unit of ``omega``.

    ``delta`` is the half qubit splitting (qubit frequency ``2*delta``),
    not the boson-qubit detuning.  Use :meth:`from_detuning` for the latter.
    """

    omega: float = 1.0
    delta: float = 0.5
    g: float = 0.0
    epsilon: float = 0.0
    xi: float = 1.0

    def __post_init__(self):
        values = (self.omega, self.delta, self.g, self.epsilon, self.xi)
        if not all(math.isfinite(float(v)) for v in values):
            raise ValueError(f"non-finite model parameter in {self}")
        if self.omega <= 0:
            raise ValueError(f"omega must be positive, got {self.omega}")
        if not 0.0 <= self.xi <= 1.0:
            raise ValueError(f"xi must lie in [0, 1], got {self.xi}")

    @classmethod
    def from_detuning(cls, detuning, omega=1.0, **kw):
        """Build parameters with ``Delta = (omega - detuning) / 2``."""
        return cls(omega=omega, delta=(omega - detuning) / 2.0, **kw)

    @property
    def detuning(self):
        return self.omega - 2.0 * self.delta

    def replace(self, **changes):
        data = dict(omega=self.omega, delta=self.delta, g=self.g,
                    epsilon=self.epsilon, xi=self.xi)
        data.update(changes)
        return ModelParams(**data)


@dataclass(frozen=True)
class TruncatedBasis:
    """Fock states ``0..n_max`` tensored with a qubit."""

    n_max: int

    def __post_init__(self):
        if int(self.n_max) != self.n_max or self.n_max < 1:
            raise ValueError(f"n_max must be an integer >= 1, got {self.n_max}")

    @property
    def n_levels(self):
        return self.n_max + 1

    @property
    def dim(self):
        return 2 * (self.n_max + 1)

    def index(self, n, spin_up):
        if not 0 <= n <= self.n_max:
            raise IndexError(f"Fock index {n} outside 0..{self.n_max}")
        return 2 * n + (0 if spin_up else 1)

    def labels(self):
        """``(n, m_s)`` for every basis index, in order."""
        return [(n, 0.5 if s == 0 else -0.5)
                for n in range(self.n_max + 1) for s in (0, 1)]

    def fock_numbers(self):
        return np.repeat(np.arange(self.n_max + 1), 2)

    def basis_state(self, n, spin_up):
        v = np.zeros(self.dim, dtype=complex)
        v[self.index(n, spin_up)] = 1.0
        return v

    def embed_qubit(self, op):
        return np.kron(np.eye(self.n_levels), op)

    def embed_boson(self, op):
        return np.kron(op, IDENTITY_2)


@dataclass(frozen=True)
class HermitianOperator:
    """Dense Hermitian matrix tagged with the basis it acts on."""

    matrix: np.ndarray = field(repr=False)
    basis: TruncatedBasis | None = None

    def __post_init__(self):
        m = np.asarray(self.matrix)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ValueError(f"operator must be square, got shape {m.shape}")
        if self.basis is not None and m.shape[0] != self.basis.dim:
            raise ValueError(f"matrix dim {m.shape[0]} does not match basis dim {self.basis.dim}")
        err = np.max(np.abs(m - m.conj().T)) if m.size else 0.0
        if err > HERMITIAN_TOL:
            raise ValueError(f"operator is not Hermitian (max deviation {err:.3e})")
        m = m.astype(complex, copy=True)
        m.flags.writeable = False
        object.__setattr__(self, "matrix", m)

    @property
    def dim(self):
        return self.matrix.shape[0]

    def expectation(self, state):
        return complex(np.vdot(state, self.matrix @ state))


def boson_ladder(n_max):
    """Annihilation operator on the truncated Fock space ``0..n_max``."""
    return np.diag(np.sqrt(np.arange(1, n_max + 1, dtype=float)), 1).astype(complex)


def build_ladder_operators(basis):
    """Return ``(a, a^dag)`` on the full basis (identity on the qubit).

    Hard truncation: ``a^dag |n_max>`` is dropped.
    """
    a = basis.embed_boson(boson_ladder(basis.n_max))
    return a, a.conj().T


def number_operator(basis):
    return HermitianOperator(basis.embed_boson(np.diag(np.arange(basis.n_levels, dtype=float))), basis)


def build_hamiltonian(params, basis):
    a, ad = build_ladder_operators(basis)
    X = basis.embed_qubit(PAULI_X)
    iY = basis.embed_qubit(1j * PAULI_Y)
    Z = basis.embed_qubit(PAULI_Z)
    n_op = basis.embed_boson(np.diag(np.arange(basis.n_levels, dtype=float)))
    xi, g = params.xi, params.g
    h = (params.omega * n_op + params.delta * Z + params.epsilon * X
         + 0.5 * g * ((1 + xi) * (a + ad) @ X + (1 - xi) * (a - ad) @ iY))
    # (a - a^dag) iY is Hermitian only up to rounding in the product; symmetrise.
    h = 0.5 * (h + h.conj().T)
    return HermitianOperator(h, basis)


def build_excitation_number(basis):
    """Total excitation number ``a^dag a + S_z + 1/2`` with ``S_z = Z/2``.

    Eigenvalues are integers: ``|n, up>`` carries ``n + 1``, ``|n, down>``
    carries ``n``.
    """
    n = basis.fock_numbers().astype(float)
    spin = np.tile([0.5, -0.5], basis.n_levels)
    return HermitianOperator(np.diag(n + spin + 0.5), basis)


def hermitian_expm(generator, coeff):
    """``exp(coeff * G)`` for Hermitian ``G`` via its eigendecomposition."""
    g = np.asarray(generator)
    w, v = np.linalg.eigh(g)
    return (v * np.exp(coeff * w)) @ v.conj().T


def build_parity(basis):
    """Parity ``exp(i pi Lambda)``; real with eigenvalues +-1."""
    lam = build_excitation_number(basis).matrix
    p = hermitian_expm(lam, 1j * np.pi)
    # exp(i pi k) for integer k is real; the imaginary part is rounding only.
    p = p.real.astype(complex)
    return HermitianOperator(0.5 * (p + p.conj().T), basis)


def jc_doublet_oracle(params, excitations):
    """Closed-form Jaynes-Cummings doublet for ``Lambda = excitations >= 1``.

    Diagonalises the block spanned by ``|Lambda-1, up>`` and ``|Lambda, down>``.
    Returns ``(E_minus, E_plus, mixing_angle)`` with
    ``tan(theta) = 2 g sqrt(Lambda) / (2 Delta - omega)``, ``theta`` in ``[0, pi]``.
    """
    if params.xi != 0:
        raise ValueError("the Jaynes-Cummings oracle requires xi = 0")
    lam = int(excitations)
    if lam != excitations or lam < 1:
        raise ValueError(f"excitation number must be a positive integer, got {excitations}")
    w, d, g = params.omega, params.delta, params.g
    e_up = w * (lam - 1) + d
    e_down = w * lam - d
    coupling = g * math.sqrt(lam)
    mean = 0.5 * (e_up + e_down)
    half_gap = math.hypot(0.5 * (e_up - e_down), coupling)
    theta = math.atan2(2.0 * g * math.sqrt(lam), 2.0 * d - w)
    if theta < 0:
        theta += math.pi
    return mean - half_gap, mean + half_gap, theta


def polaron_hamiltonian(params, basis):
    """``U^dag H U`` with ``U = exp[-(g/omega) X (a^dag - a)]`` (Rabi limit only)."""
    if params.xi != 1:
        raise ValueError("the polaron frame is defined for xi = 1")
    h = build_hamiltonian(params, basis).matrix
    if params.g == 0:
        return HermitianOperator(h, basis)
    a, ad = build_ladder_operators(basis)
    X = basis.embed_qubit(PAULI_X)
    # -(g/omega) X (a^dag - a) = i * M with M = i (g/omega) X (a^dag - a) Hermitian
    m = 1j * (params.g / params.omega) * X @ (ad - a)
    m = 0.5 * (m + m.conj().T)
    u = hermitian_expm(m, 1j)
    hp = u.conj().T @ h @ u
    return HermitianOperator(0.5 * (hp + hp.conj().T), basis)


def commutator_max(a, b, basis=None, exclude_top_layers=0):
    """Largest entry of ``[A, B]``, optionally ignoring the top Fock layers."""
    a = getattr(a, "matrix", a)
    b = getattr(b, "matrix", b)
    c = a @ b - b @ a
    if exclude_top_layers and basis is not None:
        keep = 2 * max(basis.n_levels - exclude_top_layers, 0)
        c = c[:keep, :keep]
    return float(np.max(np.abs(c))) if c.size else 0.0
