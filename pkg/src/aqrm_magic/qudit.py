"""Discrete phase-space magic quantifiers: Wigner tables, mana, witness, entropy.

Logarithm conventions: mana uses log base 2, entropy the natural log.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import NamedTuple

import numpy as np

from .model import IDENTITY_2, PAULI_X, PAULI_Y, PAULI_Z
from .reduction import BlochVector, bloch_vector, density_from_bloch

# entries in (-NEGATIVITY_FLOOR, 0) count as zero
NEGATIVITY_FLOOR = 1e-14

MARCHIOLLI = "marchiolli"
WOOTTERS = "wootters"
ODD_PRIME = "odd-prime-ppo"


def _is_prime(d):
    return d >= 2 and all(d % p for p in range(2, int(math.isqrt(d)) + 1))


def _tau(d):
    return -np.exp(1j * np.pi / d)


def clock_shift(d):
    """Generalised Pauli ``(X, Z)`` with ``Z = sum tau^{2j} |j><j|``."""
    x = np.roll(np.eye(d, dtype=complex), 1, axis=0)
    z = np.diag(_tau(d) ** (2 * np.arange(d)))
    return x, z


def heisenberg_weyl(d, k, l):
    """Discrete displacement ``D_{k,l} = tau^{kl} X^k Z^l``."""
    if d < 2:
        raise ValueError(f"dimension must be >= 2, got {d}")
    if not (0 <= k < d and 0 <= l < d):
        raise IndexError(f"({k}, {l}) outside Z_{d} x Z_{d}")
    x, z = clock_shift(d)
    return _tau(d) ** (k * l) * np.linalg.matrix_power(x, k) @ np.linalg.matrix_power(z, l)


def discrete_parity(d):
    return sum(heisenberg_weyl(d, k, l) for k in range(d) for l in range(d)) / d


@lru_cache(maxsize=8)
def phase_point_operators(d):
    """``A_{k,l} = D_{k,l} P D_{k,l}^dag`` for odd prime ``d`` (shape ``(d, d, d, d)``)."""
    p = discrete_parity(d)
    out = np.empty((d, d, d, d), dtype=complex)
    for k in range(d):
        for l in range(d):
            dk = heisenberg_weyl(d, k, l)
            out[k, l] = dk @ p @ dk.conj().T
    out.flags.writeable = False
    return out


def qubit_kernel(k, l, convention=MARCHIOLLI):
    """Two-level phase-point operator for the chosen convention."""
    if convention == MARCHIOLLI:
        y_sign = (-1) ** (k + l + 1)
    elif convention == WOOTTERS:
        y_sign = (-1) ** (k + l)
    else:
        raise ValueError(f"unknown qubit Wigner convention {convention!r}")
    return 0.5 * (IDENTITY_2 + (-1) ** l * PAULI_X + y_sign * PAULI_Y + (-1) ** k * PAULI_Z)


@dataclass(frozen=True)
class DiscreteWignerTable:
    values: np.ndarray
    convention: str

    @property
    def d(self):
        return self.values.shape[0]

    def total(self):
        return float(self.values.sum())


def discrete_wigner_qubit(rho, convention=MARCHIOLLI):
    """``W(k, l) = tr(rho W_kl) / 2`` so the table sums to one."""
    rho = np.asarray(rho)
    values = np.array([[0.5 * np.trace(rho @ qubit_kernel(k, l, convention)).real
                        for l in (0, 1)] for k in (0, 1)])
    return DiscreteWignerTable(values, convention)


def discrete_wigner_qudit(rho, d=None):
    """Phase-point-operator Wigner table ``tr(rho A_kl) / d`` for odd prime ``d``."""
    rho = np.asarray(rho)
    d = rho.shape[0] if d is None else d
    if d % 2 == 0 or not _is_prime(d):
        raise ValueError(f"phase-point-operator Wigner function needs an odd prime d, got {d}")
    if rho.shape != (d, d):
        raise ValueError(f"density matrix shape {rho.shape} does not match d={d}")
    a = phase_point_operators(d)
    values = np.einsum("ij,klji->kl", rho, a).real / d
    return DiscreteWignerTable(values, ODD_PRIME)


def sum_negativity(table):
    v = np.asarray(getattr(table, "values", table))
    neg = v[v <= -NEGATIVITY_FLOOR]
    return float(-neg.sum())


def mana(table):
    return math.log2(2.0 * sum_negativity(table) + 1.0)


def dai_fu_luo(rho):
    """Characteristic-function witness ``sum_{k,l in Z_2} |tr(rho D_kl)|``."""
    rho = np.asarray(rho)
    return float(sum(abs(np.trace(rho @ heisenberg_weyl(2, k, l)))
                     for k in (0, 1) for l in (0, 1)))


def von_neumann_entropy(rho):
    w = np.linalg.eigvalsh(np.asarray(rho))
    w = w[w > 0]
    return float(-(w * np.log(w)).sum())


class WitnessEntropy(NamedTuple):
    witness: float
    entropy_slope_form: float
    bound: float

    @property
    def gap(self):
        return abs(self.witness - self.entropy_slope_form)


def witness_entropy_relation(rho):
    """Compare ``M`` with ``1 - dS/d|s|`` for a state on the z axis.

    For such states ``M = 1 + |s|`` and ``dS/d|s| = -arctanh|s|``; the two
    differ by ``|s|^3/3 + ...``, so ``|s|^3`` bounds the gap for ``|s| <= 0.5``.
    """
    b = bloch_vector(rho)
    if abs(b.s_x) + abs(b.s_y) > 1e-8:
        raise ValueError("witness-entropy relation needs s_x = s_y = 0")
    s = abs(b.s_z)
    slope = -math.atanh(s) if s < 1 else -math.inf
    return WitnessEntropy(dai_fu_luo(rho), 1.0 - slope, s ** 3)


def entropy_of_bloch_length(s):
    """Closed-form qubit entropy as a function of ``|s|``."""
    terms = [(1 - s) * math.log(1 - s) if s < 1 else 0.0, (1 + s) * math.log(1 + s)]
    return math.log(2) - 0.5 * sum(terms)


@dataclass(frozen=True)
class ReferenceStates:
    h_states: tuple
    t_state: np.ndarray


def reference_states():
    """The four x-z plane H-type projectors and the body-diagonal T projector."""
    r = 1 / math.sqrt(2)
    h = tuple(density_from_bloch(sx * r, 0.0, sz * r) for sx in (1, -1) for sz in (1, -1))
    t = density_from_bloch(*(np.ones(3) / math.sqrt(3)))
    return ReferenceStates(h, t)


MANA_H = math.log2((1 + math.sqrt(2)) / 2)


@dataclass(frozen=True)
class MagicReport:
    mana: float
    sum_negativity: float
    dai_fu_luo: float
    entropy: float
    bloch: BlochVector | None = None

    @property
    def is_magic(self):
        return self.dai_fu_luo > 2


def magic_report(rho, convention=MARCHIOLLI):
    rho = np.asarray(rho)
    if rho.shape == (2, 2):
        table = discrete_wigner_qubit(rho, convention)
        witness, bloch = dai_fu_luo(rho), bloch_vector(rho)
    else:
        table = discrete_wigner_qudit(rho)
        witness, bloch = math.nan, None
    sn = sum_negativity(table)
    return MagicReport(mana=math.log2(2 * sn + 1), sum_negativity=sn,
                       dai_fu_luo=witness, entropy=von_neumann_entropy(rho), bloch=bloch)
