"""Dense diagonalisation, eigenstate ordering and truncation convergence."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np
import scipy.linalg

from .model import (PAULI_Z, TruncatedBasis, build_excitation_number,
                    build_hamiltonian, build_parity)

CONVERGENCE_TOL = 1e-6
PARITY_TOL = 1e-6
DEGENERACY_TOL = 1e-10


class EigensolverError(RuntimeError):
    pass


@dataclass
class EigenSolution:
    """Eigenpairs sorted by energy; ``states[:, k]`` belongs to ``energies[k]``."""

    energies: np.ndarray
    states: np.ndarray = field(repr=False)
    basis: TruncatedBasis | None = None
    converged: np.ndarray | None = None
    parity: list | None = None

    def __len__(self):
        return len(self.energies)

    def state(self, k):
        return self.states[:, k]


def default_tail_levels(n_max):
    return max(2, math.ceil(n_max / 10))


def _tie_break(energies, vecs, operators, tol):
    """Rotate each degenerate cluster onto eigenvectors of the tie-break operators.

    Within a cluster the states are ordered by ascending expectation of the
    first operator, then the next one for remaining ties.
    """
    n = len(energies)
    scale = max(1.0, float(np.max(np.abs(energies)))) if n else 1.0
    start = 0
    while start < n:
        stop = start + 1
        while stop < n and energies[stop] - energies[stop - 1] <= tol * scale:
            stop += 1
        if stop - start > 1:
            vecs[:, start:stop] = _split_cluster(vecs[:, start:stop], operators, tol)
        start = stop
    return vecs


def _split_cluster(block, operators, tol):
    if not operators:
        return block
    op, rest = operators[0], operators[1:]
    small = block.conj().T @ op @ block
    w, u = np.linalg.eigh(0.5 * (small + small.conj().T))
    block = block @ u
    out = np.empty_like(block)
    i = 0
    while i < len(w):
        j = i + 1
        while j < len(w) and w[j] - w[i] <= 1e-8:
            j += 1
        out[:, i:j] = _split_cluster(block[:, i:j], rest, tol) if j - i > 1 else block[:, i:j]
        i = j
    return out


def _fix_gauge(vecs):
    """Make the largest-magnitude coefficient of each column real and positive."""
    mags = np.abs(vecs)
    for k in range(vecs.shape[1]):
        col = mags[:, k]
        idx = int(np.flatnonzero(col >= col.max() * (1 - 1e-9))[0])
        phase = vecs[idx, k] / abs(vecs[idx, k])
        vecs[:, k] /= phase
    return vecs


def diagonalize(operator, degeneracy_tol=DEGENERACY_TOL):
    """Full Hermitian eigendecomposition with deterministic ordering and gauge.

    Degenerate levels are resolved by the excitation number and then by Z
    when the operator carries a :class:`TruncatedBasis`.
    """
    h = np.asarray(getattr(operator, "matrix", operator))
    basis = getattr(operator, "basis", None)
    try:
        energies, vecs = scipy.linalg.eigh(h, driver="evd")
    except (np.linalg.LinAlgError, ValueError) as exc:
        raise EigensolverError(f"eigensolver failed: {exc}") from exc
    if not np.all(np.isfinite(energies)):
        raise EigensolverError("eigensolver returned non-finite eigenvalues")
    vecs = np.asarray(vecs, dtype=complex)
    if basis is not None:
        ops = [build_excitation_number(basis).matrix, basis.embed_qubit(PAULI_Z)]
        vecs = _tie_break(energies, vecs, ops, degeneracy_tol)
        weights = np.abs(vecs) ** 2
        # both tie-break operators are diagonal in the product basis
        lam = np.diag(ops[0]).real @ weights
        z = np.diag(ops[1]).real @ weights
        # Energies within a cluster are equal to tolerance; order by (E, Lambda, Z).
        rounded = _cluster_ids(energies, degeneracy_tol)
        order = np.lexsort((np.round(z, 8), np.round(lam, 8), rounded))
        energies, vecs = energies[order], vecs[:, order]
    vecs = _fix_gauge(vecs)
    return EigenSolution(energies=np.asarray(energies, float), states=vecs, basis=basis)


def _cluster_ids(energies, tol):
    scale = max(1.0, float(np.max(np.abs(energies)))) if len(energies) else 1.0
    ids = np.zeros(len(energies), dtype=int)
    for k in range(1, len(energies)):
        ids[k] = ids[k - 1] + (energies[k] - energies[k - 1] > tol * scale)
    return ids


def tail_weight(state, basis, tail_levels=None):
    tail_levels = default_tail_levels(basis.n_max) if tail_levels is None else tail_levels
    probs = np.abs(np.asarray(state)) ** 2
    return float(probs[2 * max(basis.n_levels - tail_levels, 0):].sum())


def check_convergence(state, basis, tail_levels=None, tol=CONVERGENCE_TOL):
    """True when the weight in the top ``tail_levels`` Fock layers is at most ``tol``."""
    return tail_weight(state, basis, tail_levels) <= tol


def parity_label(state, parity):
    """+1 / -1 for a definite-parity state, ``None`` otherwise."""
    value = getattr(parity, "expectation", None)
    p = value(state) if value else complex(np.vdot(state, parity @ state))
    if abs(p) > 1 - PARITY_TOL:
        return 1 if p.real > 0 else -1
    return None


@lru_cache(maxsize=16)
def _parity_diagonal(n_max):
    return np.diag(build_parity(TruncatedBasis(n_max)).matrix).real.copy()


def label_solution(sol, tail_levels=None, tol=CONVERGENCE_TOL):
    """Fill in convergence flags and parity labels in place."""
    basis = sol.basis
    tail_levels = default_tail_levels(basis.n_max) if tail_levels is None else tail_levels
    weights = np.abs(sol.states) ** 2
    tail = weights[2 * max(basis.n_levels - tail_levels, 0):].sum(axis=0)
    sol.converged = tail <= tol
    # parity is diagonal in the product basis
    expect = _parity_diagonal(basis.n_max) @ weights
    sol.parity = [(1 if p > 0 else -1) if abs(p) > 1 - PARITY_TOL else None for p in expect]
    return sol


def solve(params, n_max, tail_levels=None, tol=CONVERGENCE_TOL):
    basis = TruncatedBasis(n_max)
    sol = diagonalize(build_hamiltonian(params, basis))
    return label_solution(sol, tail_levels, tol)


def solve_adaptive(params, wanted, start=40, cap=400, tail_levels=None,
                   tol=CONVERGENCE_TOL):
    """Double ``n_max`` from ``start`` until every wanted state has converged.

    ``wanted(solution)`` returns the state indices that must converge.  The
    last solution is returned even if ``cap`` is reached without convergence.
    """
    n_max = start
    while True:
        sol = solve(params, n_max, tail_levels, tol)
        idx = list(wanted(sol))
        if all(sol.converged[k] for k in idx) or n_max >= cap:
            return sol
        n_max = min(2 * n_max, cap)
