"""Continuous Wigner functions of boson density matrices in the Fock basis.

Convention: ``a = (q + i p) / sqrt(2)`` and ``int W dq dp = 1``, so the
vacuum is ``exp(-r^2) / pi`` and ``|W| <= 1 / pi``.  The Wigner logarithmic
negativity ("bosonic mana") is ``log2 int |W| dq dp``.
"""

from __future__ import annotations

import logging
import math
import warnings
from dataclasses import dataclass, field

import numpy as np

log = logging.getLogger(__name__)

MAX_FOCK = 1000
DEFAULT_SPACING = 0.05
DEFAULT_MARGIN = 4.0
EXTENT_WEIGHT_TOL = 1e-8
ASSEMBLY_WEIGHT_TOL = 1e-14
IMAG_WARN = 1e-9
IMAG_ERROR = 1e-6


class WignerError(ValueError):
    pass


class GridExtentWarning(UserWarning):
    pass


@dataclass(frozen=True)
class PhaseSpaceGrid:
    """Square grid ``q, p = i * spacing`` for ``i = -half..half``.

    Nodes sit on integer multiples of the spacing, so ``r^2`` takes
    ``spacing^2 * (i^2 + j^2)`` with integer ``i^2 + j^2``; radial functions
    are evaluated once per distinct radius.
    """

    half: int
    spacing: float = DEFAULT_SPACING

    def __post_init__(self):
        if self.half < 1 or not self.spacing > 0:
            raise ValueError("grid needs half >= 1 and positive spacing")

    @classmethod
    def covering(cls, radius, spacing=DEFAULT_SPACING):
        return cls(int(math.ceil(radius / spacing - 1e-9)), spacing)

    @property
    def q_max(self):
        return self.half * self.spacing

    p_max = q_max

    @property
    def n_q(self):
        return 2 * self.half + 1

    n_p = n_q

    @property
    def dq(self):
        return 2 * self.q_max / (self.n_q - 1)

    dp = dq

    @property
    def cell(self):
        return self.dq * self.dp

    @property
    def axis(self):
        return self.spacing * np.arange(-self.half, self.half + 1)

    def mesh(self):
        """``(Q, P)`` with ``Q[i, j] = q_i`` and ``P[i, j] = p_j``."""
        return np.meshgrid(self.axis, self.axis, indexing="ij")

    def refined(self, factor=2):
        return PhaseSpaceGrid(self.half * factor, self.spacing / factor)

    def _integer_radii(self):
        i = np.arange(-self.half, self.half + 1)
        return i[:, None] ** 2 + i[None, :] ** 2


def default_grid(rho, spacing=DEFAULT_SPACING, margin=DEFAULT_MARGIN,
                 weight_tol=EXTENT_WEIGHT_TOL):
    """Grid of half-width ``sqrt(2 n_eff + 1) + margin``.

    ``n_eff`` is the smallest Fock index holding ``1 - weight_tol`` of the trace.
    """
    return PhaseSpaceGrid.covering(math.sqrt(2 * effective_fock(rho, weight_tol) + 1) + margin,
                                   spacing)


def effective_fock(rho, weight_tol=EXTENT_WEIGHT_TOL):
    pops = np.clip(np.real(np.diag(np.asarray(rho))), 0, None)
    total = pops.sum()
    cum = np.cumsum(pops)
    return int(np.searchsorted(cum, total * (1 - weight_tol)))


def laguerre(n, alpha, x):
    """Generalised Laguerre ``L_n^alpha(x)`` by upward three-term recurrence."""
    x = np.asarray(x, dtype=float)
    prev = np.zeros_like(x)
    cur = np.ones_like(x)
    for m in range(n):
        prev, cur = cur, ((2 * m + 1 + alpha - x) * cur - (m + alpha) * prev) / (m + 1)
    return cur


def laguerre_functions(n_top, k, x):
    """Rows ``m = 0..n_top`` of ``sqrt(m!/(m+k)!) x^{k/2} e^{-x/2} L_m^k(x)``.

    The normalised recurrence
    ``f_{m+1} = [(2m+1+k-x) f_m - sqrt(m(m+k)) f_{m-1}] / sqrt((m+1)(m+k+1))``
    keeps every value O(1); the seed is formed in log space.
    """
    x = np.asarray(x, dtype=float)
    out = np.empty((n_top + 1,) + x.shape)
    if k == 0:
        out[0] = np.exp(-0.5 * x)
    else:
        with np.errstate(divide="ignore"):
            out[0] = np.exp(0.5 * k * np.log(x) - 0.5 * x - 0.5 * math.lgamma(k + 1))
    if n_top >= 1:
        out[1] = (1 + k - x) * out[0] / math.sqrt(k + 1)
    for m in range(1, n_top):
        out[m + 1] = (((2 * m + 1 + k - x) * out[m] - math.sqrt(m * (m + k)) * out[m - 1])
                      / math.sqrt((m + 1) * (m + k + 1)))
    return out


def _check_order(*ns):
    for n in ns:
        if int(n) != n or n < 0:
            raise WignerError(f"Fock index must be a non-negative integer, got {n}")
        if n > MAX_FOCK:
            raise WignerError(f"Fock index {n} beyond supported bound {MAX_FOCK}")


def wigner_transition(n, m, grid):
    """Complex Weyl symbol of ``|n><m|`` on the grid.

    For ``n <= m`` the angular factor is ``exp(+i (m - n) phi)`` so that
    ``int W alpha^* = tr(|n><m| a^dag)``.
    """
    _check_order(n, m)
    q, p = grid.mesh()
    x = 2 * (q ** 2 + p ** 2)
    lo, k = min(n, m), abs(n - m)
    radial = (-1) ** lo / math.pi * laguerre_functions(lo, k, x)[lo]
    phase = np.exp(1j * k * np.arctan2(p, q))
    field_ = radial * phase
    return field_ if n <= m else field_.conj()


def fock_wigner(n, grid):
    """Closed form ``(-1)^n / pi exp(-r^2) L_n(2 r^2)`` via scipy."""
    from scipy.special import eval_laguerre

    q, p = grid.mesh()
    r2 = q ** 2 + p ** 2
    return (-1) ** n / math.pi * np.exp(-r2) * eval_laguerre(n, 2 * r2)


@dataclass
class WignerField:
    values: np.ndarray = field(repr=False)
    grid: PhaseSpaceGrid
    renormalized: bool = False
    raw_integral: float = math.nan
    imag_residue: float = 0.0

    def integral(self):
        return float(self.values.sum() * self.grid.cell)

    def abs_integral(self):
        return float(np.abs(self.values).sum() * self.grid.cell)

    def renormalize(self):
        total = self.integral()
        if not self.renormalized:
            self.raw_integral = total
        self.values = self.values / total
        self.renormalized = True
        return self


def _assembly_cutoff(rho):
    pops = np.clip(np.real(np.diag(rho)), 0, None)
    tail = np.cumsum(pops[::-1])[::-1]
    keep = np.flatnonzero(tail > ASSEMBLY_WEIGHT_TOL * max(pops.sum(), 1e-300))
    return int(keep[-1]) + 1 if keep.size else 1


def wigner_of_density(rho, grid=None, renormalize=True):
    """Assemble ``W = sum_{n,m} rho[n, m] W_{|n><m|}`` and renormalise.

    Terms are grouped by Fock offset ``k = m - n``; each offset needs one
    Laguerre-function recurrence on the distinct radii of the grid.
    """
    rho = np.asarray(rho, dtype=complex)
    if rho.ndim != 2 or rho.shape[0] != rho.shape[1]:
        raise WignerError(f"density matrix must be square, got {rho.shape}")
    grid = default_grid(rho) if grid is None else grid
    size = _assembly_cutoff(rho)
    _check_order(size - 1)
    rho = rho[:size, :size]

    ints = grid._integer_radii()
    uniq, inverse = np.unique(ints, return_inverse=True)
    inverse = inverse.reshape(ints.shape)
    x = 2.0 * grid.spacing ** 2 * uniq
    q, p = grid.mesh()
    unit = np.exp(1j * np.arctan2(p, q))

    signs = (-1.0) ** np.arange(size)
    real = np.zeros(ints.shape)
    imag = np.zeros(ints.shape)
    rot = np.ones(ints.shape, dtype=complex)
    for k in range(size):
        top = size - 1 - k
        lf = laguerre_functions(top, k, x)
        upper = np.array([rho[j, j + k] for j in range(top + 1)]) * signs[: top + 1]
        lower = np.array([rho[j + k, j] for j in range(top + 1)]) * signs[: top + 1]
        s_up = (upper @ lf)[inverse]
        if k == 0:
            term = s_up
        else:
            s_lo = (lower @ lf)[inverse]
            term = s_up * rot + s_lo * rot.conj()
        real += term.real
        imag += term.imag
        rot = rot * unit
    real /= math.pi
    imag /= math.pi
    residue = float(np.max(np.abs(imag))) if imag.size else 0.0
    if residue > IMAG_ERROR:
        raise WignerError(f"imaginary Wigner residue {residue:.2e}: density matrix not Hermitian")
    if residue > IMAG_WARN:
        log.warning("imaginary Wigner residue %.2e discarded", residue)
    wf = WignerField(real, grid, imag_residue=residue)
    wf.raw_integral = wf.integral()
    if renormalize:
        wf.renormalize()
    return wf


def edge_fraction(wf, ring=0.05):
    """Share of ``int |W|`` lying in the outer ``ring`` fraction of the grid."""
    g = wf.grid
    q, p = g.mesh()
    inner = (1 - ring) * g.q_max
    mask = (np.abs(q) > inner) | (np.abs(p) > inner)
    total = np.abs(wf.values).sum()
    return float(np.abs(wf.values[mask]).sum() / total) if total else 0.0


def wigner_log_negativity(wf):
    """``log2 int |W| dq dp``; clamps grid noise below zero."""
    frac = edge_fraction(wf)
    if frac > 0.01:
        warnings.warn(f"{100 * frac:.1f}% of |W| lies on the grid edge; extend the grid",
                      GridExtentWarning, stacklevel=2)
    value = math.log2(wf.abs_integral())
    return max(value, 0.0)


def bosonic_mana(rho, grid=None, spacing=DEFAULT_SPACING, margin=DEFAULT_MARGIN):
    grid = default_grid(rho, spacing, margin) if grid is None else grid
    wf = wigner_of_density(rho, grid)
    log.debug("Wigner raw integral %.12g (renormalised)", wf.raw_integral)
    return wigner_log_negativity(wf)


def export_field(wf, path):
    """Write the field as CSV (``.csv``) or ``.npz`` with a geometry header."""
    path = str(path)
    g = wf.grid
    meta = dict(q_max=g.q_max, p_max=g.p_max, n_q=g.n_q, n_p=g.n_p, dq=g.dq, dp=g.dp,
                normalization="renormalized" if wf.renormalized else "raw",
                raw_integral=wf.raw_integral, rows="q", columns="p")
    if path.endswith(".npz"):
        np.savez(path, values=wf.values, q=g.axis, p=g.axis, **{k: np.asarray(v) for k, v in meta.items()})
        return path
    header = " ".join(f"{k}={v}" for k, v in meta.items())
    np.savetxt(path, wf.values, delimiter=",", header=header, fmt="%.17g")
    return path


def read_field(path):
    path = str(path)
    if path.endswith(".npz"):
        data = np.load(path)
        spacing = float(data["dq"])
        half = (int(data["n_q"]) - 1) // 2
        return WignerField(data["values"], PhaseSpaceGrid(half, spacing),
                           renormalized=str(data["normalization"]) == "renormalized",
                           raw_integral=float(data["raw_integral"]))
    with open(path) as fh:
        header = fh.readline().lstrip("# ").split()
    meta = dict(item.split("=", 1) for item in header)
    values = np.loadtxt(path, delimiter=",")
    half = (int(meta["n_q"]) - 1) // 2
    return WignerField(values, PhaseSpaceGrid(half, float(meta["dq"])),
                       renormalized=meta["normalization"] == "renormalized",
                       raw_integral=float(meta["raw_integral"]))
