"""Acceptance criteria 1-13, each at its stated tolerance.

Every test records one PASS/FAIL line (collected in the terminal summary).
Criteria that do not hold for this model are kept literal and marked as
strict expected failures; the attainable parts are checked separately.
"""

import math

import numpy as np
import pytest

from aqrm_magic.model import (ModelParams, TruncatedBasis, build_excitation_number,
                              build_hamiltonian, jc_doublet_oracle, polaron_hamiltonian)
from aqrm_magic.qudit import (MANA_H, MARCHIOLLI, WOOTTERS, dai_fu_luo, discrete_wigner_qubit,
                              magic_report, mana, reference_states, von_neumann_entropy,
                              witness_entropy_relation)
from aqrm_magic.reduction import (bloch_vector, density_from_bloch, trace_out_boson,
                                  trace_out_qubit, validate_density)
from aqrm_magic.spectral import solve, solve_adaptive
from aqrm_magic.wigner import (PhaseSpaceGrid, bosonic_mana, fock_wigner, wigner_of_density,
                               wigner_transition)

pytestmark = pytest.mark.acceptance

ONE_PHOTON = math.log2(4 * math.exp(-0.5) - 1)
FOCK_MANA_ORACLE = [0.0, 0.5120980511041957, 0.7899289055415751, 0.9830745053062815,
                    1.1318149794186685]


def eigenstate(params, k):
    sol = solve_adaptive(params, lambda s: [k])
    assert sol.converged[k]
    return sol.state(k)


def qubit_report(params, k):
    return magic_report(trace_out_boson(eigenstate(params, k)))


def boson_mana(params, k, spacing=0.05):
    return bosonic_mana(trace_out_qubit(eigenstate(params, k)), spacing=spacing)


def converged_reports(params, n_max=80):
    sol = solve(params, n_max)
    return [(k, magic_report(trace_out_boson(sol.state(k))))
            for k in range(len(sol)) if sol.converged[k]]


def fock(n):
    rho = np.zeros((n + 1, n + 1))
    rho[n, n] = 1
    return rho


def test_c01_golden_numbers(criterion):
    refs = reference_states()
    h = refs.h_states[0]
    m_h = mana(discrete_wigner_qubit(h))
    errs = [abs(m_h - 0.271553), abs(dai_fu_luo(h) - (1 + math.sqrt(2))),
            abs(dai_fu_luo(refs.t_state) - (1 + math.sqrt(3))),
            abs(von_neumann_entropy(0.5 * np.eye(2)) - math.log(2))]
    ok = errs[0] <= 1e-6 and max(errs[1:]) <= 1e-12
    criterion(1, ok, f"mana_H={m_h:.7f}, witness/entropy errors {max(errs[1:]):.1e}")
    assert ok


def test_c02_bosonic_calibration(criterion):
    default = bosonic_mana(fock(1))
    half = bosonic_mana(fock(1), spacing=0.025)
    ok = abs(default - 0.512) <= 0.005 and abs(half - ONE_PHOTON) <= 1e-4
    criterion(2, ok, f"default grid {default:.6f}, half spacing {half:.7f}, "
                     f"analytic {ONE_PHOTON:.7f}")
    assert ok


@pytest.mark.xfail(strict=True, reason="the JC ground state |0,down> is a product state: "
                                       "M = 2 and S = 0, not M = 1 and S = ln 2")
def test_c03_jc_null_result(criterion):
    worst = []
    for g in (0.1, 0.25, 1.0):
        for k, rep in converged_reports(ModelParams(delta=0.5, g=g, epsilon=0, xi=0)):
            if not (rep.mana <= 1e-10 and abs(rep.dai_fu_luo - 1) <= 1e-8
                    and abs(rep.entropy - math.log(2)) <= 1e-8):
                worst.append((g, k, rep.dai_fu_luo, rep.entropy))
    ok = not worst
    criterion(3, ok, f"{len(worst)} violating states, e.g. (g, k, M, S)={worst[:1]}")
    assert ok


def test_c03_jc_null_result_excited_doublets(criterion):
    """The attainable part: every state with at least one excitation."""
    count = 0
    ok = True
    for g in (0.1, 0.25, 1.0):
        b = TruncatedBasis(80)
        lam = build_excitation_number(b)
        sol = solve(ModelParams(delta=0.5, g=g, epsilon=0, xi=0), 80)
        for k in range(len(sol)):
            if not sol.converged[k] or lam.expectation(sol.state(k)).real < 0.5:
                continue
            rep = magic_report(trace_out_boson(sol.state(k)))
            ok &= (rep.mana <= 1e-10 and abs(rep.dai_fu_luo - 1) <= 1e-8
                   and abs(rep.entropy - math.log(2)) <= 1e-8)
            count += 1
    criterion("3 (Lambda >= 1 part)", ok, f"{count} converged doublet states checked")
    assert ok


def test_c04_symmetric_null_result(criterion):
    worst_mana = worst_perp = 0.0
    count = 0
    for g in np.linspace(0, 1, 21):
        for delta in (0.5, 1.0):
            sol = solve(ModelParams(delta=delta, g=g, epsilon=0, xi=1), 80)
            for k in np.flatnonzero(sol.converged):
                rho = trace_out_boson(sol.state(k))
                b = bloch_vector(rho)
                worst_mana = max(worst_mana, mana(discrete_wigner_qubit(rho)))
                worst_perp = max(worst_perp, abs(b.s_x), abs(b.s_y))
                count += 1
    ok = worst_mana <= 1e-10 and worst_perp <= 1e-8
    criterion(4, ok, f"{count} states, max mana {worst_mana:.1e}, max |s_x|,|s_y| {worst_perp:.1e}")
    assert ok


def test_c05_weak_coupling_ground_state(criterion):
    rep = qubit_report(ModelParams(g=0.1, epsilon=0.5, xi=1), 0)
    m_err = abs(rep.dai_fu_luo / (1 + math.sqrt(2)) - 1)
    mana_err = abs(rep.mana / 0.271553 - 1)
    ok = m_err <= 0.02 and mana_err <= 0.05
    criterion(5, ok, f"M={rep.dai_fu_luo:.5f} ({100 * m_err:.2f}%), mana={rep.mana:.5f} "
                     f"({100 * mana_err:.2f}%)")
    assert ok


def test_c06_usc_suppression(criterion):
    ratio = qubit_report(ModelParams(g=1.0, epsilon=0.5, xi=1), 0).mana / 0.271553
    ok = abs(ratio - 0.54) <= 0.05
    criterion(6, ok, f"ground-state mana ratio {ratio:.4f} (target 0.54 +- 0.05)")
    assert ok


def test_c07_detuning_map(criterion):
    from scipy.optimize import minimize_scalar

    base = ModelParams.from_detuning(-1.0, g=1.0, xi=1)

    def ratio(eps):
        return qubit_report(base.replace(epsilon=float(eps)), 0).mana / 0.271553

    grid = np.linspace(-1.5, 1.5, 61)
    values = [ratio(e) for e in grid]
    i = int(np.argmax(values))
    lo, hi = grid[max(i - 1, 0)], grid[min(i + 1, len(grid) - 1)]
    res = minimize_scalar(lambda e: -ratio(e), bounds=(lo, hi), method="bounded",
                          options={"xatol": 1e-4})
    best = max(values[i], -res.fun)
    ok = abs(best - 0.77) <= 0.05
    criterion(7, ok, f"max ground-state mana ratio {best:.4f} near eps={res.x:.3f} "
                     f"(target 0.77 +- 0.05)")
    assert ok


@pytest.mark.xfail(strict=True, reason="first-excited mana at 2eps = +-1.2 falls below 0.05 "
                                       "for g >= 0.6")
def test_c08_fork(criterion):
    zeros, tines = [], []
    for g in (0.5, 0.6, 0.75, 0.9, 1.0):
        p = ModelParams(g=g, xi=1)
        zeros += [qubit_report(p.replace(epsilon=e / 2), 1).mana for e in (-1, 0, 1)]
        tines += [(g, e, qubit_report(p.replace(epsilon=e / 2), 1).mana) for e in (-1.2, 1.2)]
    low = [t for t in tines if t[2] <= 0.05]
    ok = max(zeros) <= 0.01 and not low
    criterion(8, ok, f"max mana on fork zeros {max(zeros):.1e}; tines <= 0.05 at "
                     f"(g, 2eps, mana) {[(g, e, round(m, 4)) for g, e, m in low]}")
    assert ok


def test_c08_fork_zeros(criterion):
    """The attainable part: the fork's zero-mana tines."""
    zeros = [qubit_report(ModelParams(g=g, epsilon=e / 2, xi=1), 1).mana
             for g in (0.5, 0.6, 0.75, 0.9, 1.0) for e in (-1, 0, 1)]
    ok = max(zeros) <= 0.01
    criterion("8 (zero tines)", ok, f"max first-excited mana at 2eps in {{-1, 0, 1}}: "
                                    f"{max(zeros):.2e}")
    assert ok


def test_c09_bosonic_ground_state(criterion):
    worst, where = 0.0, None
    for g in np.linspace(0, 1, 21):
        for eps in np.linspace(-1, 1, 21):
            value = boson_mana(ModelParams(g=g, epsilon=eps, xi=1), 0)
            if value > worst:
                worst, where = value, (round(float(g), 3), round(float(eps), 3))
    ok = worst <= 0.02
    criterion(9, ok, f"max ground-state mana_bos on 21x21 (g, eps) grid {worst:.2e} at {where}")
    assert ok


@pytest.mark.xfail(strict=True, reason="near eps = 0 the first excited state is a "
                                       "qubit-boson doublet whose boson marginal has W >= 0")
def test_c10_bosonic_first_excited(criterion):
    bad = []
    for g in np.linspace(0, 0.2, 5):
        for eps in np.linspace(-0.5, 0.5, 11):
            value = boson_mana(ModelParams(g=g, epsilon=eps, xi=1), 1)
            if abs(value / 0.512 - 1) > 0.15:
                bad.append((round(float(g), 3), round(float(eps), 3), round(value, 4)))
    ok = not bad
    criterion(10, ok, f"{len(bad)}/55 points outside 15% of 0.512, e.g. {bad[:3]}")
    assert ok


def test_c11_oracle_equivalences(criterion):
    # (a) anisotropy 0 against the 2x2 doublet oracle, on and off resonance
    err_a = 0.0
    for delta in (0.5, 0.3, 0.9):
        for g in (0.1, 0.25, 1.0):
            p = ModelParams(delta=delta, g=g, xi=0)
            e = np.linalg.eigvalsh(build_hamiltonian(p, TruncatedBasis(12)).matrix)
            expected = [-delta] + [x for lam in range(1, 11) for x in jc_doublet_oracle(p, lam)[:2]]
            err_a = max(err_a, max(np.min(np.abs(e - x)) for x in expected))
    # (b) polaron frame, lowest 10 converged levels
    err_b = 0.0
    for g, eps in ((0.5, 0.0), (1.0, 0.3), (0.8, -0.6)):
        p = ModelParams(g=g, epsilon=eps, xi=1)
        sol = solve(p, 100)
        k = np.flatnonzero(sol.converged)[:10]
        assert len(k) == 10
        e_p = np.linalg.eigvalsh(polaron_hamiltonian(p, sol.basis).matrix)
        err_b = max(err_b, float(np.max(np.abs(e_p[k] - sol.energies[k]))))
    # (c) closed-form Fock fields against the transition formula
    grid = PhaseSpaceGrid(120, 0.05)
    err_c = max(float(np.max(np.abs(wigner_transition(n, n, grid).real - fock_wigner(n, grid))))
                for n in range(11))
    # (d) qubit table conventions agree in the x-z plane
    err_d = 0.0
    for sx in np.linspace(-1, 1, 21):
        for sz in np.linspace(-1, 1, 21):
            if sx * sx + sz * sz <= 1:
                rho = density_from_bloch(sx, 0, sz)
                diff = (discrete_wigner_qubit(rho, MARCHIOLLI).values
                        - discrete_wigner_qubit(rho, WOOTTERS).values)
                err_d = max(err_d, float(np.max(np.abs(diff))))
    ok = err_a <= 1e-10 and err_b <= 1e-8 and err_c <= 1e-8 and err_d <= 1e-12
    criterion(11, ok, f"(a) {err_a:.1e} (b) {err_b:.1e} (c) {err_c:.1e} (d) {err_d:.1e}")
    assert ok


def test_c12_property_suites(criterion):
    rng = np.random.default_rng(20240612)
    # witness identity on random Bloch vectors
    err_w = 0.0
    for _ in range(1000):
        s = rng.normal(size=3)
        s *= rng.uniform() ** (1 / 3) / np.linalg.norm(s)
        rho = density_from_bloch(*s)
        err_w = max(err_w, abs(dai_fu_luo(rho) - 1 - np.abs(s).sum()))
    # witness-entropy gap for diagonal states
    gap_ok = all(witness_entropy_relation(density_from_bloch(0, 0, s)).gap <= abs(s) ** 3 + 1e-15
                 for s in np.linspace(-0.5, 0.5, 201))
    # partial-trace invariants on random pure states
    err_pt = 0.0
    for _ in range(1000):
        n = int(rng.integers(1, 40))
        v = rng.normal(size=2 * n) + 1j * rng.normal(size=2 * n)
        v /= np.linalg.norm(v)
        rs, rb = validate_density(trace_out_boson(v)), validate_density(trace_out_qubit(v))
        k = min(2, n)
        schmidt = np.sort(np.linalg.eigvalsh(rs))[-k:] - np.sort(np.linalg.eigvalsh(rb))[-k:]
        err_pt = max(err_pt, abs(np.trace(rs) - 1), abs(np.trace(rb) - 1),
                     float(np.max(np.abs(schmidt))))
    # normalizations
    err_norm = 0.0
    for _ in range(200):
        s = rng.normal(size=3)
        s *= rng.uniform() ** (1 / 3) / np.linalg.norm(s)
        err_norm = max(err_norm, abs(discrete_wigner_qubit(density_from_bloch(*s)).total() - 1))
    for n in range(5):
        err_norm = max(err_norm, abs(wigner_of_density(fock(n), renormalize=False).raw_integral - 1))
    # eps-sign symmetry of qubit mana maps
    err_sym = 0.0
    for g in np.linspace(0, 1, 6):
        for eps in np.linspace(0.1, 1.0, 10):
            for k in (0, 1):
                a = qubit_report(ModelParams(g=g, epsilon=eps, xi=1), k).mana
                b = qubit_report(ModelParams(g=g, epsilon=-eps, xi=1), k).mana
                err_sym = max(err_sym, abs(a - b))
    ok = err_w <= 1e-12 and gap_ok and err_pt <= 1e-10 and err_norm <= 1e-9 and err_sym <= 1e-8
    criterion(12, ok, f"witness {err_w:.1e}, gap bound {'held' if gap_ok else 'violated'}, "
                      f"partial traces {err_pt:.1e}, normalization {err_norm:.1e}, "
                      f"eps symmetry {err_sym:.1e}")
    assert ok


def test_c13_fock_ordering(criterion):
    values = [bosonic_mana(fock(n)) for n in range(5)]
    refined = [bosonic_mana(fock(n), spacing=0.025) for n in range(5)]
    increasing = all(b > a for a, b in zip(values, values[1:]))
    err = max(abs(v - o) for v, o in zip(values, FOCK_MANA_ORACLE))
    drift = max(abs(a - b) for a, b in zip(values, refined))
    ok = increasing and err <= 1e-3 and drift <= 1e-3
    criterion(13, ok, f"mana_bos(|0..4>) = {[round(v, 5) for v in values]}, "
                      f"max oracle error {err:.1e}, refinement drift {drift:.1e}")
    assert ok
