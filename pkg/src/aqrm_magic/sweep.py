"""Spectrum scans and parameter maps over the model's parameter space."""

from __future__ import annotations

import logging
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

from threadpoolctl import threadpool_limits

from . import qudit, reduction, spectral, wigner
from .config import PARAMETER_MAP, SPECTRUM_SCAN, ConfigError

log = logging.getLogger(__name__)

COLUMNS = ("point", "state", "omega", "delta", "g", "epsilon", "xi", "energy", "parity",
           "converged", "s_x", "s_y", "s_z", "entropy", "mana", "dai_fu_luo", "mana_bos",
           "mean_boson_number", "n_max")
RESOURCE_COLUMNS = ("s_x", "s_y", "s_z", "entropy", "mana", "dai_fu_luo", "mana_bos",
                    "mean_boson_number")


@dataclass
class ResultTable:
    rows: list
    failures: list = field(default_factory=list)
    axes: tuple = ()
    mode: str = SPECTRUM_SCAN

    def column(self, name, state=None):
        return [r[name] for r in self.rows if state is None or r["state"] == state]


def _solution_for(params, config):
    tol = config.tolerances
    policy = config.n_max
    if policy.policy == "fixed":
        return spectral.solve(params, policy.value, tol.tail_levels, tol.convergence_tol)
    return spectral.solve_adaptive(
        params, lambda sol: config.states.select(sol.energies, params.omega),
        start=policy.start, cap=policy.cap, tail_levels=tol.tail_levels,
        tol=tol.convergence_tol)


def state_record(state, basis, config):
    """Resource columns for one eigenvector."""
    rho_s = reduction.validate_density(reduction.trace_out_boson(state, basis))
    report = qudit.magic_report(rho_s)
    rho_b = reduction.trace_out_qubit(state, basis)
    rec = dict(s_x=report.bloch.s_x, s_y=report.bloch.s_y, s_z=report.bloch.s_z,
               entropy=report.entropy, mana=report.mana, dai_fu_luo=report.dai_fu_luo,
               mana_bos=None, mean_boson_number=reduction.mean_boson_number(rho_b))
    if config.bosonic:
        tol = config.tolerances
        grid = wigner.default_grid(rho_b, tol.wigner_spacing, tol.wigner_margin,
                                   tol.wigner_weight_tol)
        wf = wigner.wigner_of_density(rho_b, grid)
        log.debug("raw Wigner integral %.12g", wf.raw_integral)
        rec["mana_bos"] = wigner.wigner_log_negativity(wf)
    return rec


def evaluate_point(index, values, config):
    """All rows for one parameter point; pure function of its arguments."""
    params = config.point_params(values)
    with threadpool_limits(1):
        sol = _solution_for(params, config)
        rows = []
        for k in config.states.select(sol.energies, params.omega):
            row = dict(point=index, state=k, omega=params.omega, delta=params.delta, g=params.g,
                       epsilon=params.epsilon, xi=params.xi,
                       energy=float(sol.energies[k] / params.omega), parity=sol.parity[k],
                       converged=bool(sol.converged[k]), n_max=sol.basis.n_max)
            if row["converged"]:
                row.update(state_record(sol.state(k), sol.basis, config))
            else:
                row.update(dict.fromkeys(RESOURCE_COLUMNS))
            rows.append({c: row[c] for c in COLUMNS})
    return rows


def _safe_point(args):
    index, values, config = args
    try:
        return index, evaluate_point(index, values, config), None
    except Exception as exc:  # recorded per point; the sweep continues
        return index, [], f"{type(exc).__name__}: {exc}"


def resolve_threads(threads):
    """0 means one worker per CPU."""
    if not threads:
        return os.cpu_count() or 1
    return max(1, int(threads))


def run_points(config, threads=1):
    points = config.points()
    tasks = [(i, v, config) for i, v in enumerate(points)]
    workers = resolve_threads(threads)
    slots = [None] * len(tasks)
    if workers == 1 or len(tasks) == 1:
        for index, rows, error in map(_safe_point, tasks):
            slots[index] = (rows, error)
    else:
        chunk = max(1, len(tasks) // (8 * workers))
        with ProcessPoolExecutor(max_workers=workers) as pool:
            # results land in their point slot, so completion order is irrelevant
            for index, rows, error in pool.map(_safe_point, tasks, chunksize=chunk):
                slots[index] = (rows, error)
    rows, failures = [], []
    for i, (point_rows, error) in enumerate(slots):
        rows.extend(point_rows)
        if error:
            log.error("point %d %s failed: %s", i, points[i], error)
            failures.append({"point": i, "values": points[i], "error": error})
    return ResultTable(rows, failures, config.axes, config.mode)


def run_spectrum_scan(config, threads=1):
    if config.mode != SPECTRUM_SCAN:
        raise ConfigError(f"run_spectrum_scan needs mode {SPECTRUM_SCAN!r}, got {config.mode!r}")
    return run_points(config, threads)


def run_parameter_map(config, threads=1):
    if config.mode != PARAMETER_MAP:
        raise ConfigError(f"run_parameter_map needs mode {PARAMETER_MAP!r}, got {config.mode!r}")
    return run_points(config, threads)
