"""Static SVG figures for scan and map tables (headless matplotlib)."""

from __future__ import annotations

import math

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

from .config import PARAMETER_MAP  # noqa: E402

AXIS_LABELS = {"g": r"$g/\omega$", "epsilon": r"$\epsilon/\omega$",
               "delta": r"$\delta/\omega$", "xi": r"$\xi$"}
PARITY_COLORS = {1: "tab:blue", -1: "tab:red", None: "0.4"}


def set_style():
    plt.rcParams.update({
        "font.size": 10,
        "axes.labelsize": 11,
        "legend.fontsize": 8,
        "lines.markersize": 3,
        "svg.hashsalt": "aqrm-magic",
        "figure.dpi": 100,
    })


def _axis_value(row, axis):
    if axis.name == "delta":
        return row["omega"] - 2 * row["delta"]
    return row[axis.name]


def _save(fig, path):
    fig.tight_layout()
    fig.savefig(path, format="svg", metadata={"Date": None})
    plt.close(fig)
    return path


def _valid(rows, key):
    return [r for r in rows if r[key] is not None]


def plot_spectrum(table, axis, path):
    fig, ax = plt.subplots(figsize=(5, 4))
    for label, color in PARITY_COLORS.items():
        pts = [r for r in table.rows if r["parity"] == label]
        if pts:
            ax.plot([_axis_value(r, axis) for r in pts], [r["energy"] for r in pts], ".",
                    color=color, label={1: "even", -1: "odd", None: "no parity"}[label])
    ax.set_xlabel(AXIS_LABELS[axis.name])
    ax.set_ylabel(r"$E/\omega$")
    ax.legend(loc="best")
    return _save(fig, path)


def plot_magic(table, axis, path):
    rows = _valid(table.rows, "mana")
    fig, axes = plt.subplots(3, 1, figsize=(5, 7), sharex=True)
    values = sorted({_axis_value(r, axis) for r in rows})
    cmap = plt.get_cmap("viridis", max(len(values), 1))
    for i, v in enumerate(values):
        sub = [r for r in rows if _axis_value(r, axis) == v]
        e = [r["energy"] for r in sub]
        kw = dict(color=cmap(i), marker=".", ls="none")
        axes[0].plot(e, [r["dai_fu_luo"] for r in sub], **kw, label=f"{axis.name}={v:.3g}")
        axes[1].plot(e, [r["mana"] for r in sub], **kw)
        axes[2].plot(e, [r["entropy"] for r in sub], **kw)
    axes[0].axhline(2, color="k", ls="--", lw=0.8)
    axes[0].axhline(1 + math.sqrt(2), color="0.5", ls=":", lw=0.8)
    axes[0].axhline(1 + math.sqrt(3), color="tab:red", ls=":", lw=0.8)
    axes[0].set_ylabel(r"$\mathcal{M}$")
    axes[1].set_ylabel("mana")
    axes[2].set_ylabel(r"$S$")
    axes[2].set_xlabel(r"$E/\omega$")
    if len(values) <= 8:
        axes[0].legend(loc="best")
    return _save(fig, path)


def plot_bloch_disc(table, path):
    rows = _valid(table.rows, "s_x")
    fig, ax = plt.subplots(figsize=(4.5, 4.5))
    t = np.linspace(0, 2 * np.pi, 361)
    ax.plot(np.cos(t), np.sin(t), color="0.6", lw=0.8)
    ax.plot([1, 0, -1, 0, 1], [0, 1, 0, -1, 0], color="k", lw=0.8)
    r = 1 / math.sqrt(2)
    ax.plot([r, r, -r, -r], [r, -r, r, -r], "D", color="0.3", ms=6, mfc="none")
    if rows:
        sc = ax.scatter([r["s_x"] for r in rows], [r["s_z"] for r in rows],
                        c=[r["energy"] for r in rows], cmap="coolwarm", s=10)
        fig.colorbar(sc, ax=ax, label=r"$E/\omega$")
    ax.set_aspect("equal")
    ax.set_xlabel(r"$s_x$")
    ax.set_ylabel(r"$s_z$")
    return _save(fig, path)


def plot_bosonic(table, path):
    from .wigner import bosonic_mana

    rows = _valid(table.rows, "mean_boson_number")
    fig, axes = plt.subplots(2, 1, figsize=(5, 6), sharex=True)
    for n in range(5):
        rho = np.zeros((n + 1, n + 1))
        rho[n, n] = 1
        axes[0].axhline(bosonic_mana(rho), color="0.7", lw=0.8)
    bos = _valid(rows, "mana_bos")
    axes[0].plot([r["energy"] for r in bos], [r["mana_bos"] for r in bos], ".")
    axes[1].plot([r["energy"] for r in rows], [r["mean_boson_number"] for r in rows], ".")
    axes[0].set_ylabel(r"mana$_{\rm bos}$")
    axes[1].set_ylabel(r"$\bar n$")
    axes[1].set_xlabel(r"$E/\omega$")
    return _save(fig, path)


def plot_map(table, path):
    ax0, ax1 = table.axes
    states = sorted({r["state"] for r in table.rows})
    quantities = [("energy", r"$E/\omega$"), ("mana", "mana"), ("mana_bos", r"mana$_{\rm bos}$")]
    fig, axes = plt.subplots(len(quantities), len(states), squeeze=False,
                             figsize=(3.2 * len(states), 2.6 * len(quantities)))
    shape = (int(ax0.count), int(ax1.count))
    extent = [ax1.min, ax1.max, ax0.min, ax0.max]
    for j, s in enumerate(states):
        by_point = {r["point"]: r for r in table.rows if r["state"] == s}
        for i, (key, label) in enumerate(quantities):
            grid = np.full(shape, np.nan)
            for p, r in by_point.items():
                if r[key] is not None:
                    grid[np.unravel_index(p, shape)] = r[key]
            im = axes[i, j].imshow(grid, origin="lower", aspect="auto", extent=extent,
                                   cmap="viridis" if key != "energy" else "magma")
            fig.colorbar(im, ax=axes[i, j], label=label)
            axes[i, j].set_xlabel(AXIS_LABELS[ax1.name])
            axes[i, j].set_ylabel(AXIS_LABELS[ax0.name])
            if i == 0:
                axes[i, j].set_title(f"state {s}")
    return _save(fig, path)


def render_figures(table, config, stem):
    set_style()
    if config.mode == PARAMETER_MAP:
        return [plot_map(table, stem + "_map.svg")]
    axis = config.axes[0]
    return [plot_spectrum(table, axis, stem + "_spectrum.svg"),
            plot_magic(table, axis, stem + "_magic.svg"),
            plot_bloch_disc(table, stem + "_bloch.svg"),
            plot_bosonic(table, stem + "_bosonic.svg")]
