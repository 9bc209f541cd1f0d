"""Axes-level builders shared by the figure assemblies.

Every function draws exactly what the artifacts store. Values are never
recomputed, only selected, rescaled for display, and labelled.
"""

import numpy as np

# spectral weights of exactly zero cannot sit on a log axis
WEIGHT_FLOOR = 1e-18


def size_label(run) -> str:
    return f"L={run.L}"


def angle_label(run) -> str:
    return f"theta={run.theta_literal}"


def plot_series_family(ax, family, column, labeler, ylabel, logy=False):
    for run in family:
        series = run.series()
        ax.plot(series["t"], series[column], lw=0.9, label=labeler(run))
    ax.set_xlabel("t")
    ax.set_ylabel(ylabel)
    if logy:
        ax.set_yscale("log")
    ax.legend(fontsize=7)


def add_rescaled_inset(ax, family, column):
    """Inset with the column and the time both divided by L."""
    inset = ax.inset_axes([0.52, 0.12, 0.44, 0.4])
    for run in family:
        series = run.series()
        inset.plot(series["t"] / run.L, series[column] / run.L, lw=0.7)
    inset.set_xlabel("t/L", fontsize=6)
    inset.set_ylabel(f"{column}/L", fontsize=6)
    inset.tick_params(labelsize=6)


def plot_overlap_scatter(ax, run, top_k):
    spectrum = run.spectrum()
    energy = spectrum["E_n"]
    weight = np.clip(spectrum["weight"], WEIGHT_FLOOR, None)
    ax.semilogy(energy, weight, ".", ms=3, color="0.5", label="all states")
    k = min(int(top_k), energy.size)
    top = np.sort(np.argsort(weight)[-k:])
    ax.semilogy(energy[top], weight[top], "o", ms=4, color="crimson",
                label=f"top {k}")
    ax.set_xlabel("E_n")
    ax.set_ylabel("overlap weight")
    ax.set_title(f"{run.state_label()}, L={run.L}", fontsize=8)
    ax.legend(fontsize=7)


def add_dominant_entropy_inset(ax, spectral_family):
    """Inset: half-chain entropy of the dominant-weight eigenstate vs L."""
    inset = ax.inset_axes([0.12, 0.6, 0.32, 0.32])
    sizes, entropies = [], []
    for run in sorted(spectral_family, key=lambda r: r.L):
        spectrum = run.spectrum()
        best = int(np.argmax(spectrum["weight"]))
        sizes.append(run.L)
        entropies.append(spectrum["entropy_n"][best])
    inset.plot(sizes, entropies, "o-", ms=3, lw=0.8)
    inset.set_xlabel("L", fontsize=6)
    inset.set_ylabel("S of max", fontsize=6)
    inset.tick_params(labelsize=6)


def plot_global_with_product(ax, run):
    series = run.series()
    ax.plot(series["t"], series["prod_Fj"], color="0.6", lw=0.9,
            label="prod_j F_j")
    ax.plot(series["t"], series["F_global"], lw=0.9, label="F")
    ax.set_xlabel("t")
    ax.set_ylabel("fidelity")
    ax.set_title(f"{run.state_label()}, L={run.L}", fontsize=8)
    ax.legend(fontsize=7)


def plot_block_entropies(ax, run):
    series = run.series()
    ells = run.block_columns()
    for ell in ells:
        ax.plot(series["t"], series[f"S_l{ell}"], lw=0.9, label=f"l={ell}")
    half = run.L // 2
    if half not in ells:
        ax.plot(series["t"], series["S_half"], lw=0.9, label=f"l={half}")
    ax.set_xlabel("t")
    ax.set_ylabel("S_[1,l](t)")
    ax.legend(fontsize=7)


def plot_magnetization_heatmap(fig, ax, run):
    per_site = run.per_site()
    L = run.L
    times = per_site["t"][::L]
    sites = np.arange(1, L + 1)
    values = per_site["absdZ_j"].reshape(times.size, L)
    mesh = ax.pcolormesh(times, sites, values.T, shading="auto")
    fig.colorbar(mesh, ax=ax, label="|Z_j(t) - Z_j(0)|")
    ax.set_xlabel("t")
    ax.set_ylabel("site j")
    ax.set_title(f"{run.state_label()}, L={run.L}", fontsize=8)


def plot_state_overlay(ax, runs, column, ylabel, window=None):
    for run in runs:
        series = run.series()
        ax.plot(series["t"], series[column], lw=0.9, label=run.state_label())
    if window is not None:
        ax.set_xlim(window)
    ax.set_xlabel("t")
    ax.set_ylabel(ylabel)
    ax.legend(fontsize=7)


def add_bound_lines(ax, bounds_by_label):
    """Dashed horizontal lower bounds, colour-matched to existing curves."""
    colors = {line.get_label(): line.get_color() for line in ax.get_lines()}
    for label, bound in bounds_by_label.items():
        ax.axhline(bound, ls="--", lw=0.8, color=colors.get(label, "0.3"))


def plot_longtime_vs_size(ax, spectral_runs):
    by_state: dict[str, list] = {}
    for run in spectral_runs:
        by_state.setdefault(run.state_label(), []).append(run)
    for label in sorted(by_state):
        group = sorted(by_state[label], key=lambda r: r.L)
        sizes = [run.L for run in group]
        values = [run.summary()["longtime_average"] for run in group]
        ax.plot(sizes, values, "o-", ms=4, lw=0.9, label=label)
    ax.set_xlabel("L")
    ax.set_ylabel("longtime average of F")
    ax.set_yscale("log")
    ax.legend(fontsize=7)
