"""Figure rendering for the CLI report paths.

Each helper takes the already-computed data (the same arrays the CSV
writers receive) and draws a matplotlib figure, so plots always agree
with the delimited output next to them.
"""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

__all__ = [
    "plot_spectrum",
    "plot_eigenstate",
    "plot_dynamics",
    "plot_uniform",
]

_CASE_COLORS = {"j3_0": "tab:blue", "phi_plus": "tab:green", "phi_minus": "tab:purple"}
_CASE_LABELS = {
    "j3_0": r"$J_3=0$",
    "phi_plus": r"$J_3\neq 0,\ \phi=\pi/2$",
    "phi_minus": r"$J_3\neq 0,\ \phi=-\pi/2$",
}


def _save(fig, path):
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def plot_spectrum(energies, mean_cells, iprs, path, title=None):
    """Mean cell index and IPR versus eigenenergy, one marker per mode."""
    fig, (ax1, ax2) = plt.subplots(1, 2, figsize=(9, 3.6))
    ax1.plot(energies, mean_cells, "o", ms=3, mfc="none")
    ax1.set_xlabel(r"$E/J_2$")
    ax1.set_ylabel(r"$\langle \hat n \rangle$")
    ax2.plot(energies, iprs, "d", ms=3, mfc="none", color="tab:orange")
    ax2.set_xlabel(r"$E/J_2$")
    ax2.set_ylabel("IPR")
    if title:
        fig.suptitle(title)
    _save(fig, path)


def plot_eigenstate(case_distributions, path, title=None):
    """Cell-resolved probability of one mode for each parameter case."""
    fig, ax = plt.subplots(figsize=(6, 3.6))
    for case, dist in case_distributions.items():
        cells = np.arange(len(dist))
        ax.plot(cells, dist, "-o", ms=3,
                color=_CASE_COLORS.get(case), label=_CASE_LABELS.get(case, case))
    ax.set_xlabel("unit cell $n$")
    ax.set_ylabel("probability")
    ax.legend(frameon=False)
    if title:
        fig.suptitle(title)
    _save(fig, path)


def plot_dynamics(times, distributions, path, title=None):
    """Space-time map of the normalized cell distribution."""
    fig, ax = plt.subplots(figsize=(6, 3.6))
    dist = np.asarray(distributions)
    mesh = ax.pcolormesh(times, np.arange(dist.shape[1]), dist.T,
                         shading="nearest", cmap="magma")
    fig.colorbar(mesh, ax=ax, label="probability")
    ax.set_xlabel(r"$t\,J_2$")
    ax.set_ylabel("unit cell $n$")
    if title:
        fig.suptitle(title)
    _save(fig, path)


def plot_uniform(energies, mean_cells, iprs, path, title=None):
    plot_spectrum(energies, mean_cells, iprs, path, title=title)
