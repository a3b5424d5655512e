"""Localization diagnostics: IPR, mean cell position, support intervals.

All functions normalize internally, since conditional non-Hermitian states
arrive unnormalized.  Site-level quantities (IPR) work on flat amplitude
arrays; cell-level quantities work on per-cell probability distributions,
which each lattice layout produces for itself.
"""

from __future__ import annotations

import numpy as np

__all__ = [
    "ipr",
    "cell_mean",
    "mean_position",
    "support_interval",
    "skin_shift",
]


def ipr(amplitudes: np.ndarray) -> float:
    """Inverse participation ratio sum |a_i|^4 of the unit-normalized state.

    1 for a single occupied site, 1/N for uniform weight over N sites.
    """
    p = np.abs(np.asarray(amplitudes)) ** 2
    total = p.sum()
    if total == 0.0:
        raise ValueError("zero state has no IPR")
    p = p / total
    return float(np.sum(p ** 2))


def cell_mean(distribution: np.ndarray) -> float:
    """Mean cell index of a (possibly unnormalized) cell distribution."""
    p = np.asarray(distribution, dtype=float)
    total = p.sum()
    if total == 0.0:
        raise ValueError("zero state has no mean position")
    return float(np.dot(np.arange(p.size), p) / total)


def mean_position(state: np.ndarray, basis) -> float:
    """Expectation of the cell-index (phonon number) operator."""
    return cell_mean(basis.cell_probabilities(state))


def support_interval(distribution: np.ndarray, mass: float = 0.99) -> tuple[int, int]:
    """Smallest contiguous cell window [lo, hi] holding >= ``mass`` probability."""
    p = np.asarray(distribution, dtype=float)
    total = p.sum()
    if total == 0.0:
        raise ValueError("zero distribution has no support")
    p = p / total
    target = mass
    cumsum = np.concatenate([[0.0], np.cumsum(p)])
    best = (0, p.size - 1)
    lo = 0
    for hi in range(p.size):
        # shrink from the left while the window still holds the mass
        while cumsum[hi + 1] - cumsum[lo + 1] >= target - 1e-15:
            lo += 1
        if cumsum[hi + 1] - cumsum[lo] >= target - 1e-15:
            if hi - lo < best[1] - best[0]:
                best = (lo, hi)
    return best


def skin_shift(eig_a, eig_b) -> np.ndarray:
    """Per-mode shift of the mean cell position between two eigensets.

    Negative entries mean the modes of ``eig_a`` sit further left than
    their counterparts in ``eig_b``.
    """
    labels_a = [(t.n, t.branch) for t in eig_a]
    labels_b = [(t.n, t.branch) for t in eig_b]
    if labels_a != labels_b:
        raise ValueError("mismatched mode sets")
    return np.array([
        mean_position(ta.right, eig_a.basis) - mean_position(tb.right, eig_b.basis)
        for ta, tb in zip(eig_a, eig_b)
    ])
