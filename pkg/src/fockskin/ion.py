"""Trapped-ion feasibility arithmetic for the lattice proposal.

Checks that the Lamb-Dicke expansion stays valid over the cells the
dynamics actually visits, and that those cells fit within the phonon
numbers that can be prepared and read out.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .model import BasisSpec, ModelParams, build_h_eff
from .dynamics import evolve_direct
from .observables import support_interval

__all__ = [
    "HBAR",
    "IonParams",
    "FeasibilityReport",
    "lamb_dicke",
    "max_cells",
    "proposal_check",
]

HBAR = 1.054571817e-34  # J s

# eta = 0.05 then gives 40 usable cells; a calibration, not a physical claim
DEFAULT_THRESHOLD = 0.2025
DEFAULT_PHONON_BUDGET = 30


@dataclass(frozen=True)
class IonParams:
    """Lamb-Dicke parameter plus the validity bound on eta^2*(2n+1)."""

    eta: float
    threshold: float = DEFAULT_THRESHOLD

    def __post_init__(self):
        if self.eta <= 0:
            raise ValueError("eta must be positive")
        if not 0 < self.threshold < 1:
            raise ValueError("threshold must lie in (0, 1)")


def lamb_dicke(k_l: float, nu: float, mass: float) -> float:
    """eta = k_L * sqrt(hbar / (2 * nu * M)) in SI units (nu in rad/s)."""
    if k_l <= 0 or nu <= 0 or mass <= 0:
        raise ValueError("k_l, nu and mass must be positive")
    return k_l * np.sqrt(HBAR / (2.0 * nu * mass))


def max_cells(eta: float, threshold: float) -> int:
    """Largest Fock index n with eta^2*(2n+1) <= threshold (0 if none)."""
    if eta <= 0 or threshold <= 0:
        raise ValueError("eta and threshold must be positive")
    n = int(np.floor((threshold / eta ** 2 - 1.0) / 2.0 + 1e-12))
    return max(n, 0)


@dataclass(frozen=True)
class FeasibilityReport:
    """Flat summary of one proposal run; serializes to a key-value document."""

    eta: float
    threshold: float
    lamb_dicke_cells: int
    phonon_budget: int
    initial_cell: int
    max_occupied_cell: int
    within_lamb_dicke: bool
    within_phonon_budget: bool
    feasible: bool

    def as_dict(self) -> dict:
        return {
            "eta": self.eta,
            "threshold": self.threshold,
            "lamb_dicke_cells": self.lamb_dicke_cells,
            "phonon_budget": self.phonon_budget,
            "initial_cell": self.initial_cell,
            "max_occupied_cell": self.max_occupied_cell,
            "within_lamb_dicke": self.within_lamb_dicke,
            "within_phonon_budget": self.within_phonon_budget,
            "feasible": self.feasible,
        }


def proposal_check(params: ModelParams, initial_cell: int, ion: IonParams,
                   t_end: float = 20.0, n_times: int = 400,
                   phonon_budget: int = DEFAULT_PHONON_BUDGET,
                   n_max: int = None, mass: float = 0.999,
                   rtol: float = 1e-9) -> FeasibilityReport:
    """Simulate |g, initial_cell> and check the visited cells are measurable.

    The occupied range is the largest cell of the ``mass``-quantile support
    over the whole time grid; feasibility requires it to stay within both
    the Lamb-Dicke cell budget and the phonon measurement budget.
    """
    budget = max_cells(ion.eta, ion.threshold)
    if n_max is None:
        n_max = max(4 * initial_cell + 60, 120)
    basis = BasisSpec(n_max)
    h = build_h_eff(params, basis)
    initial = basis.basis_state("g", initial_cell)
    times = np.linspace(0.0, t_end / params.j2, n_times)
    result = evolve_direct(h, initial, times, rtol=rtol, basis=basis)

    top = 0
    for state in result.states:
        dist = basis.cell_probabilities(state)
        _, hi = support_interval(dist, mass)
        top = max(top, hi)

    within_ld = initial_cell <= budget and top <= budget
    within_budget = top <= phonon_budget
    return FeasibilityReport(
        eta=ion.eta,
        threshold=ion.threshold,
        lamb_dicke_cells=budget,
        phonon_budget=phonon_budget,
        initial_cell=initial_cell,
        max_occupied_cell=top,
        within_lamb_dicke=within_ld,
        within_phonon_budget=within_budget,
        feasible=within_ld and within_budget,
    )
