"""Conditional (no-jump) time evolution on the Fock lattice.

Two independent routes: a biorthogonal mode expansion using the analytic
eigensystem (exact once the expansion converges), and direct adaptive
integration of the Schrodinger equation with the dense non-Hermitian
Hamiltonian.  Their agreement is the main internal consistency check.

States are stored unnormalized throughout; the norm decay is physical
(post-selection probability) and normalization happens only in observables.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.integrate import solve_ivp

from .model import BasisSpec, ModelParams, derive_couplings
from .eigensystem import EigenSet

__all__ = [
    "ConvergenceError",
    "CutoffBreachError",
    "ExpansionCoefficients",
    "EvolutionResult",
    "expand",
    "evolve_analytic",
    "evolve_direct",
    "survival_probability",
    "normalized_distribution",
]

DEFAULT_RTOL = 1e-9
DEFAULT_ATOL = 1e-12
BOUNDARY_MASS_TOL = 1e-8
INITIAL_TAIL_ENTRIES = 32
INITIAL_TAIL_TOL = 1e-16


class ConvergenceError(RuntimeError):
    """Integrator step control failed to reach the requested tolerance."""


class CutoffBreachError(RuntimeError):
    """State support reached the truncation boundary during evolution."""


@dataclass(frozen=True)
class ExpansionCoefficients:
    """Left-vector overlaps of an initial state with the analytic modes.

    ``coeffs`` is aligned with the EigenSet ordering (zero, (0,-), (0,+),
    ...); ``truncation_tail`` is the norm of the part of the initial state
    the retained modes cannot reconstruct.
    """

    coeffs: np.ndarray
    truncation_tail: float

    @property
    def c0(self) -> complex:
        return complex(self.coeffs[0])

    def c(self, n: int, branch: str) -> complex:
        offset = 1 if branch == "minus" else 2
        return complex(self.coeffs[2 * n + offset])


@dataclass(frozen=True)
class EvolutionResult:
    """Trajectory of unnormalized conditional states on a fixed basis."""

    basis: BasisSpec
    times: np.ndarray
    states: np.ndarray  # shape (len(times), basis.dim)
    norms: np.ndarray
    survival: np.ndarray | None = None


def expand(initial: np.ndarray, eig: EigenSet,
           tail_tol: float = 1e-8) -> ExpansionCoefficients:
    """Biorthogonal expansion coefficients c_i = <psi_i^L | initial>.

    Raises if the retained modes cannot reconstruct the initial state to
    within ``tail_tol`` in norm (mode budget exceeded).
    """
    initial = np.asarray(initial, dtype=complex)
    if initial.shape[0] != eig.basis.dim:
        raise ValueError("initial state dimension does not match the eigenset basis")
    coeffs = eig.left_matrix().conj().T @ initial
    recon = eig.right_matrix() @ coeffs
    tail = float(np.linalg.norm(initial - recon))
    if tail > tail_tol:
        raise ConvergenceError(
            f"mode budget exceeded: reconstruction error {tail:.3e} > {tail_tol:.3e}"
        )
    return ExpansionCoefficients(coeffs=coeffs, truncation_tail=tail)


def evolve_analytic(coeffs: ExpansionCoefficients, eig: EigenSet,
                    times: np.ndarray) -> EvolutionResult:
    """Exact phase evolution of each analytic mode (all energies real)."""
    times = np.asarray(times, dtype=float)
    if times.size == 0 or np.any(np.diff(times) < 0):
        raise ValueError("times must be a nonempty ascending sequence")
    right = eig.right_matrix()
    energies = eig.energies()
    phases = np.exp(-1j * np.outer(times, energies))
    states = (phases * coeffs.coeffs[None, :]) @ right.T
    norms = np.linalg.norm(states, axis=1)
    return EvolutionResult(basis=eig.basis, times=times, states=states,
                           norms=norms)


def evolve_direct(h: np.ndarray, initial: np.ndarray, times: np.ndarray,
                  rtol: float = DEFAULT_RTOL, atol: float = DEFAULT_ATOL,
                  basis: BasisSpec = None,
                  check_boundary: bool = True) -> EvolutionResult:
    """Integrate d|psi>/dt = -i H |psi| with adaptive step control.

    The initial state must sit well inside the truncation (top-32-entries
    mass below 1e-16); if the evolved support later reaches the boundary
    the run is rejected rather than silently reflected.
    """
    initial = np.asarray(initial, dtype=complex)
    times = np.asarray(times, dtype=float)
    if times.size == 0 or np.any(np.diff(times) < 0):
        raise ValueError("times must be a nonempty ascending sequence")
    if basis is None:
        if h.shape[0] % 2 != 0:
            raise ValueError("pass basis explicitly for non-two-level Hamiltonians")
        basis = BasisSpec(h.shape[0] // 2 - 1)
    if basis.dim != h.shape[0]:
        raise ValueError("basis dimension does not match the Hamiltonian")
    if check_boundary:
        # small bases get a proportionally narrower guard band
        guard = min(INITIAL_TAIL_ENTRIES, max(1, basis.n_fock // 4))
        tail0 = _boundary_mass(initial, basis, guard)
        if tail0 > INITIAL_TAIL_TOL:
            raise CutoffBreachError(
                f"initial state too close to the cutoff (tail mass {tail0:.3e})"
            )

    def rhs(_t, y):
        return -1j * (h @ y)

    sol = solve_ivp(rhs, (float(times[0]), float(times[-1])), initial,
                    t_eval=times, method="DOP853", rtol=rtol, atol=atol)
    if not sol.success:
        raise ConvergenceError(f"integrator failed: {sol.message}")
    states = sol.y.T.copy()
    if check_boundary:
        top = max(_boundary_mass(s, basis, 1) for s in states)
        if top > BOUNDARY_MASS_TOL:
            raise CutoffBreachError(
                f"cutoff breach: boundary mass reached {top:.3e}"
            )
    norms = np.linalg.norm(states, axis=1)
    return EvolutionResult(basis=basis, times=times, states=states, norms=norms)


def _boundary_mass(state: np.ndarray, basis: BasisSpec, n_entries: int) -> float:
    worst = 0.0
    for lev in basis.levels:
        block = state[basis.block(lev)]
        worst = max(worst, float(np.sum(np.abs(block[-n_entries:]) ** 2)))
    return worst


def survival_probability(params: ModelParams,
                         result: EvolutionResult) -> np.ndarray:
    """No-jump (post-selection) probability along a trajectory.

    The evolution is assumed to have run without the constant decay term;
    the uniform factor exp(-2*g*t) it would have contributed is restored
    here, on top of the non-Hermitian norm loss.
    """
    g = derive_couplings(params).g
    return result.norms ** 2 * np.exp(-2.0 * g * result.times)


def normalized_distribution(state: np.ndarray, basis: BasisSpec) -> np.ndarray:
    """Probability per unit cell of a (possibly unnormalized) state."""
    nrm2 = float(np.vdot(state, state).real)
    if nrm2 == 0.0:
        raise ValueError("zero state has no distribution")
    return basis.cell_probabilities(state) / nrm2
