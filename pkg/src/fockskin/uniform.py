"""Finite non-reciprocal SSH chain with uniform intercell coupling.

Reference model for the inhomogeneous Fock lattice: same asymmetric
intracell couplings, but the intercell hopping is a constant j2 and the
chain has N cells with open boundaries.  When the product of the two
intracell hoppings is real and positive (phi = +-pi/2 with g < j1, or
j3 = 0) an imaginary gauge transformation maps the chain onto a real
symmetric tridiagonal matrix, so spectra and eigenvectors come from a
standard symmetric solver instead of a general complex eigensolver.

Site layout is cell-interleaved: (g,0), (e,0), (g,1), (e,1), ...
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.linalg import eigh_tridiagonal

from .model import ModelParams, derive_couplings
from .observables import cell_mean, ipr

__all__ = [
    "GaugeReductionError",
    "UniformParams",
    "GaugeReduction",
    "UniformEigenSet",
    "build_uniform_h",
    "gauge_reduction",
    "solve_uniform",
    "skin_profile",
]

IM_TOL = 1e-12


class GaugeReductionError(RuntimeError):
    """The intracell hopping product is not real positive."""


@dataclass(frozen=True)
class UniformParams:
    """Model couplings plus the number N of unit cells (2N sites)."""

    params: ModelParams
    n_cells: int

    def __post_init__(self):
        if self.n_cells < 1:
            raise ValueError("need at least one unit cell")


@dataclass(frozen=True)
class GaugeReduction:
    """Symmetric-tridiagonal form of the chain under an imaginary gauge.

    ``t_intra = sqrt(alpha1*alpha2)`` and ``t_inter = j2`` alternate on the
    off-diagonal; ``scale_ratio = sqrt(alpha2/alpha1)`` builds the diagonal
    site scaling that undoes the symmetrization.
    """

    t_intra: float
    t_inter: float
    scale_ratio: float
    offdiag: np.ndarray

    @property
    def size(self) -> int:
        return self.offdiag.size + 1


@dataclass(frozen=True)
class UniformEigenSet:
    """All 2N eigenpairs; ``vectors[:, k]`` is the normalized right mode k."""

    uparams: UniformParams
    energies: np.ndarray
    vectors: np.ndarray

    def cell_probabilities(self, k: int) -> np.ndarray:
        v = self.vectors[:, k]
        return np.abs(v[0::2]) ** 2 + np.abs(v[1::2]) ** 2


def build_uniform_h(p: UniformParams) -> np.ndarray:
    """Dense 2N x 2N chain Hamiltonian with open boundaries."""
    cpl = derive_couplings(p.params)
    n = p.n_cells
    h = np.zeros((2 * n, 2 * n), dtype=complex)
    for c in range(n):
        gi, ei = 2 * c, 2 * c + 1
        h[ei, gi] = cpl.alpha2
        h[gi, ei] = cpl.alpha1
        if c + 1 < n:
            h[ei, gi + 2] = p.params.j2
            h[gi + 2, ei] = p.params.j2
    return h


def gauge_reduction(p: UniformParams) -> GaugeReduction:
    """Symmetrize the chain; rejects parameters outside the real-gauge regime."""
    cpl = derive_couplings(p.params)
    prod = cpl.alpha1 * cpl.alpha2
    scale = max(1.0, abs(cpl.alpha1) ** 2, abs(cpl.alpha2) ** 2)
    if abs(prod.imag) > IM_TOL * scale or prod.real < -IM_TOL * scale:
        raise GaugeReductionError(
            "gauge reduction invalid: alpha1*alpha2 = "
            f"{prod:.6g} is not real and non-negative "
            "(requires phi in {0, +-pi/2} with g < j1, or j3 = 0)"
        )
    t_intra = float(np.sqrt(max(prod.real, 0.0)))
    ratio = np.sqrt(cpl.alpha2 / cpl.alpha1) if cpl.alpha1 != 0 else 0.0
    offdiag = np.empty(2 * p.n_cells - 1)
    offdiag[0::2] = t_intra
    offdiag[1::2] = p.params.j2
    return GaugeReduction(t_intra=t_intra, t_inter=p.params.j2,
                          scale_ratio=float(np.real(ratio)), offdiag=offdiag)


def _site_scaling(p: UniformParams) -> np.ndarray:
    """Diagonal D with D H D^-1 symmetric; d alternates by sqrt(alpha1/alpha2)."""
    cpl = derive_couplings(p.params)
    s = np.sqrt(complex(cpl.alpha1 / cpl.alpha2)).real
    d = np.empty(2 * p.n_cells)
    # d_{g,n} carries s^n, d_{e,n} carries s^(n+1); intercell bonds stay j2
    powers = np.arange(p.n_cells)
    d[0::2] = s ** powers
    d[1::2] = s ** (powers + 1)
    return d


def solve_uniform(p: UniformParams) -> UniformEigenSet:
    """All eigenpairs of the chain via the symmetric tridiagonal reduction.

    Right eigenvectors are recovered by the inverse gauge scaling, unit
    normalized, with the first nonzero component made real positive.  At the
    exceptional point t_intra = 0 the scaling is singular; the returned
    vectors are then those of the symmetrized limit (the spectrum is still
    exact).
    """
    red = gauge_reduction(p)
    energies, w = eigh_tridiagonal(np.zeros(red.size), red.offdiag)
    if red.t_intra > 0:
        d = _site_scaling(p)
        vectors = w / d[:, None]
    else:
        vectors = w.astype(float)
    vectors = vectors / np.linalg.norm(vectors, axis=0, keepdims=True)
    # deterministic sign: first component of appreciable size real positive
    for k in range(vectors.shape[1]):
        v = vectors[:, k]
        idx = np.argmax(np.abs(v) > 1e-12 * np.abs(v).max())
        if v[idx].real < 0:
            vectors[:, k] = -v
    return UniformEigenSet(uparams=p, energies=energies,
                           vectors=vectors.astype(complex))


def skin_profile(eig: UniformEigenSet) -> np.ndarray:
    """Structured rows (energy, mean_cell, ipr) for every mode."""
    out = np.zeros(eig.energies.size,
                   dtype=[("energy", float), ("mean_cell", float), ("ipr", float)])
    for k in range(eig.energies.size):
        dist = eig.cell_probabilities(k)
        out[k] = (eig.energies[k], cell_mean(dist), ipr(eig.vectors[:, k]))
    return out
