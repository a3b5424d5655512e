"""Model parameters, lattice bases, and Hamiltonian builders.

The system is a two-level (or three-level, with the lossy auxiliary state
``f``) emitter coupled to a single bosonic mode.  States live on the
truncated product basis ``|level, n>`` with ``n = 0 .. n_max``; the
``sqrt(n+1)`` matrix elements of the ladder operators turn this into a
semi-infinite SSH-like chain with inhomogeneous intercell hopping, and the
dissipative path through ``f`` makes the intracell hopping non-reciprocal.

All energies are measured in units of the detuned coupling ``J2`` (hbar = 1).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "ModelParams",
    "DerivedCouplings",
    "BasisSpec",
    "derive_couplings",
    "ladder_ops",
    "build_h_full",
    "build_h_eff",
    "adiabatic_elimination_error",
]

TWO_LEVEL = ("g", "e")
THREE_LEVEL = ("g", "e", "f")


@dataclass(frozen=True)
class ModelParams:
    """Physical couplings of the driven three-level system.

    j1, j2 : resonant / red-detuned intracell couplings (j2 sets the unit)
    j3     : coupling to the auxiliary level f
    gamma  : half the decay rate of f (f decays at 2*gamma)
    phi    : phase on the e<->f transition, acts as a synthetic flux
    """

    j1: float
    j2: float = 1.0
    j3: float = 0.0
    gamma: float = 50.0
    phi: float = 0.0

    def __post_init__(self):
        if self.j2 <= 0:
            raise ValueError("j2 must be positive (it sets the energy unit)")
        if self.gamma <= 0:
            raise ValueError("gamma must be positive")
        if self.j3 < 0:
            raise ValueError("j3 must be non-negative")


@dataclass(frozen=True)
class DerivedCouplings:
    """Effective couplings after eliminating the lossy level.

    ``alpha1`` multiplies ``|g><e|``, ``alpha2`` multiplies ``|e><g|``;
    their asymmetry is the non-reciprocity.  ``g`` = j3**2/gamma is the
    non-reciprocity strength and ``beta1,2 = -alpha1,2/j2`` feed the
    similarity transformation.
    """

    alpha1: complex
    alpha2: complex
    beta1: complex
    beta2: complex
    g: float


def derive_couplings(params: ModelParams) -> DerivedCouplings:
    """Compute the effective intracell couplings and their ratios."""
    g = params.j3 ** 2 / params.gamma
    alpha1 = params.j1 - 1j * g * np.exp(1j * params.phi)
    alpha2 = params.j1 - 1j * g * np.exp(-1j * params.phi)
    return DerivedCouplings(
        alpha1=complex(alpha1),
        alpha2=complex(alpha2),
        beta1=complex(-alpha1 / params.j2),
        beta2=complex(-alpha2 / params.j2),
        g=g,
    )


@dataclass(frozen=True)
class BasisSpec:
    """Truncated Fock (x) internal-level basis with a fixed index layout.

    Indices are level-major: all ``|g,n>`` first (n ascending), then all
    ``|e,n>``, then ``|f,n>`` if present.  This keeps the chiral-symmetry
    operator block-diagonal.
    """

    n_max: int
    levels: tuple = TWO_LEVEL

    def __post_init__(self):
        if self.n_max < 0:
            raise ValueError("n_max must be >= 0")
        if tuple(self.levels) not in (TWO_LEVEL, THREE_LEVEL):
            raise ValueError("levels must be ('g','e') or ('g','e','f')")
        object.__setattr__(self, "levels", tuple(self.levels))

    @property
    def n_fock(self) -> int:
        return self.n_max + 1

    @property
    def dim(self) -> int:
        return len(self.levels) * self.n_fock

    def index(self, level: str, n: int) -> int:
        if not 0 <= n <= self.n_max:
            raise IndexError(f"Fock index {n} outside [0, {self.n_max}]")
        return self.levels.index(level) * self.n_fock + n

    def block(self, level: str) -> slice:
        """Index slice of one internal level's Fock block."""
        i = self.levels.index(level)
        return slice(i * self.n_fock, (i + 1) * self.n_fock)

    def basis_state(self, level: str, n: int) -> np.ndarray:
        vec = np.zeros(self.dim, dtype=complex)
        vec[self.index(level, n)] = 1.0
        return vec

    def amplitude(self, state: np.ndarray, level: str, n: int) -> complex:
        return complex(state[self.index(level, n)])

    def cell_probabilities(self, state: np.ndarray) -> np.ndarray:
        """Unnormalized probability per unit cell, summed over levels."""
        state = np.asarray(state)
        if state.shape[-1] != self.dim:
            raise ValueError("state length does not match basis dimension")
        blocks = state.reshape(state.shape[:-1] + (len(self.levels), self.n_fock))
        return np.sum(np.abs(blocks) ** 2, axis=-2)

    def embed(self, state: np.ndarray, larger: "BasisSpec") -> np.ndarray:
        """Zero-pad a state into a basis with a larger Fock cutoff."""
        if larger.levels != self.levels or larger.n_max < self.n_max:
            raise ValueError("target basis must share levels and have n_max >= source")
        out = np.zeros(larger.dim, dtype=complex)
        for lev in self.levels:
            out[larger.block(lev)][: self.n_fock] = state[self.block(lev)]
        return out


def ladder_ops(basis: BasisSpec) -> tuple[np.ndarray, np.ndarray]:
    """Annihilation and creation operators on the Fock block (size n_max+1)."""
    n = np.arange(1, basis.n_fock)
    a = np.diag(np.sqrt(n).astype(complex), k=1)
    return a, a.conj().T


def build_h_full(params: ModelParams, basis: BasisSpec) -> np.ndarray:
    """Three-level no-jump Hamiltonian on the truncated basis.

    Couplings: j1 and j2*a on |e><g|, j3*exp(-i*phi) on |e><f|, j3 on
    |g><f|, plus Hermitian conjugates, and the anti-Hermitian -i*gamma
    on the f manifold.
    """
    if "f" not in basis.levels:
        raise ValueError("full Hamiltonian needs the three-level basis (g, e, f)")
    a, _ = ladder_ops(basis)
    eye = np.eye(basis.n_fock, dtype=complex)
    h = np.zeros((basis.dim, basis.dim), dtype=complex)
    bg, be, bf = basis.block("g"), basis.block("e"), basis.block("f")

    h[be, bg] += params.j1 * eye + params.j2 * a
    h[be, bf] += params.j3 * np.exp(-1j * params.phi) * eye
    h[bg, bf] += params.j3 * eye
    h += h.conj().T
    h[bf, bf] += -1j * params.gamma * eye
    return h


def build_h_eff(params: ModelParams, basis: BasisSpec,
                include_constant: bool = False) -> np.ndarray:
    """Effective two-level Hamiltonian after eliminating the lossy level.

    Intracell elements are the asymmetric alpha couplings; intercell
    hopping is j2*sqrt(n+1) between |e,n> and |g,n+1>, equal in both
    directions.  ``include_constant`` restores the uniform -i*g*identity
    term dropped from the elimination; it only matters for survival
    (post-selection) probabilities.
    """
    if basis.levels != TWO_LEVEL:
        raise ValueError("effective Hamiltonian lives on the two-level basis (g, e)")
    cpl = derive_couplings(params)
    a, adag = ladder_ops(basis)
    eye = np.eye(basis.n_fock, dtype=complex)
    h = np.zeros((basis.dim, basis.dim), dtype=complex)
    bg, be = basis.block("g"), basis.block("e")

    h[be, bg] = cpl.alpha2 * eye + params.j2 * a
    h[bg, be] = cpl.alpha1 * eye + params.j2 * adag
    if include_constant:
        h -= 1j * cpl.g * np.eye(basis.dim)
    return h


def chiral_operator(basis: BasisSpec) -> np.ndarray:
    """diag(+1) on e-sites, diag(-1) on g-sites; anticommutes with h_eff."""
    sz = np.zeros(basis.dim)
    sz[basis.block("e")] = 1.0
    sz[basis.block("g")] = -1.0
    return np.diag(sz)


def adiabatic_elimination_error(params: ModelParams, initial: np.ndarray,
                                t_end: float, basis: BasisSpec,
                                n_times: int = 200, rtol: float = 1e-9) -> float:
    """Max distance between full and effective conditional evolution.

    ``initial`` is given on the two-level ``basis`` (no f amplitude); it is
    embedded into the three-level basis and propagated under the full
    Hamiltonian, then projected back onto the g/e sector and compared with
    the effective evolution (constant term included so amplitudes match).
    Returns the maximum Euclidean distance over the time grid, both states
    unnormalized.
    """
    from .dynamics import evolve_direct

    if basis.levels != TWO_LEVEL:
        raise ValueError("initial state must be given on the two-level basis")
    basis3 = BasisSpec(basis.n_max, THREE_LEVEL)
    full0 = np.zeros(basis3.dim, dtype=complex)
    full0[basis3.block("g")] = initial[basis.block("g")]
    full0[basis3.block("e")] = initial[basis.block("e")]

    times = np.linspace(0.0, t_end, n_times)
    h_full = build_h_full(params, basis3)
    h_eff = build_h_eff(params, basis, include_constant=True)

    res_full = evolve_direct(h_full, full0, times, rtol=rtol, basis=basis3)
    res_eff = evolve_direct(h_eff, np.asarray(initial, dtype=complex), times,
                            rtol=rtol, basis=basis)

    sector = np.concatenate([res_full.states[:, basis3.block("g")],
                             res_full.states[:, basis3.block("e")]], axis=1)
    eff = np.concatenate([res_eff.states[:, basis.block("g")],
                          res_eff.states[:, basis.block("e")]], axis=1)
    return float(np.max(np.linalg.norm(sector - eff, axis=1)))
