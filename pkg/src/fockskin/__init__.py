"""Confined non-Hermitian skin effect on a semi-infinite Fock-state lattice."""

from .model import (
    ModelParams,
    DerivedCouplings,
    BasisSpec,
    derive_couplings,
    ladder_ops,
    build_h_full,
    build_h_eff,
    adiabatic_elimination_error,
)
from .eigensystem import (
    CutoffError,
    SimilarityOperator,
    EigenTriple,
    EigenSet,
    similarity_elements,
    analytic_eigenset,
    residual,
    verify_similarity,
)
from .dynamics import (
    ConvergenceError,
    CutoffBreachError,
    ExpansionCoefficients,
    EvolutionResult,
    expand,
    evolve_analytic,
    evolve_direct,
    survival_probability,
    normalized_distribution,
)
from .uniform import (
    GaugeReductionError,
    UniformParams,
    UniformEigenSet,
    build_uniform_h,
    gauge_reduction,
    solve_uniform,
    skin_profile,
)
from .observables import ipr, mean_position, cell_mean, support_interval, skin_shift
from .ion import IonParams, FeasibilityReport, lamb_dicke, max_cells, proposal_check

__version__ = "0.1.0"
