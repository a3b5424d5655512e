import numpy as np
import pytest

from fockskin.model import ModelParams, build_h_eff
from fockskin.eigensystem import analytic_eigenset
from fockskin.dynamics import evolve_analytic, evolve_direct, expand

# the three parameter cases compared throughout the eigenstate figures
FIG2_CASES = {
    "j3_0": dict(j3=0.0, phi=0.0),
    "phi_plus": dict(j3=3.0, phi=np.pi / 2),
    "phi_minus": dict(j3=3.0, phi=-np.pi / 2),
}

# six dynamics panels: (j1, j3, phi)
FIG5_CASES = {
    "fig5a": (0.6, 0.0, 0.0),
    "fig5b": (1.5, 0.0, 0.0),
    "fig5c": (0.6, 3.0, np.pi / 2),
    "fig5d": (1.5, 3.0, np.pi / 2),
    "fig5e": (0.6, 3.0, -np.pi / 2),
    "fig5f": (1.5, 3.0, -np.pi / 2),
}


@pytest.fixture(scope="session")
def eigensets_j1_15():
    """Analytic eigensets (60 pairs) for the three cases at j1 = 1.5."""
    return {tag: analytic_eigenset(ModelParams(j1=1.5, **kw), 60)
            for tag, kw in FIG2_CASES.items()}


@pytest.fixture(scope="session")
def fig5_evolutions():
    """Lazily computed |g,40> evolutions, analytic and direct, per panel."""
    cache = {}
    times = np.linspace(0.0, 20.0, 200)

    def get(tag):
        if tag not in cache:
            j1, j3, phi = FIG5_CASES[tag]
            params = ModelParams(j1=j1, j3=j3, phi=phi)
            eig = analytic_eigenset(params, 160)
            initial = eig.basis.basis_state("g", 40)
            coeffs = expand(initial, eig, tail_tol=1e-8)
            analytic = evolve_analytic(coeffs, eig, times)
            h = build_h_eff(params, eig.basis)
            direct = evolve_direct(h, initial, times, rtol=1e-10, basis=eig.basis)
            cache[tag] = (eig, times, analytic, direct)
        return cache[tag]

    return get
