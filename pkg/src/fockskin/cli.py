"""Command-line interface: figure-data reproduction and validation suites.

Subcommands write CSV (tabular data) or JSON (reports) and can render the
corresponding matplotlib figure next to the delimited output.  Everything
is deterministic: the same configuration produces byte-identical files.

Value precedence: command-line flags override config-file entries, which
override built-in presets.
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from . import __version__
from .model import (BasisSpec, ModelParams, adiabatic_elimination_error,
                    build_h_eff)
from .eigensystem import analytic_eigenset, residual, verify_similarity
from .dynamics import (evolve_analytic, evolve_direct, expand,
                       normalized_distribution, survival_probability)
from .uniform import UniformParams, solve_uniform, skin_profile
from .observables import ipr, mean_position
from .ion import IonParams, proposal_check, DEFAULT_PHONON_BUDGET

CSV_VERSION = "fockskin-csv v1"

# parameter presets keyed by figure panel; gamma = 50 and j2 = 1 throughout
PRESETS = {
    "fig2": {"j1": 1.5},
    "fig3a": {"j1": 0.6, "n_cells": 100},
    "fig3b": {"j1": 1.5, "n_cells": 100},
    "fig3c": {"j1": 0.6},
    "fig3d": {"j1": 1.5},
    "fig5a": {"j1": 0.6, "j3": 0.0, "phi": 0.0},
    "fig5b": {"j1": 1.5, "j3": 0.0, "phi": 0.0},
    "fig5c": {"j1": 0.6, "j3": 3.0, "phi": np.pi / 2},
    "fig5d": {"j1": 1.5, "j3": 3.0, "phi": np.pi / 2},
    "fig5e": {"j1": 0.6, "j3": 3.0, "phi": -np.pi / 2},
    "fig5f": {"j1": 1.5, "j3": 3.0, "phi": -np.pi / 2},
}

CONFIG_KEYS = {
    "j1", "j2", "j3", "gamma", "phi", "n_modes", "n_max", "t_end", "t_steps",
    "rtol", "n_cells", "mode_n", "branch", "initial_cell", "eta", "threshold",
    "phonon_budget", "mass",
}

DEFAULTS = {
    "j1": 0.6, "j2": 1.0, "j3": 0.0, "gamma": 50.0, "phi": 0.0,
    "n_modes": 99, "n_max": None, "t_end": 20.0, "t_steps": 400,
    "rtol": 1e-9, "n_cells": 100, "mode_n": 0, "branch": "zero",
    "initial_cell": 40, "eta": 0.05, "threshold": 0.2025,
    "phonon_budget": DEFAULT_PHONON_BUDGET, "mass": 0.999,
}


def fmt(x) -> str:
    """17-significant-digit decimal serialization for round-trip fidelity."""
    if isinstance(x, (bool, np.bool_)):
        return "true" if x else "false"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    return f"{float(x):.17g}"


def write_csv(path, schema: str, header: list, rows):
    lines = [f"# {CSV_VERSION} {schema}", ",".join(header)]
    for row in rows:
        lines.append(",".join(v if isinstance(v, str) else fmt(v) for v in row))
    text = "\n".join(lines) + "\n"
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)


def resolve_config(args, keys, base=None) -> dict:
    """Merge preset < config file < explicit flags for the given keys."""
    cfg = dict(DEFAULTS)
    if base:
        cfg.update(base)
    preset = getattr(args, "preset", None)
    if preset:
        if preset not in PRESETS:
            raise SystemExit(f"unknown preset {preset!r}; choose from {sorted(PRESETS)}")
        cfg.update(PRESETS[preset])
    config_path = getattr(args, "config", None)
    if config_path:
        with open(config_path, encoding="utf-8") as fh:
            loaded = json.load(fh)
        unknown = set(loaded) - CONFIG_KEYS
        if unknown:
            raise SystemExit(f"unknown config keys: {sorted(unknown)}")
        cfg.update(loaded)
    for key in keys:
        val = getattr(args, key, None)
        if val is not None:
            cfg[key] = val
    return cfg


def model_params(cfg) -> ModelParams:
    return ModelParams(j1=cfg["j1"], j2=cfg["j2"], j3=cfg["j3"],
                       gamma=cfg["gamma"], phi=cfg["phi"])


def cmd_spectrum(args):
    cfg = resolve_config(args, ["j1", "j2", "j3", "gamma", "phi", "n_modes", "n_max"])
    params = model_params(cfg)
    eig = analytic_eigenset(params, int(cfg["n_modes"]), n_max=cfg["n_max"])
    rows = []
    for trip in eig:
        rows.append((trip.n, trip.branch, trip.energy,
                     mean_position(trip.right, eig.basis), ipr(trip.right)))
    write_csv(args.out, "spectrum(mode_n,branch,energy,mean_n,ipr)",
              ["mode_n", "branch", "energy", "mean_n", "ipr"], rows)
    if args.fig:
        from .plots import plot_spectrum
        plot_spectrum([r[2] for r in rows], [r[3] for r in rows],
                      [r[4] for r in rows], args.fig,
                      title=f"j1={params.j1}, j3={params.j3}, phi={params.phi:.3g}")
    return 0


EIGENSTATE_CASES = (
    ("j3_0", 0.0, 0.0),
    ("phi_plus", 3.0, np.pi / 2),
    ("phi_minus", 3.0, -np.pi / 2),
)


def cmd_eigenstate(args):
    cfg = resolve_config(args, ["j1", "j2", "gamma", "mode_n", "branch", "n_max"])
    mode_n, branch = int(cfg["mode_n"]), cfg["branch"]
    if branch not in ("zero", "plus", "minus"):
        raise SystemExit(f"unknown branch {branch!r}")
    if branch == "zero" and mode_n != 0:
        raise SystemExit("the zero branch only exists for mode_n = 0")
    rows, dists = [], {}
    for case, j3, phi in EIGENSTATE_CASES:
        params = ModelParams(j1=cfg["j1"], j2=cfg["j2"], j3=j3,
                             gamma=cfg["gamma"], phi=phi)
        eig = analytic_eigenset(params, max(mode_n + 1, 1), n_max=cfg["n_max"])
        trip = eig.mode(mode_n, branch)
        dist = normalized_distribution(trip.right, eig.basis)
        dists[case] = dist
        for cell, prob in enumerate(dist):
            rows.append((case, cell, prob))
    write_csv(args.out, "eigenstate(case,cell,probability)",
              ["case", "cell", "probability"], rows)
    if args.fig:
        from .plots import plot_eigenstate
        plot_eigenstate(dists, args.fig,
                        title=f"mode ({mode_n}, {branch}), j1={cfg['j1']}")
    return 0


def cmd_dynamics(args):
    cfg = resolve_config(args, ["j1", "j2", "j3", "gamma", "phi", "n_modes",
                                "t_end", "t_steps", "initial_cell"])
    params = model_params(cfg)
    n_modes = int(cfg["n_modes"])
    if n_modes < 4 * cfg["initial_cell"]:
        n_modes = max(160, 4 * int(cfg["initial_cell"]))
    eig = analytic_eigenset(params, n_modes)
    initial = eig.basis.basis_state("g", int(cfg["initial_cell"]))
    times = np.linspace(0.0, cfg["t_end"] / params.j2, int(cfg["t_steps"]))
    result = evolve_analytic(expand(initial, eig), eig, times)
    survival = survival_probability(params, result)

    rows = []
    dists = []
    for t, state in zip(times, result.states):
        dist = normalized_distribution(state, eig.basis)
        dists.append(dist)
        for cell, prob in enumerate(dist):
            rows.append((t, cell, prob))
    write_csv(args.out, "dynamics(t,cell,probability)",
              ["t", "cell", "probability"], rows)
    summary_path = None
    if args.out and args.out != "-":
        summary_path = args.out + ".summary.csv" if not args.out.endswith(".csv") \
            else args.out[:-4] + ".summary.csv"
    write_csv(summary_path, "dynamics-summary(t,norm,survival)",
              ["t", "norm", "survival"],
              zip(times, result.norms, survival))
    if args.fig:
        from .plots import plot_dynamics
        plot_dynamics(times, dists, args.fig,
                      title=f"j1={params.j1}, j3={params.j3}, phi={params.phi:.3g}")
    return 0


def cmd_uniform(args):
    cfg = resolve_config(args, ["j1", "j2", "j3", "gamma", "phi", "n_cells"])
    uparams = UniformParams(model_params(cfg), int(cfg["n_cells"]))
    profile = skin_profile(solve_uniform(uparams))
    rows = [(r["energy"], r["mean_cell"], r["ipr"]) for r in profile]
    write_csv(args.out, "uniform(energy,mean_n,ipr)",
              ["energy", "mean_n", "ipr"], rows)
    if args.fig:
        from .plots import plot_uniform
        plot_uniform(profile["energy"], profile["mean_cell"], profile["ipr"],
                     args.fig, title=f"uniform chain, N={uparams.n_cells}")
    return 0


VALIDATE_SETS = (
    ("j3_0", 1.5, 0.0, 0.0),
    ("phi_plus", 1.5, 3.0, np.pi / 2),
    ("phi_minus", 1.5, 3.0, -np.pi / 2),
)


def cmd_validate(args):
    cfg = resolve_config(args, ["n_modes", "n_max", "rtol"])
    n_modes = min(int(cfg["n_modes"]), 50)
    checks = []

    def add(name, value, threshold, ok=None):
        ok = bool(value < threshold) if ok is None else bool(ok)
        checks.append({"name": name, "value": float(value),
                       "threshold": float(threshold), "pass": ok})

    for tag, j1, j3, phi in VALIDATE_SETS:
        params = ModelParams(j1=j1, j3=j3, phi=phi)
        eig = analytic_eigenset(params, n_modes, n_max=cfg["n_max"])
        h = build_h_eff(params, eig.basis)
        worst = max(max(residual(t, h), residual(t, h, "left")) for t in eig)
        add(f"residual/{tag}", worst, 1e-8)
        gram = eig.left_matrix().conj().T @ eig.right_matrix()
        add(f"biorthonormality/{tag}",
            np.max(np.abs(gram - np.eye(gram.shape[0]))), 1e-8)
        add(f"similarity/{tag}", verify_similarity(params, 200), 1e-6)

    params = ModelParams(j1=1.5, j3=3.0, phi=np.pi / 2)
    basis = BasisSpec(40)
    err50 = adiabatic_elimination_error(params, basis.basis_state("g", 0),
                                        5.0, basis, rtol=cfg["rtol"])
    add("adiabatic_elimination/gamma_50", err50, 0.05)
    err500 = adiabatic_elimination_error(
        ModelParams(j1=1.5, j3=3.0, gamma=500.0, phi=np.pi / 2),
        basis.basis_state("g", 0), 5.0, basis, rtol=cfg["rtol"])
    add("adiabatic_elimination/decreases_with_gamma", err500, err50)

    params = ModelParams(j1=0.6, j3=3.0, phi=np.pi / 2)
    eig = analytic_eigenset(params, 160)
    initial = eig.basis.basis_state("g", 40)
    times = np.linspace(0.0, 20.0, 200)
    analytic = evolve_analytic(expand(initial, eig), eig, times)
    direct = evolve_direct(build_h_eff(params, eig.basis), initial, times,
                           rtol=1e-10, basis=eig.basis)
    add("dynamics/analytic_vs_direct",
        np.max(np.abs(analytic.states - direct.states)), 1e-6)

    report = {
        "version": __version__,
        "checks": checks,
        "pass": all(c["pass"] for c in checks),
    }
    text = json.dumps(report, indent=2, sort_keys=True) + "\n"
    if args.out and args.out != "-":
        with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0 if report["pass"] else 1


def cmd_ion(args):
    # the ion command defaults to the proposal parameter point
    cfg = resolve_config(args, ["j1", "j2", "j3", "gamma", "phi", "eta",
                                "threshold", "initial_cell", "t_end", "t_steps",
                                "phonon_budget", "mass", "rtol"],
                         base={"j3": 3.0, "phi": np.pi / 2, "initial_cell": 10})
    params = ModelParams(j1=cfg["j1"], j2=cfg["j2"], j3=cfg["j3"],
                         gamma=cfg["gamma"], phi=cfg["phi"])
    report = proposal_check(
        params, int(cfg["initial_cell"]),
        IonParams(eta=cfg["eta"], threshold=cfg["threshold"]),
        t_end=cfg["t_end"], n_times=int(cfg["t_steps"]),
        phonon_budget=int(cfg["phonon_budget"]), mass=cfg["mass"],
        rtol=cfg["rtol"])
    text = json.dumps(report.as_dict(), indent=2, sort_keys=True) + "\n"
    if args.out and args.out != "-":
        with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0 if report.feasible else 1


def _parse_list(text):
    return [float(v) for v in text.split(",") if v.strip() != ""]


def cmd_sweep(args):
    cfg = resolve_config(args, ["j2", "gamma", "n_modes"])
    j1s = _parse_list(args.j1_list)
    j3s = _parse_list(args.j3_list)
    phis = _parse_list(args.phi_list)
    rows = []
    for j1 in j1s:
        for j3 in j3s:
            for phi in phis:
                params = ModelParams(j1=j1, j2=cfg["j2"], j3=j3,
                                     gamma=cfg["gamma"], phi=phi)
                eig = analytic_eigenset(params, int(cfg["n_modes"]))
                for trip in eig:
                    rows.append((j1, j3, phi, trip.n, trip.branch, trip.energy,
                                 mean_position(trip.right, eig.basis),
                                 ipr(trip.right)))
    write_csv(args.out, "sweep(j1,j3,phi,mode_n,branch,energy,mean_n,ipr)",
              ["j1", "j3", "phi", "mode_n", "branch", "energy", "mean_n", "ipr"],
              rows)
    return 0


def build_parser():
    parser = argparse.ArgumentParser(
        prog="fockskin",
        description="Confined non-Hermitian skin effect on a Fock-state lattice")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    def common(sp, figure=True):
        sp.add_argument("--j1", type=float)
        sp.add_argument("--j2", type=float)
        sp.add_argument("--j3", type=float)
        sp.add_argument("--gamma", type=float)
        sp.add_argument("--phi", type=float)
        sp.add_argument("--n-modes", dest="n_modes", type=int)
        sp.add_argument("--n-max", dest="n_max", type=int)
        sp.add_argument("--t-end", dest="t_end", type=float)
        sp.add_argument("--t-steps", dest="t_steps", type=int)
        sp.add_argument("--rtol", type=float)
        sp.add_argument("--preset", choices=sorted(PRESETS))
        sp.add_argument("--config", help="flat JSON config file")
        sp.add_argument("--out", help="output path ('-' or omitted: stdout)")
        if figure:
            sp.add_argument("--fig", help="also render a PNG figure to this path")

    sp = sub.add_parser("spectrum", help="analytic spectrum with observables")
    common(sp)
    sp.set_defaults(func=cmd_spectrum)

    sp = sub.add_parser("eigenstate", help="cell distribution of one mode, three cases")
    common(sp)
    sp.add_argument("--mode-n", dest="mode_n", type=int)
    sp.add_argument("--branch", choices=["zero", "plus", "minus"])
    sp.set_defaults(func=cmd_eigenstate)

    sp = sub.add_parser("dynamics", help="time evolution from a single cell")
    common(sp)
    sp.add_argument("--initial-cell", dest="initial_cell", type=int)
    sp.set_defaults(func=cmd_dynamics)

    sp = sub.add_parser("uniform", help="uniform-coupling reference chain")
    common(sp)
    sp.add_argument("--n-cells", dest="n_cells", type=int)
    sp.set_defaults(func=cmd_uniform)

    sp = sub.add_parser("validate", help="run the internal consistency suite")
    common(sp, figure=False)
    sp.set_defaults(func=cmd_validate)

    sp = sub.add_parser("ion", help="trapped-ion feasibility report")
    common(sp, figure=False)
    sp.add_argument("--initial-cell", dest="initial_cell", type=int)
    sp.add_argument("--eta", type=float)
    sp.add_argument("--threshold", type=float)
    sp.add_argument("--phonon-budget", dest="phonon_budget", type=int)
    sp.set_defaults(func=cmd_ion)

    sp = sub.add_parser("sweep", help="spectrum observables over a parameter grid")
    common(sp, figure=False)
    sp.add_argument("--j1-list", default="0.3,0.6,1.5,3")
    sp.add_argument("--j3-list", default="0,1,3")
    sp.add_argument("--phi-list", default="0,1.5707963267948966,-1.5707963267948966")
    sp.set_defaults(func=cmd_sweep)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
