"""Fast invariant sweep at L=8 for the `selfcheck` CLI subcommand."""

from __future__ import annotations

import numpy as np

from .bdg import build_bdg, build_propagator, evolve_step
from .gaussian_state import (neel_covariance, purity_defect, symmetry_defect,
                             trace_defect)
from .lattice import ModelParams
from .measurement import RngStream, measure_site, select_sites
from .observables import Region, entanglement_entropy, restricted_spectrum

TOL = 1e-8


def run_selfcheck(L: int = 8, gamma: float = 10.0, delta: float = 2.0,
                  t_max: float = 5.0, seed: int = 2024,
                  report=print) -> bool:
    """Drive the public operations and verify the state invariants.

    Returns True when every check passes; prints one line per check.
    """
    params = ModelParams(L=L, J=1.0, delta=delta, gamma=gamma)
    prop = build_propagator(build_bdg(params), params.dt)
    rng = RngStream(seed)
    state = neel_covariance(L)
    region = Region.half_chain(L)
    n_steps = int(round(t_max / params.dt))

    worst = {"symmetry": 0.0, "purity": 0.0, "trace": 0.0,
             "eig_low": 0.0, "eig_high": 0.0, "complement": 0.0}
    for step in range(1, n_steps + 1):
        state = evolve_step(state, prop)
        for site in select_sites(rng, L, params.p_measure):
            state, _ = measure_site(state, site, rng, t=step * params.dt)
        if step % 10 == 0:
            worst["symmetry"] = max(worst["symmetry"], symmetry_defect(state))
            worst["purity"] = max(worst["purity"], purity_defect(state))
            worst["trace"] = max(worst["trace"], trace_defect(state))
            lam = restricted_spectrum(state, region)
            worst["eig_low"] = max(worst["eig_low"], float(-lam.min()))
            worst["eig_high"] = max(worst["eig_high"], float(lam.max() - 1.0))
            s_a = entanglement_entropy(state, region)
            s_b = entanglement_entropy(state, region.complement(L))
            worst["complement"] = max(worst["complement"], abs(s_a - s_b))

    bounds = {"symmetry": TOL, "purity": TOL, "trace": TOL,
              "eig_low": 1e-10, "eig_high": 1e-10, "complement": TOL}
    ok = True
    for name, value in worst.items():
        passed = value <= bounds[name]
        ok = ok and passed
        report(f"  {'PASS' if passed else 'FAIL'}  {name:<12} "
               f"max defect {value:.3e} (bound {bounds[name]:g})")
    return ok
