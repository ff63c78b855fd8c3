"""Measure the half-chain plateau fraction of the gamma=0 Neel quench.

Runs the engine's exact eigenbasis path at L=128 over the default window
and prints plateau / (c_Delta * L) for Delta in {0, 1, 2}.  The Delta=0
value is the one frozen into monbcs.gge.HALF_CHAIN_PLATEAU_FRACTION.
"""
import numpy as np

from monbcs.engine import TrajectoryConfig, run_trajectory
from monbcs.gge import entropy_density
from monbcs.lattice import ModelParams

L = 128
for delta in (0.0, 1.0, 2.0):
    params = ModelParams(L=L, J=1.0, delta=delta, gamma=0.0)
    cfg = TrajectoryConfig(params=params, t_max=1200.0, window=(600.0, 1200.0),
                           base_seed=0, obs_stride=100)
    res = run_trajectory(cfg, 0)
    plateau = res.window_means["entropy"]
    c = entropy_density(params)
    print(f"delta={delta}: plateau={plateau:.10f}  c*L={c * L:.10f}  "
          f"fraction={plateau / (c * L):.10f}")
