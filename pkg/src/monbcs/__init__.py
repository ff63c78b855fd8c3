"""Monitored spinful BCS chain: exact Gaussian-state quantum trajectories.

Public surface, by module:

* lattice        – ModelParams, mode indexing, run-config parsing
* gaussian_state – NambuCovariance, initial states, integrity diagnostics
* bdg            – BdG matrix, one-step propagator, unitary evolution
* measurement    – RNG streams, projective charge measurement updates
* observables    – entanglement entropy, pairing amplitudes, occupations
* gge            – analytic steady-state predictions (quench oracle)
* engine         – trajectories, ensembles, sweeps, fits, CSV output
* cli            – `monbcs` command-line tool
"""

__version__ = "0.1.0"

from .lattice import ModelParams, Spin, flatten, unflatten
from .gaussian_state import (NambuCovariance, neel_covariance, vacuum_covariance,
                             enforce_symmetry, purity_defect, symmetry_defect)
from .bdg import BdGMatrix, BdGPropagator, build_bdg, build_propagator, evolve_step
from .measurement import (MeasurementRecord, RngStream, born_probability,
                          measure_site, project_empty, project_occupied,
                          select_sites)
from .observables import (Region, binary_entropy, entanglement_entropy,
                          nn_pairing, occupation_profile, pairing_matrix)
from .gge import (QuasiparticleSpectrum, entropy_density, gge_entropy_curve,
                  nn_pairing_neel, nn_pairing_vacuum, saturation_time,
                  spectrum_at)
from .engine import (EnsembleResult, TrajectoryConfig, TrajectoryResult,
                     gamma_sweep, run_ensemble, run_trajectory,
                     size_scaling_fit, steady_state_value)

__all__ = [name for name in dir() if not name.startswith("_")]
