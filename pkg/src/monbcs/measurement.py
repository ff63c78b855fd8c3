"""Stochastic spin-resolved projective charge measurements.

Update rules for the covariance blocks are the exact Wick-theorem
expressions for projecting mode m = (l, sigma) onto the occupied or
empty sector; both preserve purity and pin the measured diagonal entry
exactly.  Signs were validated entry-by-entry against a dense Fock-space
oracle (tests/fock_oracle.py).

RNG discipline (fixed so trajectories are bit-reproducible and the Fock
oracle can consume an identical stream): per Trotter step, L uniforms
are drawn for site selection in ascending site order regardless of the
outcome, then two uniforms per selected site (spin up first, then spin
down on the post-collapse state), again in ascending site order.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numpy.random import Generator, Philox

from .errors import BranchForbiddenError, IntegrityError
from .gaussian_state import NambuCovariance, enforce_symmetry
from .lattice import Spin, flatten

# Born probabilities within P_MIN of 0 or 1 are treated as deterministic:
# the update rules divide by <n> or 1-<n> and the limit is the identity
# on the eigenstate, so the forced branch just pins the mode.
P_MIN = 1e-12

_SPLITMIX_GAMMA = 0x9E3779B97F4A7C15
_MASK64 = (1 << 64) - 1


def splitmix64(base_seed: int, index: int) -> int:
    """Stateless splitmix64 mix of (base_seed, index); documented stream split."""
    z = (base_seed + (index + 1) * _SPLITMIX_GAMMA) & _MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
    return (z ^ (z >> 31)) & _MASK64


class RngStream:
    """Deterministic uniform stream backed by the counter-based Philox generator."""

    def __init__(self, seed: int):
        self.seed = int(seed) & _MASK64
        self._gen = Generator(Philox(key=self.seed))

    @classmethod
    def for_trajectory(cls, base_seed: int, traj_id: int) -> "RngStream":
        return cls(splitmix64(base_seed, traj_id))

    def uniform(self, n: int | None = None):
        """n uniforms in [0, 1) (scalar when n is None)."""
        if n is None:
            return float(self._gen.random())
        return self._gen.random(n)


@dataclass(frozen=True)
class MeasurementRecord:
    t: float
    site: int
    spin: Spin
    outcome: str          # "occupied" | "empty"
    born_p: float         # pre-collapse <n_{l,sigma}>


def select_sites(rng: RngStream, L: int, p: float) -> list[int]:
    """Sites selected for measurement this step (1-based, ascending).

    Consumes exactly L uniforms whatever the outcome; site l is selected
    iff r_l < p.
    """
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"p must be in [0, 1], got {p}")
    r = rng.uniform(L)
    return [int(i) + 1 for i in np.nonzero(r < p)[0]]


def born_probability(state: NambuCovariance, site: int, spin: Spin) -> float:
    """Pre-measurement <n_{l,sigma}>, the corresponding diagonal of Gamma^22."""
    m = flatten(site, spin, state.L)
    raw = state.gamma22[m, m].real
    if raw < -1e-8 or raw > 1 + 1e-8:
        raise IntegrityError(f"occupation <n_{site},{spin.value}> = {raw} out of [0, 1]")
    return float(min(max(raw, 0.0), 1.0))


def _pin(state: NambuCovariance, m: int, value: float) -> None:
    """Zero all couplings of mode m and set its occupation exactly."""
    state.gamma22[m, :] = 0.0
    state.gamma22[:, m] = 0.0
    state.gamma22[m, m] = value
    state.gamma12[m, :] = 0.0
    state.gamma12[:, m] = 0.0


def project_occupied(state: NambuCovariance, site: int, spin: Spin) -> NambuCovariance:
    """Collapse n_{l,sigma} -> 1 and renormalize; exact rank-structured update."""
    m = flatten(site, spin, state.L)
    n = state.gamma22[m, m].real
    if n < P_MIN:
        raise BranchForbiddenError(
            f"occupied branch has Born probability {n:.3e} < {P_MIN:g}"
        )
    out = state.copy()
    if n >= 1.0 - P_MIN:
        _pin(out, m, 1.0)
        return out
    a = state.gamma22[:, m].copy()
    b = state.gamma12[:, m].copy()
    out.gamma22 -= (np.outer(a, a.conj()) - np.outer(b.conj(), b)) / n
    out.gamma22[m, m] += 1.0
    out.gamma12 += (np.outer(a.conj(), b) - np.outer(b, a.conj())) / n
    _pin(out, m, 1.0)
    return out


def project_empty(state: NambuCovariance, site: int, spin: Spin) -> NambuCovariance:
    """Collapse n_{l,sigma} -> 0 and renormalize."""
    m = flatten(site, spin, state.L)
    n = state.gamma22[m, m].real
    q = 1.0 - n
    if q < P_MIN:
        raise BranchForbiddenError(
            f"empty branch has Born probability {q:.3e} < {P_MIN:g}"
        )
    out = state.copy()
    if n <= P_MIN:
        _pin(out, m, 0.0)
        return out
    a = -state.gamma22[:, m]
    a[m] += 1.0
    b = state.gamma12[:, m].copy()
    out.gamma22 += (np.outer(a, a.conj()) - np.outer(b.conj(), b)) / q
    out.gamma22[m, m] -= 1.0
    out.gamma12 += (np.outer(a.conj(), b) - np.outer(b, a.conj())) / q
    _pin(out, m, 0.0)
    return out


def measure_site(state: NambuCovariance, site: int, rng: RngStream,
                 t: float = 0.0) -> tuple[NambuCovariance, list[MeasurementRecord]]:
    """Projective charge measurement of one site: n_up first, then n_dn.

    Each outcome compares a fresh uniform x against the current Born
    probability (occupied iff x <= <n>); near-deterministic probabilities
    take the forced branch.  Returns the post-collapse state and the two
    outcome records.
    """
    records: list[MeasurementRecord] = []
    out = state
    for spin in (Spin.UP, Spin.DOWN):
        x = rng.uniform()
        p = born_probability(out, site, spin)
        if p >= 1.0 - P_MIN:
            occupied = True
        elif p <= P_MIN:
            occupied = False
        else:
            occupied = x <= p
        out = (project_occupied if occupied else project_empty)(out, site, spin)
        records.append(MeasurementRecord(
            t=t, site=site, spin=spin,
            outcome="occupied" if occupied else "empty", born_p=p))
    return enforce_symmetry(out), records


def write_measurement_log(records, path: str) -> None:
    """CSV log of measurement events, one row per projective outcome."""
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("t,site,spin,outcome,born_p\n")
        for r in records:
            fh.write(f"{r.t:.6g},{r.site},{r.spin.value},{r.outcome},{r.born_p:.6g}\n")
