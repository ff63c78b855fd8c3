"""Single-particle Bogoliubov-de Gennes matrix and the Trotter-step propagator.

In the Nambu basis C = (c, c^dag) the chain Hamiltonian is
H = (1/2) C^dag HBdG C + const with

    HBdG = [[ h,   D ],
            [-D*, -h^T]],

h the periodic hopping matrix on both spin sectors and D the on-site
pairing block coupling (j, up) to (j, dn).  The convention Gamma(t+dt) =
V Gamma V^dag with V = exp(-i HBdG dt) was validated against an exact
Fock-space propagation (see tests).

HBdG never mixes the (particle-up, hole-down) sector with its
particle-hole mirror, so V is block diagonal in that split; the blocks
are exposed for the trajectory engine's reduced representation.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import IntegrityError, NumericsError
from .gaussian_state import ABORT_THRESHOLD, NambuCovariance
from .lattice import ModelParams

UNITARITY_TOL = 1e-12


def hopping_matrix(L: int, J: float) -> np.ndarray:
    """Periodic nearest-neighbor hopping, -J per directed bond (accumulated)."""
    h = np.zeros((L, L))
    for j in range(L):
        h[j, (j + 1) % L] += -J
        h[(j + 1) % L, j] += -J
    return h


def sector_bdg(params: ModelParams) -> np.ndarray:
    """2L x 2L BdG matrix of the (particle-up, hole-down) sector.

    Fourier-diagonalizes to [[xi_k, -Delta], [-Delta, -xi_k]] per momentum.
    """
    L = params.L
    h = hopping_matrix(L, params.J)
    d = -params.delta * np.eye(L)
    return np.block([[h, d], [d, -h]])


@dataclass(frozen=True)
class BdGMatrix:
    """Full 4L x 4L single-particle matrix plus its sector reduction."""

    h: np.ndarray          # 4L x 4L, Hermitian
    h_sector: np.ndarray   # 2L x 2L block of the (p-up, h-dn) sector
    params: ModelParams

    @property
    def L(self) -> int:
        return self.params.L


def _sector_indices(L: int) -> tuple[np.ndarray, np.ndarray]:
    """(A, B) index sets of the two decoupled Nambu sectors in the full basis."""
    a = np.r_[0:L, 3 * L:4 * L]          # particle-up, hole-down
    b = np.r_[L:2 * L, 2 * L:3 * L]      # particle-down, hole-up
    return a, b


def _swap_halves(m: np.ndarray) -> np.ndarray:
    """Conjugate by the block swap [[0, 1], [1, 0]] on a 2L x 2L matrix."""
    n = m.shape[0] // 2
    perm = np.r_[n:2 * n, 0:n]
    return m[np.ix_(perm, perm)]


def build_bdg(params: ModelParams) -> BdGMatrix:
    """Assemble HBdG from the chain parameters."""
    L = params.L
    h1 = hopping_matrix(L, params.J)
    h = np.block([[h1, np.zeros((L, L))], [np.zeros((L, L)), h1]])
    D = np.zeros((2 * L, 2 * L))
    for j in range(L):
        D[j, L + j] = -params.delta
        D[L + j, j] = +params.delta
    full = np.block([[h, D], [-D.conj(), -h.T]]).astype(np.complex128)
    return BdGMatrix(h=full, h_sector=sector_bdg(params), params=params)


@dataclass(frozen=True)
class BdGPropagator:
    """v = exp(-i HBdG dt), with the sector blocks used by the hot loop."""

    v: np.ndarray          # 4L x 4L unitary
    v_sector: np.ndarray   # 2L x 2L unitary on the (p-up, h-dn) sector
    dt: float
    sector_energies: np.ndarray   # eigenvalues of the sector BdG matrix
    sector_modes: np.ndarray      # corresponding eigenvectors (columns)

    @property
    def L(self) -> int:
        return self.v.shape[0] // 4


def build_propagator(h: BdGMatrix, dt: float) -> BdGPropagator:
    """Exact one-step propagator via eigen-decomposition (no internal splitting)."""
    if not dt > 0:
        raise ValueError(f"dt must be > 0, got {dt}")
    try:
        eps, Q = np.linalg.eigh(h.h_sector)
    except np.linalg.LinAlgError as exc:
        raise NumericsError(f"BdG eigen-decomposition failed: {exc}") from exc
    va = np.ascontiguousarray((Q * np.exp(-1j * eps * dt)) @ Q.conj().T)
    # particle-hole mirror sector: H_B = -S H_A S with the half swap, and
    # H_A is real, so V_B = S conj(V_A) S.
    vb = _swap_halves(va.conj())
    L = h.L
    v = np.zeros((4 * L, 4 * L), dtype=np.complex128)
    ia, ib = _sector_indices(L)
    v[np.ix_(ia, ia)] = va
    v[np.ix_(ib, ib)] = vb
    defect = np.abs(v @ v.conj().T - np.eye(4 * L)).max()
    if defect > UNITARITY_TOL:
        raise NumericsError(f"propagator unitarity defect {defect:.3e}")
    return BdGPropagator(v=v, v_sector=va, dt=dt,
                         sector_energies=eps, sector_modes=Q)


def evolve_step(state: NambuCovariance, prop: BdGPropagator,
                check: bool = False) -> NambuCovariance:
    """One Trotter step of the unitary evolution, Gamma <- V Gamma V^dag."""
    n = state.n_modes
    if prop.v.shape[0] != 2 * n:
        raise ValueError(
            f"propagator is for {prop.v.shape[0] // 4} sites, state has {n // 2}"
        )
    G = prop.v @ state.full() @ prop.v.conj().T
    out = NambuCovariance(G[n:, n:], G[:n, n:])
    if check:
        from .gaussian_state import purity_defect
        pd = purity_defect(out)
        if pd > ABORT_THRESHOLD:
            raise IntegrityError(f"post-step purity defect {pd:.3e}")
    return out


def quadratic_energy(state: NambuCovariance, h: BdGMatrix) -> float:
    """<H> up to the constant term: -(1/2) tr(HBdG Gamma)."""
    return float((-0.5 * np.trace(h.h @ state.full())).real)
