"""The Nambu covariance matrix: initial states, symmetry repair, diagnostics.

The state of a pure fermionic Gaussian state on 2L modes is the 4L x 4L
matrix Gamma = <C C^dag> with C = (c, c^dag) in the spin-major flat
ordering.  Only the blocks Gamma^22 = <c^dag c> and Gamma^12 = <c c> are
stored; Gamma^11 = 1 - (Gamma^22)^T and Gamma^21 = -(Gamma^12)^* are
derived on demand, so those two constraints hold by construction.
"""

from __future__ import annotations

import struct
from dataclasses import dataclass

import numpy as np

from .errors import ConfigError, IntegrityError

# Defect above the test tolerance by an order of magnitude signals a bug.
ABORT_THRESHOLD = 1e-6
EIG_TOLERANCE = 1e-10

_MAGIC = b"NCOV1"


@dataclass
class NambuCovariance:
    """gamma22 = <c^dag_x c_y>, gamma12 = <c_x c_y>, both (2L, 2L) complex."""

    gamma22: np.ndarray
    gamma12: np.ndarray

    def __post_init__(self) -> None:
        g22 = np.asarray(self.gamma22, dtype=np.complex128)
        g12 = np.asarray(self.gamma12, dtype=np.complex128)
        if g22.shape != g12.shape or g22.ndim != 2 or g22.shape[0] != g22.shape[1]:
            raise ValueError("gamma22 and gamma12 must be equal square matrices")
        if g22.shape[0] % 2 != 0:
            raise ValueError("block dimension must be 2L")
        self.gamma22 = g22
        self.gamma12 = g12

    @property
    def L(self) -> int:
        return self.gamma22.shape[0] // 2

    @property
    def n_modes(self) -> int:
        return self.gamma22.shape[0]

    @property
    def gamma11(self) -> np.ndarray:
        """<c c^dag> = 1 - (Gamma^22)^T, derived."""
        return np.eye(self.n_modes, dtype=np.complex128) - self.gamma22.T

    @property
    def gamma21(self) -> np.ndarray:
        """<c^dag c^dag> = -(Gamma^12)^*, derived."""
        return -self.gamma12.conj()

    def full(self) -> np.ndarray:
        """Assemble the 4L x 4L matrix Gamma = <C C^dag>."""
        return np.block([[self.gamma11, self.gamma12],
                         [self.gamma21, self.gamma22]])

    def copy(self) -> "NambuCovariance":
        return NambuCovariance(self.gamma22.copy(), self.gamma12.copy())

    def occupation(self, flat: int) -> float:
        return float(self.gamma22[flat, flat].real)


def neel_covariance(L: int) -> NambuCovariance:
    """Covariance of the Neel product state: up on odd sites, down on even."""
    if L % 2 != 0:
        raise ConfigError(f"Neel state needs even L, got {L}")
    if L < 2:
        raise ConfigError(f"L must be >= 2, got {L}")
    occ = np.zeros(2 * L)
    for site in range(1, L + 1):
        if site % 2 == 1:
            occ[site - 1] = 1.0          # spin up
        else:
            occ[L + site - 1] = 1.0      # spin down
    g22 = np.diag(occ).astype(np.complex128)
    g12 = np.zeros((2 * L, 2 * L), dtype=np.complex128)
    return NambuCovariance(g22, g12)


def vacuum_covariance(L: int, *, allow_odd: bool = False) -> NambuCovariance:
    """Covariance of the empty lattice |0,...,0>."""
    if L % 2 != 0 and not allow_odd:
        raise ConfigError(f"vacuum_covariance needs even L, got {L}")
    if L < 2:
        raise ConfigError(f"L must be >= 2, got {L}")
    g22 = np.zeros((2 * L, 2 * L), dtype=np.complex128)
    g12 = np.zeros((2 * L, 2 * L), dtype=np.complex128)
    return NambuCovariance(g22, g12)


def symmetry_defect(state: NambuCovariance) -> float:
    """Max-norm violation of hermiticity of Gamma^22 and antisymmetry of Gamma^12."""
    herm = np.abs(state.gamma22 - state.gamma22.conj().T).max(initial=0.0)
    anti = np.abs(state.gamma12 + state.gamma12.T).max(initial=0.0)
    return float(max(herm, anti))


def purity_defect(state: NambuCovariance) -> float:
    """||Gamma^2 - Gamma||_max; zero exactly for a pure Gaussian state."""
    G = state.full()
    return float(np.abs(G @ G - G).max())


def trace_defect(state: NambuCovariance) -> float:
    """|trace(Gamma) - 2L| (identically zero in this block storage)."""
    G = state.full()
    return float(abs(G.trace().real - state.n_modes))


def enforce_symmetry(state: NambuCovariance,
                     abort_threshold: float = ABORT_THRESHOLD) -> NambuCovariance:
    """Project the stored blocks back onto the fermionic constraint manifold.

    Hermitizes Gamma^22 and antisymmetrizes Gamma^12; Gamma^11/Gamma^21
    are derived so they satisfy the constraints exactly afterwards.  A
    pre-repair defect above ``abort_threshold`` is a logic error, not
    drift, and raises.
    """
    defect = symmetry_defect(state)
    if defect > abort_threshold:
        raise IntegrityError(
            f"symmetry defect {defect:.3e} exceeds abort threshold {abort_threshold:g}"
        )
    g22 = 0.5 * (state.gamma22 + state.gamma22.conj().T)
    g12 = 0.5 * (state.gamma12 - state.gamma12.T)
    return NambuCovariance(g22, g12)


def occupation_eigen_range(state: NambuCovariance) -> tuple[float, float]:
    """(min, max) eigenvalue of Gamma^22; both must lie in [0, 1] up to drift."""
    w = np.linalg.eigvalsh(0.5 * (state.gamma22 + state.gamma22.conj().T))
    return float(w.min()), float(w.max())


def check_state(state: NambuCovariance,
                abort_threshold: float = ABORT_THRESHOLD) -> None:
    """Raise IntegrityError if symmetry or purity drifted past the threshold."""
    sd = symmetry_defect(state)
    if sd > abort_threshold:
        raise IntegrityError(f"symmetry defect {sd:.3e} > {abort_threshold:g}")
    pd = purity_defect(state)
    if pd > abort_threshold:
        raise IntegrityError(f"purity defect {pd:.3e} > {abort_threshold:g}")


# --------------------------------------------------------------------------
# Binary checkpoint: magic "NCOV1", L as little-endian uint64, then gamma22
# and gamma12 row-major as little-endian complex doubles.
# --------------------------------------------------------------------------

def save_checkpoint(state: NambuCovariance, path: str) -> None:
    with open(path, "wb") as fh:
        fh.write(_MAGIC)
        fh.write(struct.pack("<Q", state.L))
        fh.write(np.ascontiguousarray(state.gamma22, dtype="<c16").tobytes())
        fh.write(np.ascontiguousarray(state.gamma12, dtype="<c16").tobytes())


def load_checkpoint(path: str) -> NambuCovariance:
    with open(path, "rb") as fh:
        magic = fh.read(len(_MAGIC))
        if magic != _MAGIC:
            raise ConfigError(f"{path}: not a NCOV1 checkpoint")
        (L,) = struct.unpack("<Q", fh.read(8))
        n = 2 * L
        count = n * n
        g22 = np.frombuffer(fh.read(16 * count), dtype="<c16", count=count)
        g12 = np.frombuffer(fh.read(16 * count), dtype="<c16", count=count)
        if g12.size != count:
            raise ConfigError(f"{path}: truncated checkpoint")
    return NambuCovariance(g22.reshape(n, n).astype(np.complex128),
                           g12.reshape(n, n).astype(np.complex128))
