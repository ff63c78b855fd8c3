"""Quantities read off the covariance matrix.

Entanglement entropy uses the correlation-matrix spectrum: restricting
all four Nambu blocks to a region double-counts each independent
eigenmode as a (lambda, 1-lambda) pair, and F(x) = F(1-x), so the sum of
binary entropies over the restricted spectrum is halved.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import IntegrityError, NumericsError
from .gaussian_state import EIG_TOLERANCE, NambuCovariance
from .lattice import Spin, flatten


@dataclass(frozen=True)
class Region:
    """Contiguous site interval [a, b], both spins included."""

    a: int
    b: int

    def __post_init__(self) -> None:
        if not 1 <= self.a <= self.b:
            raise ValueError(f"need 1 <= a <= b, got [{self.a}, {self.b}]")

    @classmethod
    def half_chain(cls, L: int) -> "Region":
        return cls(1, L // 2)

    def complement(self, L: int) -> "Region":
        if self.a == 1:
            return Region(self.b + 1, L)
        if self.b == L:
            return Region(1, self.a - 1)
        raise ValueError("complement of an interior interval is not contiguous")

    def flats(self, L: int) -> np.ndarray:
        """Flat mode indices of the region, both spins."""
        if self.b > L:
            raise ValueError(f"region [{self.a}, {self.b}] exceeds L = {L}")
        sites = np.arange(self.a - 1, self.b)
        return np.concatenate([sites, L + sites])


def binary_entropy(x):
    """F(x) = -x ln x - (1-x) ln(1-x), with 0 ln 0 = 0; clamps to [0, 1]."""
    x = np.clip(np.asarray(x, dtype=float), 0.0, 1.0)
    with np.errstate(divide="ignore", invalid="ignore"):
        out = -np.where(x > 0, x * np.log(np.where(x > 0, x, 1.0)), 0.0)
        y = 1.0 - x
        out -= np.where(y > 0, y * np.log(np.where(y > 0, y, 1.0)), 0.0)
    return out if out.ndim else float(out)


def restricted_spectrum(state: NambuCovariance, region: Region) -> np.ndarray:
    """Eigenvalues of the 4l x 4l Nambu restriction of Gamma to the region."""
    f = region.flats(state.L)
    g22 = state.gamma22[np.ix_(f, f)]
    g12 = state.gamma12[np.ix_(f, f)]
    g11 = np.eye(f.size, dtype=np.complex128) - g22.T
    g21 = -g12.conj()
    sub = np.block([[g11, g12], [g21, g22]])
    try:
        lam = np.linalg.eigvalsh(0.5 * (sub + sub.conj().T))
    except np.linalg.LinAlgError as exc:
        raise NumericsError(f"restricted eigen-decomposition failed: {exc}") from exc
    return lam


def entanglement_entropy(state: NambuCovariance, region: Region) -> float:
    """Von Neumann entropy of the region from the restricted Nambu spectrum."""
    lam = restricted_spectrum(state, region)
    if lam.min() < -EIG_TOLERANCE or lam.max() > 1.0 + EIG_TOLERANCE:
        raise IntegrityError(
            f"restricted eigenvalue out of range: [{lam.min():.3e}, {lam.max():.3e}]"
        )
    return float(0.5 * binary_entropy(np.clip(lam, 0.0, 1.0)).sum())


def pairing_matrix(state: NambuCovariance) -> np.ndarray:
    """|<c_{i,dn} c_{j,up}>| for all site pairs (i, j)."""
    L = state.L
    dn = np.arange(L, 2 * L)
    up = np.arange(0, L)
    return np.abs(state.gamma12[np.ix_(dn, up)])


def onsite_pairing_max(state: NambuCovariance) -> float:
    """max_j |<c_{j,dn} c_{j,up}>|."""
    return float(np.abs(np.diagonal(pairing_matrix(state))).max())


def nn_pairing(state: NambuCovariance) -> float:
    """Mean over j of |<c_{j,dn} c_{j+1,up}>| with periodic wrap."""
    L = state.L
    vals = np.empty(L)
    for j in range(1, L + 1):
        jp = j % L + 1
        vals[j - 1] = abs(state.gamma12[flatten(j, Spin.DOWN, L),
                                        flatten(jp, Spin.UP, L)])
    return float(vals.mean())


def occupation_profile(state: NambuCovariance) -> np.ndarray:
    """<n_{l,sigma}> per flat mode, clipped to [0, 1]."""
    return np.clip(np.diagonal(state.gamma22).real.copy(), 0.0, 1.0)


# Observable registry used by the trajectory engine; each entry is a pure
# function of (state, region) returning a float or a fixed-shape vector.
OBSERVABLES = {
    "entropy": lambda state, region: entanglement_entropy(state, region),
    "nn_pairing": lambda state, region: nn_pairing(state),
    "onsite_pairing_max": lambda state, region: onsite_pairing_max(state),
    "total_occupation": lambda state, region: float(occupation_profile(state).sum()),
    "occupation": lambda state, region: occupation_profile(state),
}
