"""Numba kernels for the trajectory hot loop (single-threaded, in place)."""

import numpy as np
from numba import njit


@njit(cache=True)
def apply_projection(G, m, target):
    """Projective collapse of sector mode m to diagonal value `target` (0 or 1).

    G is the 2L x 2L sector covariance <A A^dag>.  target=1 divides by
    G[m,m], target=0 by 1-G[m,m]; the caller guarantees the chosen branch
    is the one with non-vanishing probability.  Ends with exact pinning
    of row/column m.
    """
    n2 = G.shape[0]
    c = np.empty(n2, dtype=np.complex128)
    if target == 1:
        denom = G[m, m].real
        for i in range(n2):
            c[i] = G[i, m]
        for i in range(n2):
            ci = c[i] / denom
            for j in range(n2):
                G[i, j] -= ci * np.conj(c[j])
    else:
        denom = 1.0 - G[m, m].real
        for i in range(n2):
            c[i] = -G[i, m]
        c[m] += 1.0
        for i in range(n2):
            ci = c[i] / denom
            for j in range(n2):
                G[i, j] += ci * np.conj(c[j])
    for i in range(n2):
        G[m, i] = 0.0
        G[i, m] = 0.0
    G[m, m] = target


@njit(cache=True)
def pin_mode(G, m, target):
    """Forced branch: zero couplings of mode m, set its diagonal exactly."""
    n2 = G.shape[0]
    for i in range(n2):
        G[m, i] = 0.0
        G[i, m] = 0.0
    G[m, m] = target


@njit(cache=True)
def hermitize(G):
    """G <- (G + G^dag)/2 in place (drift repair after measurements)."""
    n2 = G.shape[0]
    for i in range(n2):
        G[i, i] = complex(G[i, i].real, 0.0)
        for j in range(i + 1, n2):
            v = 0.5 * (G[i, j] + np.conj(G[j, i]))
            G[i, j] = v
            G[j, i] = np.conj(v)


@njit(cache=True)
def max_offband_defect(G):
    """Max |G - G^dag| entry; cheap symmetry diagnostic for the sector state."""
    n2 = G.shape[0]
    best = 0.0
    for i in range(n2):
        if abs(G[i, i].imag) > best:
            best = abs(G[i, i].imag)
        for j in range(i + 1, n2):
            d = abs(G[i, j] - np.conj(G[j, i]))
            if d > best:
                best = d
    return best
