"""Small dense lattice routines: LLL reduction, Babai rounding, box enumeration.

Dimensions here are tiny (one row per graph edge), so the textbook O(n^3)
variants with full Gram-Schmidt recomputation are perfectly adequate.
"""

from __future__ import annotations

from itertools import product

import numpy as np


def gram_schmidt(B: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Orthogonalization of the rows of B; returns (B*, mu) with B = (mu + I) B*."""
    n = B.shape[0]
    Bs = np.zeros_like(B, dtype=float)
    mu = np.zeros((n, n))
    for i in range(n):
        v = B[i].astype(float).copy()
        for j in range(i):
            denom = Bs[j] @ Bs[j]
            mu[i, j] = (B[i] @ Bs[j]) / denom
            v -= mu[i, j] * Bs[j]
        Bs[i] = v
    return Bs, mu


def lll_reduce(B: np.ndarray, delta: float = 0.99) -> np.ndarray:
    """Lenstra-Lenstra-Lovasz reduction of the row basis B."""
    B = np.array(B, dtype=float)
    n = B.shape[0]
    Bs, mu = gram_schmidt(B)
    k = 1
    while k < n:
        for j in range(k - 1, -1, -1):
            q = round(mu[k, j])
            if q != 0:
                B[k] -= q * B[j]
                Bs, mu = gram_schmidt(B)
        if Bs[k] @ Bs[k] >= (delta - mu[k, k - 1] ** 2) * (Bs[k - 1] @ Bs[k - 1]):
            k += 1
        else:
            B[[k - 1, k]] = B[[k, k - 1]]
            Bs, mu = gram_schmidt(B)
            k = max(k - 1, 1)
    return B


def babai_nearest(B: np.ndarray, target: np.ndarray) -> np.ndarray:
    """Nearest-plane rounding of target onto the lattice spanned by the rows of B.

    Works best on an LLL-reduced basis; returns the lattice vector.
    """
    Bs, _ = gram_schmidt(B)
    w = np.asarray(target, dtype=float).copy()
    for i in range(B.shape[0] - 1, -1, -1):
        c = round((w @ Bs[i]) / (Bs[i] @ Bs[i]))
        w -= c * B[i]
    return np.asarray(target, dtype=float) - w


def enumerate_near(B: np.ndarray, target: np.ndarray, radius: int):
    """Yield lattice vectors v0 + c B for every integer box offset |c_i| <= radius.

    v0 is the Babai vector; the box covers (2 radius + 1)^n candidates, so keep
    radius small.
    """
    v0 = babai_nearest(B, target)
    n = B.shape[0]
    for offsets in product(range(-radius, radius + 1), repeat=n):
        yield v0 + np.asarray(offsets, dtype=float) @ B
