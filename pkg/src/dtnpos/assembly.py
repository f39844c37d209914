"""Assembly of the Dirichlet-to-Neumann matrix of a metric graph.

For spectral parameter lam and edge length L the per-edge coefficients are

    alpha = sqrt(lam) * cos(sqrt(lam) L) / sin(sqrt(lam) L)
    beta  = sqrt(lam) / sin(sqrt(lam) L)

with the hyperbolic continuation for lam < 0 and the common limit 1/L at
lam = 0.  The full matrix carries -beta on off-diagonal edge positions and the
sum of incident alphas on the diagonal; eliminating the inner vertices by a
Schur complement yields the matrix on the outer vertices.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .errors import AtPole, InnerBlockSingular, PatternViolation, PoleCluster
from .graphs import MetricGraph, adjacency_pattern, reduced_graph

# relative tolerance for declaring sin(sqrt(lam) L) a pole hit
POLE_TOL = 1e-12
# condition-number ceiling for the inner block of the Schur reduction
INNER_COND_MAX = 1e12
# series window: |lam| L^2 below this uses the Taylor forms (rel. error < 1e-30)
SERIES_WINDOW = 1e-8
# pattern zeros in the reduced matrix may carry elimination dust up to this
PATTERN_TOL = 1e-12

# smallest positive subnormal float; beta is never exactly zero for finite lam
TINY = 5e-324


@dataclass(frozen=True)
class EdgeCoefficients:
    alpha: float
    beta: float
    at_pole: bool = False


@dataclass(frozen=True, eq=False)
class DtnMatrix:
    lam: float
    dim: int
    entries: np.ndarray
    provenance: str  # "direct" | "schur(m,k)"

    def __array__(self, dtype=None, copy=None):
        if copy:
            return np.array(self.entries, dtype=dtype)
        return np.asarray(self.entries, dtype=dtype)


def edge_alpha_beta(lam: float, length: float, raise_at_pole: bool = False) -> EdgeCoefficients:
    """Coefficient pair (alpha, beta) for one edge.

    At a Dirichlet pole of the edge (sin(sqrt(lam) L) = 0, lam > 0) the result
    carries at_pole=True with infinite entries, or raises AtPole on request.
    """
    L = float(length)
    w = lam * L * L
    if abs(w) < SERIES_WINDOW:
        # alpha = (1 - w/3 - w^2/45 - 2 w^3/945 + ...) / L
        # beta  = (1 + w/6 + 7 w^2/360 + 31 w^3/15120 + ...) / L
        alpha = (1.0 - w / 3.0 - w * w / 45.0 - 2.0 * w ** 3 / 945.0) / L
        beta = (1.0 + w / 6.0 + 7.0 * w * w / 360.0 + 31.0 * w ** 3 / 15120.0) / L
        return EdgeCoefficients(alpha, beta)

    if lam > 0:
        r = math.sqrt(lam)
        x = r * L
        s = math.sin(x)
        if abs(s) < POLE_TOL * max(1.0, x):
            if raise_at_pole:
                raise AtPole(lam, detail=f"sin({x!r}) = {s!r} below pole tolerance")
            return EdgeCoefficients(math.inf, math.inf, at_pole=True)
        alpha = r * math.cos(x) / s
        beta = r / s
    else:
        s = math.sqrt(-lam)
        x = s * L
        if x > 350.0:
            # sinh/cosh overflow past ~710; asymptotically coth -> 1, 1/sinh -> 2 e^{-x}
            alpha = s / math.tanh(x)
            beta = 2.0 * s * math.exp(-x)
        else:
            sh = math.sinh(x)
            alpha = s * math.cosh(x) / sh
            beta = s / sh
        if beta == 0.0:
            beta = TINY

    return EdgeCoefficients(alpha, beta)


def assemble_full(g: MetricGraph, lam: float) -> DtnMatrix:
    """Dirichlet-to-Neumann matrix with every vertex treated as a data vertex.

    Entries: D[k, j] = -beta_kj on edges, 0 otherwise; D[k, k] = sum of alpha
    over edges at k.  Symmetric by construction (both off-diagonal positions
    are written from the same float).
    """
    n = g.n_vertices
    D = np.zeros((n, n))
    diag = np.zeros(n)
    for e, (i, j) in zip(g.edges, g.edge_indices):
        try:
            coeff = edge_alpha_beta(lam, e.length, raise_at_pole=True)
        except AtPole:
            raise AtPole(lam, edge=(e.u, e.v)) from None
        D[i, j] = -coeff.beta
        D[j, i] = -coeff.beta
        diag[i] += coeff.alpha
        diag[j] += coeff.alpha
    D[np.diag_indices(n)] = diag
    return DtnMatrix(lam=lam, dim=n, entries=D, provenance="direct")


def schur_reduce(full: DtnMatrix, m: int) -> DtnMatrix:
    """Eliminate the trailing dim-m coordinates by the Schur complement.

    With the block split D = [[A, B], [B^T, C]] (A of size m) the result is
    A - B C^{-1} B^T, symmetrized.  m = dim returns the input unchanged.
    """
    n = full.dim
    if not 0 < m <= n:
        raise ValueError(f"block size m={m} outside 1..{n}")
    if m == n:
        return full

    D = full.entries
    A = D[:m, :m]
    B = D[:m, m:]
    C = D[m:, m:]

    # the ratio test alone cannot catch a singular 1x1 block, so the smallest
    # inner eigenvalue is also measured against the scale of the full matrix
    ev = np.abs(np.linalg.eigvalsh(C))
    scale = float(np.abs(D).max())
    if ev.min() <= scale / INNER_COND_MAX or ev.max() / ev.min() > INNER_COND_MAX:
        cond = math.inf if ev.min() == 0.0 else float(max(ev.max(), scale) / ev.min())
        raise InnerBlockSingular(full.lam, cond)

    X = scipy.linalg.solve(C, B.T, assume_a="sym")
    S = A - B @ X
    S = 0.5 * (S + S.T)
    return DtnMatrix(lam=full.lam, dim=m, entries=S, provenance=f"schur({m},{n - m})")


def assemble_outer(g: MetricGraph, lam: float) -> DtnMatrix:
    """Dirichlet-to-Neumann matrix on the outer vertices.

    Assembles the full matrix and eliminates the inner block, then checks the
    support: off-diagonal entries away from reduced-graph edges must vanish up
    to elimination dust (PatternViolation otherwise).
    """
    out = schur_reduce(assemble_full(g, lam), g.n_outer)
    pattern = adjacency_pattern(reduced_graph(g))
    S = out.entries
    bound = PATTERN_TOL * np.abs(S).max()
    for k in range(out.dim):
        for j in range(out.dim):
            if k != j and not pattern.permits(k, j) and abs(S[k, j]) > bound:
                raise PatternViolation((k, j), float(S[k, j]), float(bound))
    return out


def _beta_residue_levels(lam_star: float, length: float, h0: float, levels: int) -> np.ndarray:
    """Symmetrized samples of h * beta(lam_star + h): even error series in h."""
    out = np.empty(levels)
    h = h0
    for j in range(levels):
        fp = h * edge_alpha_beta(lam_star + h, length).beta
        fm = -h * edge_alpha_beta(lam_star - h, length).beta
        out[j] = 0.5 * (fp + fm)
        h *= 0.5
    return out


def pole_residue_probe(g: MetricGraph, k: int, e: int | tuple) -> float:
    """Residue of lam -> beta_e(lam) at the k-th edge pole lam* = (pi k / L_e)^2.

    Richardson extrapolation of h * beta(lam* + h) sampled symmetrically on a
    halving schedule; the exact value is 2 (-1)^k (pi k)^2 / L^3.  Raises
    PoleCluster when a pole of another edge falls inside the sampling window.
    """
    if k < 1:
        raise ValueError("pole index k must be a positive integer")
    if isinstance(e, tuple):
        pair = frozenset(e)
        idx = next((i for i, ed in enumerate(g.edges) if ed.pair == pair), None)
        if idx is None:
            raise ValueError(f"no edge {e} in graph")
    else:
        idx = int(e)
    L = g.edges[idx].length
    lam_star = (math.pi * k / L) ** 2

    h0 = 1e-2 * max(1.0, lam_star)
    # shrink the window clear of the two neighboring poles of the same edge
    for kk in (k - 1, k + 1):
        if kk >= 1:
            h0 = min(h0, 0.45 * abs((math.pi * kk / L) ** 2 - lam_star))

    for i, other in enumerate(g.edges):
        k_near = round(math.sqrt(lam_star) * other.length / math.pi)
        for kk in (k_near - 1, k_near, k_near + 1):
            if kk < 1 or (i == idx and kk == k):
                continue
            lam_other = (math.pi * kk / other.length) ** 2
            if abs(lam_other - lam_star) < h0:
                raise PoleCluster(lam_star, lam_other)

    levels = 8
    tableau = _beta_residue_levels(lam_star, L, h0, levels)
    # Neville in h^2: halving h scales the leading error by 1/4
    for col in range(1, levels):
        factor = 4.0 ** col
        tableau = (factor * tableau[1:] - tableau[:-1]) / (factor - 1.0)
    return float(tableau[0])
