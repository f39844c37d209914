"""Spectra attached to a metric graph and location of assembly poles.

Two reference spectra:

* the fully Dirichlet spectrum decouples edge by edge into (pi k / L_e)^2,
  listed with multiplicity in closed form;
* the spectrum with Dirichlet data on the outer vertices and continuity +
  Kirchhoff conditions on the inner ones, computed by a P1 finite element
  discretization of each edge.

The assembled outer matrix is singular on a discrete set of parameters: the
edge poles together with the inner-block Kirchhoff eigenvalues.  pole_scan
locates both kinds inside a window.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .assembly import assemble_full
from .errors import ResolutionTooLow
from .graphs import MetricGraph

DEFAULT_RESOLUTION = 32
POLE_BISECT_TOL = 1e-10
# eigenvalue drift between resolution and resolution/2, relative to lambda_1
RESOLUTION_DRIFT_MAX = 0.01


@dataclass(frozen=True)
class SpectrumList:
    values: tuple[float, ...]
    kind: str
    resolution: float | None = None


def dirichlet_spectrum_full(g: MetricGraph, lambda_max: float) -> SpectrumList:
    """All eigenvalues (pi k / L_e)^2 <= lambda_max, with multiplicity."""
    vals: list[float] = []
    for e in g.edges:
        k = 1
        while True:
            lam = (math.pi * k / e.length) ** 2
            if lam > lambda_max:
                break
            vals.append(lam)
            k += 1
    return SpectrumList(values=tuple(sorted(vals)), kind="dirichlet-full")


def _fem_matrices(g: MetricGraph, resolution: float) -> tuple[np.ndarray, np.ndarray]:
    """P1 stiffness and mass matrices, outer-vertex rows/columns eliminated.

    Each edge gets max(1, ceil(resolution * L)) equal elements; vertex degrees
    of freedom are shared, outer vertices carry homogeneous Dirichlet data.
    """
    n_vert = g.n_vertices
    m = g.n_outer

    # global numbering: vertices 0..n-1, then edge-interior nodes
    n_dof = n_vert
    interior_start = []
    n_elems = []
    for e in g.edges:
        ne = max(1, math.ceil(resolution * e.length))
        n_elems.append(ne)
        interior_start.append(n_dof)
        n_dof += ne - 1

    K = np.zeros((n_dof, n_dof))
    M = np.zeros((n_dof, n_dof))
    for (i, j), e, ne, start in zip(g.edge_indices, g.edges, n_elems, interior_start):
        h = e.length / ne
        nodes = [i] + list(range(start, start + ne - 1)) + [j]
        for a in range(ne):
            p, q = nodes[a], nodes[a + 1]
            K[p, p] += 1.0 / h
            K[q, q] += 1.0 / h
            K[p, q] -= 1.0 / h
            K[q, p] -= 1.0 / h
            M[p, p] += h / 3.0
            M[q, q] += h / 3.0
            M[p, q] += h / 6.0
            M[q, p] += h / 6.0

    keep = np.arange(m, n_dof)
    return K[np.ix_(keep, keep)], M[np.ix_(keep, keep)]


def _fem_eigenvalues(g: MetricGraph, count: int, resolution: float) -> np.ndarray:
    K, M = _fem_matrices(g, resolution)
    if K.shape[0] < count:
        raise ResolutionTooLow(math.inf, math.nan)
    w = scipy.linalg.eigh(K, M, eigvals_only=True)
    return w[:count]


def kirchhoff_spectrum(g: MetricGraph, count: int = 1,
                       resolution: float = DEFAULT_RESOLUTION) -> SpectrumList:
    """First eigenvalues with Dirichlet outer data and Kirchhoff inner conditions.

    A halved-resolution recomputation estimates the discretization error of
    lambda_1 (P1 elements converge at order h^2, so the drift between the two
    meshes is about three times the fine-mesh error); past 1 percent the
    result is refused as under-resolved.
    """
    fine = _fem_eigenvalues(g, count, resolution)
    coarse = _fem_eigenvalues(g, 1, resolution / 2.0)
    estimate = abs(fine[0] - coarse[0]) / 3.0
    if estimate > RESOLUTION_DRIFT_MAX * fine[0]:
        raise ResolutionTooLow(float(estimate), float(fine[0]))
    return SpectrumList(values=tuple(float(v) for v in fine), kind="kirchhoff",
                        resolution=float(resolution))


def lambda_1(g: MetricGraph, resolution: float = DEFAULT_RESOLUTION) -> float:
    """Lowest eigenvalue of the outer-Dirichlet problem.

    Without inner vertices every edge decouples and the closed form
    (pi / L_max)^2 applies; otherwise fall back to the finite elements.
    """
    if not g.inner:
        return (math.pi / max(g.lengths)) ** 2
    return kirchhoff_spectrum(g, count=1, resolution=resolution).values[0]


def _inner_det_sign(g: MetricGraph, lam: float) -> int:
    m = g.n_outer
    C = assemble_full(g, lam).entries[m:, m:]
    sign, _ = np.linalg.slogdet(C)
    return int(sign)


def pole_scan(g: MetricGraph, lo: float, hi: float, samples: int = 2000) -> list[float]:
    """Locate the singular parameters of the outer assembly inside (lo, hi).

    Edge poles come in closed form.  Inner-block singularities are found by
    tracking the sign of det C on a grid between consecutive edge poles and
    bisecting each change down to width 1e-10 * max(1, lam).  Some edge poles
    are removable for the reduced map; they are still reported because the
    assembly itself breaks down there.
    """
    if not hi > lo:
        raise ValueError("empty scan range")

    edge_poles = []
    for p in dirichlet_spectrum_full(g, hi).values:
        if lo < p < hi and not any(abs(p - q) <= 1e-12 * max(1.0, p) for q in edge_poles):
            edge_poles.append(p)

    if g.n_outer == g.n_vertices:
        return edge_poles

    inner_poles: list[float] = []
    breakpoints = [lo] + edge_poles + [hi]
    for a, b in zip(breakpoints[:-1], breakpoints[1:]):
        margin = 1e-7 * max(1.0, abs(a), abs(b))
        aa, bb = a + margin, b - margin
        if bb <= aa:
            continue
        n_grid = max(8, int(samples * (b - a) / (hi - lo)))
        grid = np.linspace(aa, bb, n_grid)
        signs = [_inner_det_sign(g, x) for x in grid]
        for x0, x1, s0, s1 in zip(grid[:-1], grid[1:], signs[:-1], signs[1:]):
            if s0 == 0 or s0 * s1 >= 0:
                continue
            left, right, s_left = x0, x1, s0
            while right - left > POLE_BISECT_TOL * max(1.0, left):
                mid = 0.5 * (left + right)
                s_mid = _inner_det_sign(g, mid)
                if s_mid == 0:
                    left = right = mid
                    break
                if s_mid == s_left:
                    left = mid
                else:
                    right = mid
            inner_poles.append(0.5 * (left + right))

    return sorted(edge_poles + inner_poles)
