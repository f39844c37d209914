"""Positivity classification of the semigroup generated by -M.

For a real symmetric matrix M the semigroup e^{-tM} is

* positive for all t > 0 iff -M is Metzler (non-negative off-diagonal), and
  then strongly positive iff -M is additionally irreducible;
* eventually strongly positive iff the spectral projection onto the largest
  eigenvalue of -M is entrywise strictly positive;
* not eventually positive iff that projection has a strictly negative entry.

Two independent routes are kept side by side: the algebraic classifier above,
and a direct matrix-exponential oracle that samples e^{-tM} on a geometric
time grid.  They are compared in the test suite, never merged.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import scipy.linalg
import scipy.sparse
import scipy.sparse.csgraph

from .assembly import DtnMatrix


@dataclass(frozen=True)
class ClassifierConfig:
    # off-diagonal sign decisions use sign_tolerance * max|M| as the zero band
    sign_tolerance: float = 1e-11
    # entries between tol and marginal_factor * tol below zero are ambiguous
    marginal_factor: float = 10.0
    # eigenvalues within projection_tol * max(1, |s|) of the top one share its eigenspace
    projection_tol: float = 1e-9
    power_k_max: int = 64
    oracle_times: int = 24
    oracle_t_lo: float = 1e-3
    oracle_t_hi: float = 1e4


DEFAULT_CONFIG = ClassifierConfig()

# printable tags, also used in CSV/JSON output
TAG_STRONG = "strong"
TAG_POSITIVE = "positive"
TAG_EVENTUAL = "eventual"
TAG_NONE = "none"
TAG_MARGINAL = "marginal"


@dataclass(frozen=True)
class SemigroupClass:
    tag: str
    evidence: dict = field(default_factory=dict)


@dataclass(frozen=True)
class MetzlerReport:
    satisfied: bool
    marginal: bool
    margin: float      # most negative off-diagonal entry of -M (0 if none)
    tolerance: float


@dataclass(frozen=True)
class OracleReport:
    klass: str                      # "strict_all" | "strict_eventually" | "never"
    times: tuple[float, ...]
    strict: tuple[bool, ...]
    ambiguous: bool


@dataclass(frozen=True)
class GroupProbe:
    group_positive: bool
    max_offdiagonal: float
    times: tuple[float, ...]


def _as_array(M) -> np.ndarray:
    if isinstance(M, DtnMatrix):
        return M.entries
    return np.asarray(M, dtype=float)


def _offdiag(A: np.ndarray) -> np.ndarray:
    mask = ~np.eye(A.shape[0], dtype=bool)
    return A[mask]


def is_metzler(negM, cfg: ClassifierConfig = DEFAULT_CONFIG) -> MetzlerReport:
    """Check the generator for non-negative off-diagonal entries.

    Entries within sign_tolerance * max|A| of zero count as zeros; entries
    below that but within marginal_factor of the band are flagged marginal
    rather than decided.
    """
    A = _as_array(negM)
    n = A.shape[0]
    if n <= 1:
        return MetzlerReport(True, False, 0.0, 0.0)
    tol = cfg.sign_tolerance * float(np.abs(A).max())
    margin = float(_offdiag(A).min())
    satisfied = margin >= -tol
    marginal = (not satisfied) and margin > -cfg.marginal_factor * tol
    return MetzlerReport(satisfied, marginal, margin, tol)


def is_irreducible(M, tol: float | None = None) -> bool:
    """Strong connectivity of the off-diagonal support graph."""
    A = _as_array(M)
    n = A.shape[0]
    if n <= 1:
        return True
    if tol is None:
        tol = DEFAULT_CONFIG.sign_tolerance * float(np.abs(A).max())
    support = (np.abs(A) > tol) & ~np.eye(n, dtype=bool)
    ncomp, _ = scipy.sparse.csgraph.connected_components(
        scipy.sparse.csr_matrix(support), directed=True, connection="strong")
    return ncomp == 1


def _power_check(A: np.ndarray, cfg: ClassifierConfig) -> tuple[bool, int]:
    """Strict positivity of (mu I + A)^k for some k <= power_k_max, by squaring."""
    n = A.shape[0]
    if n == 1:
        return True, 1
    w = np.linalg.eigvalsh(0.5 * (A + A.T))
    mu = 1.0 + float(np.abs(w).max())
    P = mu * np.eye(n) + A
    k = 1
    while k <= cfg.power_k_max:
        if P.min() > 0.0:
            return True, k
        P = P @ P
        P /= np.abs(P).max()  # rescale to dodge overflow, positivity unaffected
        k *= 2
    return False, k


def classify(M, cfg: ClassifierConfig = DEFAULT_CONFIG) -> SemigroupClass:
    """Classify the positivity behavior of e^{-tM} for symmetric M.

    Tags: "strong" (positivity improving for every t > 0), "positive"
    (positive, not strongly), "eventual" (eventually strongly positive but not
    positive), "none" (not eventually positive), "marginal" (a sign decision
    fell inside the numerical ambiguity band).
    """
    Mat = _as_array(M)
    A = -Mat
    metz = is_metzler(A, cfg)
    evidence: dict = {
        "metzler_margin": metz.margin,
        "metzler_tolerance": metz.tolerance,
    }

    if metz.satisfied:
        irr = is_irreducible(A, tol=metz.tolerance if metz.tolerance > 0 else None)
        evidence["irreducible"] = irr
        if irr:
            ok, k = _power_check(A, cfg)
            evidence["power_positive"] = ok
            evidence["power_k"] = k
        return SemigroupClass(TAG_STRONG if irr else TAG_POSITIVE, evidence)

    if metz.marginal:
        return SemigroupClass(TAG_MARGINAL, evidence)

    # not Metzler: decide by the spectral projection onto the top eigenvalue of A
    w, V = np.linalg.eigh(0.5 * (A + A.T))
    s = float(w[-1])
    thresh = cfg.projection_tol * max(1.0, abs(s))
    sel = w >= s - thresh
    P = V[:, sel] @ V[:, sel].T
    tol_p = cfg.sign_tolerance * float(np.abs(P).max())
    min_p = float(P.min())
    evidence.update({
        "spectral_bound": s,
        "projection_rank": int(sel.sum()),
        "min_projection": min_p,
        "projection_tolerance": tol_p,
    })
    if min_p > tol_p:
        return SemigroupClass(TAG_EVENTUAL, evidence)
    if min_p < -tol_p:
        return SemigroupClass(TAG_NONE, evidence)
    return SemigroupClass(TAG_MARGINAL, evidence)


def _time_grid(Mat: np.ndarray, cfg: ClassifierConfig) -> np.ndarray:
    scale = float(np.abs(np.linalg.eigvalsh(0.5 * (Mat + Mat.T))).max())
    if scale == 0.0:
        scale = 1.0
    return np.geomspace(cfg.oracle_t_lo / scale, cfg.oracle_t_hi / scale,
                        cfg.oracle_times)


def expm_oracle(M, cfg: ClassifierConfig = DEFAULT_CONFIG) -> OracleReport:
    """Sample e^{-tM} on a geometric time grid and read off strict positivity.

    The generator is shifted by its top eigenvalue before exponentiation
    (scaling by e^{-ts} > 0, which cannot change any sign) so large times do
    not overflow.  Verdicts: strict at every sample, strict from some sample
    on, or never strict; a non-monotone pattern is reported as ambiguous.
    """
    Mat = _as_array(M)
    n = Mat.shape[0]
    A = -0.5 * (Mat + Mat.T)
    w = np.linalg.eigvalsh(A)
    A_shift = A - float(w[-1]) * np.eye(n)

    times = _time_grid(Mat, cfg)
    strict = []
    for t in times:
        E = scipy.linalg.expm(t * A_shift)
        strict.append(bool(E.min() > 1e-13 * max(E.max(), 1e-300)))

    if all(strict):
        klass, ambiguous = "strict_all", False
    elif not any(strict):
        klass, ambiguous = "never", False
    else:
        first = strict.index(True)
        suffix = all(strict[first:])
        klass = "strict_eventually" if suffix else "never"
        ambiguous = not suffix
    return OracleReport(klass=klass, times=tuple(float(t) for t in times),
                        strict=tuple(strict), ambiguous=ambiguous)


def group_positivity_probe(M, cfg: ClassifierConfig = DEFAULT_CONFIG) -> GroupProbe:
    """Check entrywise positivity of e^{-tM} for both time directions.

    Membership in a positive group forces a diagonal generator, so the probe
    reports the largest off-diagonal magnitude alongside the verdict.
    """
    Mat = _as_array(M)
    n = Mat.shape[0]
    A = -0.5 * (Mat + Mat.T)
    w = np.linalg.eigvalsh(A)
    times = _time_grid(Mat, cfg)
    ok = True
    for t in times:
        for sign in (1.0, -1.0):
            # shift each direction by its own top eigenvalue: bounded entries,
            # signs scaled by a positive factor only
            top = sign * (w[-1] if sign > 0 else w[0])
            G = sign * A - top * np.eye(n)
            E = scipy.linalg.expm(t * G)
            if E.min() < -1e-12 * np.abs(E).max():
                ok = False
                break
        if not ok:
            break
    off = float(np.abs(_offdiag(A)).max()) if n > 1 else 0.0
    return GroupProbe(group_positive=ok, max_offdiagonal=off,
                      times=tuple(float(t) for t in times))
