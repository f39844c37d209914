"""Searches over the spectral parameter lam driven by Kronecker approximation.

A target assigns to each edge a number gamma_e (or +-inf); level l admits any
lam with

    |sin(sqrt(lam) L_e) - gamma_{e,l} / l| < 1 / l^2   and   cos(sqrt(lam) L_e) > 0

for every edge, where gamma_{e,l} is gamma_e itself or +-sqrt(l) for the
infinite tokens.  Along such a sequence the matrix D_lam / (l sqrt(lam))
converges to an explicit limit Q, which makes every positivity class of the
limit reachable at finite parameters.

Admissible lam are located by scanning an integer multiplier on an anchor
edge; when the expected scan length is too large the simultaneous phase
constraints are solved as a closest-vector problem on a small lattice instead
(LLL + Babai + box enumeration).  Either way every candidate that gets
evaluated is charged against the caller's budget, and found windows are always
re-verified by direct evaluation in double precision.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator, Sequence

import numpy as np

from .assembly import assemble_full, assemble_outer
from .errors import (
    AtPole,
    BudgetExhausted,
    IndependenceNotAsserted,
    InnerBlockSingular,
    MuOutOfRange,
    NoCycle,
    NotCommensurable,
)
from .graphs import MetricGraph, ReducedEdge, reduced_graph
from .lattice import enumerate_near, lll_reduce
from .positivity import (
    DEFAULT_CONFIG,
    TAG_EVENTUAL,
    TAG_NONE,
    TAG_STRONG,
    ClassifierConfig,
    classify,
)
from .spectra import lambda_1

# expected-candidate threshold separating plain scanning from the lattice solver
SCAN_CAP = 200_000
_SCAN_CHUNK = 2048
_LATTICE_RADIUS = 2
_LATTICE_ATTEMPTS_MAX = 10_000
DEFAULT_LEVEL_CAP = 64


@dataclass(frozen=True)
class TargetSpec:
    """Per-edge targets gamma_e: finite nonzero floats or +-inf tokens."""

    gammas: tuple[float, ...]

    def __post_init__(self):
        for gamma in self.gammas:
            if gamma == 0.0 or math.isnan(gamma):
                raise ValueError("edge targets must be nonzero (use +-inf to switch an edge off)")

    @staticmethod
    def uniform(value: float, n_edges: int) -> "TargetSpec":
        return TargetSpec(gammas=(float(value),) * n_edges)

    def level_targets(self, level: int) -> tuple[float, ...]:
        """sin targets gamma_{e,l} / l at the given level."""
        out = []
        for gamma in self.gammas:
            if math.isinf(gamma):
                out.append(math.copysign(1.0 / math.sqrt(level), gamma))
            else:
                out.append(gamma / level)
        return tuple(out)

    def limit_offdiag(self, e: int) -> float:
        """Limit off-diagonal weight 1/gamma_e (0 for the infinite tokens)."""
        gamma = self.gammas[e]
        return 0.0 if math.isinf(gamma) else 1.0 / gamma


def parse_gamma(token) -> float:
    if isinstance(token, str):
        t = token.strip().lower()
        if t in ("inf", "+inf", "infinity", "+infinity"):
            return math.inf
        if t in ("-inf", "-infinity"):
            return -math.inf
        return float(token)
    return float(token)


@dataclass(frozen=True)
class KroneckerSequence:
    lambdas: tuple[float, ...]
    residuals: tuple[float, ...]
    levels: tuple[int, ...]
    budget_used: int


@dataclass(frozen=True)
class SearchResult:
    lam: float
    verdict: str
    level: int
    residual: float
    budget_used: int
    gammas: tuple[float, ...]
    evidence: dict = field(default_factory=dict)

    def to_record(self) -> dict:
        return {
            "lambda": self.lam,
            "verdict": self.verdict,
            "level": self.level,
            "residuals": list(self.evidence.get("residual_trail", [self.residual])),
            "budget_used": self.budget_used,
            "gammas": [repr(g) if math.isinf(g) else g for g in self.gammas],
        }


class BudgetMeter:
    """Counts evaluated candidates; raises once the allowance is spent."""

    def __init__(self, budget: int):
        self.budget = int(budget)
        self.spent = 0
        self.best_residual = math.inf
        self.level = 0

    def charge(self, n: int = 1) -> None:
        self.spent += n
        if self.spent > self.budget:
            raise BudgetExhausted(self.budget, self.best_residual, self.level)


def rationally_independent(lengths: Sequence[float], max_den: int = 10 ** 6,
                           rel_tol: float = 3e-14) -> bool:
    """Heuristic probe for pairwise rational length ratios.

    Quadratic surd ratios stay at least ~1/(c q^2) away from every fraction
    with denominator q, so at q <= 1e6 the 3e-14 band cannot produce a false
    alarm for them, while genuinely rational ratios land within a few ulps.
    """
    n = len(lengths)
    for i in range(n):
        for j in range(i + 1, n):
            r = lengths[i] / lengths[j]
            f = Fraction(r).limit_denominator(max_den)
            if abs(r - float(f)) <= rel_tol * max(1.0, abs(r)):
                return False
    return True


def _require_independent(lengths: Sequence[float], assert_independent: bool) -> None:
    if assert_independent or len(lengths) < 2:
        return
    if not rationally_independent(lengths):
        raise IndependenceNotAsserted()


def _phase_window(v: float, w: float) -> tuple[float, float] | None:
    """Phases theta with |sin theta - v| < w and cos theta > 0, as an interval."""
    if v - w >= 1.0 or v + w <= -1.0:
        return None
    lo = math.asin(max(-1.0, v - w))
    hi = math.asin(min(1.0, v + w))
    if not lo < hi:
        return None
    return lo, hi


def _window_residuals(lam: np.ndarray, lengths: Sequence[float],
                      targets: Sequence[float]) -> tuple[np.ndarray, np.ndarray]:
    """Residual max_e |sin - target_e| and the cos > 0 admissibility mask."""
    mu = np.sqrt(lam)
    res = np.zeros_like(lam)
    ok = np.ones(lam.shape, dtype=bool)
    for L, v in zip(lengths, targets):
        x = mu * L
        res = np.maximum(res, np.abs(np.sin(x) - v))
        ok &= np.cos(x) > 0.0
    return res, ok


def _solve_level(lengths: Sequence[float], targets: Sequence[float], w: float,
                 lam_min: float, meter: BudgetMeter) -> tuple[float, float]:
    """Smallest-found admissible lam > lam_min for one level's windows.

    The anchor edge phase is pinned to its window center; the remaining edges
    impose fractional conditions on the anchor multiplier m.  Small expected
    counts are scanned directly, large ones go through the lattice solver.
    Every evaluated candidate costs one budget unit.
    """
    windows = [_phase_window(v, w) for v in targets]
    assert all(win is not None for win in windows)
    centers = [0.5 * (lo + hi) for lo, hi in windows]
    # window half-widths in turns: fraction of the m-axis period per edge
    deltas = [(hi - lo) / (4.0 * math.pi) for lo, hi in windows]

    anchor = max(range(len(lengths)), key=lambda e: lengths[e])
    La = lengths[anchor]
    theta_c = centers[anchor]
    others = [e for e in range(len(lengths)) if e != anchor]

    mu_min = math.sqrt(max(lam_min, 0.0))
    m_min = max(1, math.floor((mu_min * La - theta_c) / (2.0 * math.pi)) + 1)

    density = 1.0
    for e in others:
        density *= 2.0 * deltas[e]
    expected = 1.0 / density

    def verify(ms: np.ndarray) -> tuple[float, float] | None:
        lam = ((theta_c + 2.0 * math.pi * ms) / La) ** 2
        res, ok = _window_residuals(lam, lengths, targets)
        ok &= res < w
        if ok.any():
            i = int(np.argmax(ok))
            meter.charge(i + 1)
            meter.best_residual = min(meter.best_residual, float(res[i]))
            return float(lam[i]), float(res[i])
        meter.charge(len(ms))
        meter.best_residual = min(meter.best_residual, float(res.min()))
        return None

    if expected <= SCAN_CAP:
        m = m_min
        while True:
            take = min(_SCAN_CHUNK, max(1, meter.budget - meter.spent))
            hit = verify(np.arange(m, m + take, dtype=float))
            if hit is not None:
                return hit
            m += take

    # lattice route: solve frac(m' rho_e - psi_e) in (-delta_e, delta_e) with
    # m' = m - m_min, one CVP target per diameter-sized slab of the m'-axis
    d = len(others)
    rho = [lengths[e] / La for e in others]
    psi = []
    for e, r_e in zip(others, rho):
        p = (centers[e] - (theta_c + 2.0 * math.pi * m_min) * r_e) / (2.0 * math.pi)
        psi.append(p - math.floor(p))
    weights = [1.0 / deltas[e] for e in others]

    c0 = 1.0 / expected
    B = np.zeros((d + 1, d + 1))
    B[0, 0] = c0
    for i in range(d):
        B[0, 1 + i] = weights[i] * rho[i]
        B[1 + i, 1 + i] = weights[i]
    B_red = lll_reduce(B)

    seen: set[int] = set()
    for attempt in range(_LATTICE_ATTEMPTS_MAX):
        m_target = (attempt + 0.5) * expected
        t = np.empty(d + 1)
        t[0] = c0 * m_target
        for i in range(d):
            t[1 + i] = weights[i] * psi[i]
        cands = set()
        for v in enumerate_near(B_red, t, _LATTICE_RADIUS):
            m_prime = round(v[0] / c0)
            if m_prime >= 0 and m_prime not in seen:
                cands.add(m_prime)
        seen.update(cands)
        for m_prime in sorted(cands):
            hit = verify(np.array([m_min + m_prime], dtype=float))
            if hit is not None:
                return hit
    raise RuntimeError("lattice enumeration failed to locate an admissible window")


def _first_feasible_level(spec: TargetSpec, w_of=lambda l: 1.0 / l ** 2) -> int:
    level = 1
    while level < 10 ** 6:
        if all(_phase_window(v, w_of(level)) is not None
               for v in spec.level_targets(level)):
            return level
        level += 1
    raise ValueError("no feasible level for the given targets")


def _sign_safe(targets: Sequence[float], w: float) -> bool:
    """True when no window straddles zero, so every sin keeps a definite sign."""
    return all(v - w >= 0.0 or v + w <= 0.0 for v in targets)


def kronecker_sequence(lengths, spec: TargetSpec, count: int, budget: int,
                       assert_independent: bool = False) -> KroneckerSequence:
    """Admissible lam_1 < lam_2 < ... for `count` consecutive feasible levels."""
    if isinstance(lengths, MetricGraph):
        lengths = lengths.lengths
    lengths = [float(L) for L in lengths]
    if len(spec.gammas) != len(lengths):
        raise ValueError("one gamma per edge required")
    _require_independent(lengths, assert_independent)

    meter = BudgetMeter(budget)
    lambdas, residuals, levels = [], [], []
    level = _first_feasible_level(spec)
    lam_prev = 0.0
    for _ in range(count):
        meter.level = level
        lam, res = _solve_level(lengths, spec.level_targets(level),
                                1.0 / level ** 2, lam_prev, meter)
        lambdas.append(lam)
        residuals.append(res)
        levels.append(level)
        lam_prev = lam
        level += 1
    return KroneckerSequence(tuple(lambdas), tuple(residuals), tuple(levels),
                             budget_used=meter.spent)


def limit_matrix_Q(g: MetricGraph, spec: TargetSpec) -> np.ndarray:
    """Limit of D_lam / (l sqrt(lam)) along the target's admissible sequence.

    Off-diagonal entries -1/gamma_e on edges (zero for infinite targets), and
    diagonal entries summing the incident 1/gamma_e so that every row adds to
    exactly zero in floating point.
    """
    n = g.n_vertices
    Q = np.zeros((n, n))
    for e, (i, j) in enumerate(g.edge_indices):
        x = spec.limit_offdiag(e)
        Q[i, j] -= x
        Q[j, i] -= x
    for k in range(n):
        Q[k, k] = 0.0
        Q[k, k] = -Q[k].sum()
    return Q


def limit_schur(g: MetricGraph, spec: TargetSpec) -> np.ndarray:
    """Limit matrix reduced to the outer vertices (Schur complement of Q)."""
    Q = limit_matrix_Q(g, spec)
    m = g.n_outer
    if m == g.n_vertices:
        return Q
    A = Q[:m, :m]
    B = Q[:m, m:]
    C = Q[m:, m:]
    X = np.linalg.solve(C, B.T)
    S = A - B @ X
    return 0.5 * (S + S.T)


@dataclass(frozen=True)
class LimitVerification:
    errors: tuple[float, ...]
    initial_error: float
    final_error: float
    decreased: bool


def verify_limit(g: MetricGraph, spec: TargetSpec,
                 seq: KroneckerSequence) -> LimitVerification:
    """Max-norm distance of D_lam / (l sqrt(lam)) from Q along the sequence."""
    Q = limit_matrix_Q(g, spec)
    errors = []
    for level, lam in zip(seq.levels, seq.lambdas):
        D = assemble_full(g, lam).entries
        errors.append(float(np.abs(D / (level * math.sqrt(lam)) - Q).max()))
    return LimitVerification(errors=tuple(errors), initial_error=errors[0],
                             final_error=errors[-1],
                             decreased=errors[-1] < errors[0])


def _classified_stream(g: MetricGraph, spec: TargetSpec, meter: BudgetMeter,
                       lam_start: float, level_cap: int,
                       cfg: ClassifierConfig) -> Iterator[tuple[int, float, float, str, dict]]:
    """Admissible lam per level with its classification; skips sign-unsafe levels."""
    lengths = list(g.lengths)
    lam_prev = max(lam_start, 0.0)
    level = _first_feasible_level(spec)
    top = level + level_cap
    while level < top:
        targets = spec.level_targets(level)
        w = 1.0 / level ** 2
        if not _sign_safe(targets, w):
            level += 1
            continue
        meter.level = level
        lam, res = _solve_level(lengths, targets, w, lam_prev, meter)
        lam_prev = lam
        level += 1
        try:
            M = assemble_outer(g, lam)
        except (AtPole, InnerBlockSingular):
            continue
        verdict = classify(M, cfg)
        yield level - 1, lam, res, verdict.tag, verdict.evidence


def _hunt(g: MetricGraph, spec: TargetSpec, meter: BudgetMeter, lam_start: float,
          wanted: str, level_cap: int, cfg: ClassifierConfig) -> SearchResult | None:
    trail = []
    for level, lam, res, tag, evidence in _classified_stream(
            g, spec, meter, lam_start, level_cap, cfg):
        trail.append(res)
        if tag == wanted:
            evidence = dict(evidence)
            evidence["residual_trail"] = trail
            return SearchResult(lam=lam, verdict=tag, level=level, residual=res,
                                budget_used=meter.spent, gammas=spec.gammas,
                                evidence=evidence)
    return None


def find_strongly_positive_above(g: MetricGraph, lam_hat: float, budget: int,
                                 assert_independent: bool = False,
                                 cfg: ClassifierConfig = DEFAULT_CONFIG) -> SearchResult:
    """First admissible lam > lam_hat (targets gamma = 1) classified strong."""
    _require_independent(g.lengths, assert_independent)
    spec = TargetSpec.uniform(1.0, len(g.edges))
    meter = BudgetMeter(budget)
    result = _hunt(g, spec, meter, lam_hat, TAG_STRONG, DEFAULT_LEVEL_CAP, cfg)
    if result is None:
        raise BudgetExhausted(budget, meter.best_residual, meter.level)
    return result


def find_not_eventually_positive_above(g: MetricGraph, lam_hat: float, budget: int,
                                       assert_independent: bool = False,
                                       cfg: ClassifierConfig = DEFAULT_CONFIG) -> SearchResult:
    """First admissible lam > lam_hat (targets gamma = -1) with no eventual positivity."""
    if g.n_outer < 2:
        raise ValueError("need at least two outer vertices")
    _require_independent(g.lengths, assert_independent)
    spec = TargetSpec.uniform(-1.0, len(g.edges))
    meter = BudgetMeter(budget)
    result = _hunt(g, spec, meter, lam_hat, TAG_NONE, DEFAULT_LEVEL_CAP, cfg)
    if result is None:
        raise BudgetExhausted(budget, meter.best_residual, meter.level)
    return result


def _reduced_minus_edge_connected(edges: Sequence[ReducedEdge], n: int,
                                  index: dict, drop: ReducedEdge) -> bool:
    adj = {i: set() for i in range(n)}
    for e in edges:
        if e is drop:
            continue
        i, j = index[e.u], index[e.v]
        adj[i].add(j)
        adj[j].add(i)
    seen = {0}
    stack = [0]
    while stack:
        v = stack.pop()
        for u in adj[v]:
            if u not in seen:
                seen.add(u)
                stack.append(u)
    return len(seen) == n


def _eventual_candidates(g: MetricGraph) -> Iterator[TargetSpec]:
    """Target specs whose limit should sit in the eventual class, best first.

    Route (a): a direct outer edge (r, s) on a reduced cycle gets
    gamma = -1/(eps + w) with w the through-connection weight of the deleted
    edge, cancelling the parallel paths and leaving a controlled negative
    entry of size eps.  Route (b): an inner-incident edge gets a small
    negative target -eta, driving the limit toward a spanning-star pattern
    with small negative entries off the star.
    """
    n_e = len(g.edges)
    red = reduced_graph(g)
    idx = {v: i for i, v in enumerate(red.vertices)}

    for re_edge in red.edges:
        if re_edge.kind == "through-inner":
            continue
        if re_edge.kind == "direct" and not _reduced_minus_edge_connected(
                red.edges, len(red.vertices), idx, re_edge):
            continue
        e_pos = next(i for i, e in enumerate(g.edges) if e.pair == re_edge.pair)
        deleted = list(TargetSpec.uniform(1.0, n_e).gammas)
        deleted[e_pos] = math.inf
        M_del = limit_schur(g, TargetSpec(tuple(deleted)))
        r, s = idx[re_edge.u], idx[re_edge.v]
        w_rs = max(0.0, -float(M_del[r, s]))

        base_g = list(deleted)
        if w_rs > 0.0:
            base_g[e_pos] = -1.0 / w_rs
        M0 = limit_schur(g, TargetSpec(tuple(base_g)))
        off = -M0[~np.eye(M0.shape[0], dtype=bool)]
        pos = off[off > 1e-12 * max(1.0, float(np.abs(M0).max()))]
        if pos.size == 0:
            continue
        base = float(pos.min())
        for j in range(2, 10):
            eps = base * 2.0 ** (-j)
            gammas = [1.0] * n_e
            gammas[e_pos] = -1.0 / (eps + w_rs)
            yield TargetSpec(tuple(gammas))

    inner = set(g.inner)
    for e_pos, e in enumerate(g.edges):
        if e.u not in inner and e.v not in inner:
            continue
        for j in range(3, 11):
            eta = 2.0 ** (-j)
            gammas = [1.0] * n_e
            gammas[e_pos] = -eta
            yield TargetSpec(tuple(gammas))


def find_eventual_not_positive_above(g: MetricGraph, lam_hat: float, budget: int,
                                     assert_independent: bool = False,
                                     cfg: ClassifierConfig = DEFAULT_CONFIG) -> SearchResult:
    """Admissible lam > lam_hat whose matrix is eventually strongly positive only.

    Requires a cycle in the reduced graph; on trees that class is empty and
    NoCycle is raised.  Candidate targets are screened by classifying their
    exact limit matrix before any budget is spent on them.
    """
    red = reduced_graph(g)
    if len(red.edges) == len(red.vertices) - 1:
        raise NoCycle()
    _require_independent(g.lengths, assert_independent)

    meter = BudgetMeter(budget)
    screened_any = False
    for spec in _eventual_candidates(g):
        try:
            tag = classify(limit_schur(g, spec), cfg).tag
        except np.linalg.LinAlgError:
            continue
        if tag != TAG_EVENTUAL:
            continue
        screened_any = True
        result = _hunt(g, spec, meter, lam_hat, TAG_EVENTUAL, 32, cfg)
        if result is not None:
            return result
    if not screened_any:
        raise RuntimeError("no candidate target reached the eventual class in the limit")
    raise BudgetExhausted(budget, meter.best_residual, meter.level)


def commensurable_base(lengths: Sequence[float], max_den: int = 10 ** 6,
                       rel_tol: float = 1e-9) -> float:
    """Largest L with every edge length an integer multiple of L, within rel_tol."""
    L_min = min(lengths)
    fracs = [Fraction(L / L_min).limit_denominator(max_den) for L in lengths]
    Q = math.lcm(*(f.denominator for f in fracs))
    counts = [f.numerator * (Q // f.denominator) for f in fracs]
    base = (L_min / Q) * math.gcd(*counts)
    for L in lengths:
        if abs(round(L / base) * base - L) > rel_tol * L:
            raise NotCommensurable(
                f"edge length {L!r} is not an integer multiple of a common base")
    return base


@dataclass(frozen=True)
class FamilyMember:
    p: int
    lam: float
    verdict: str
    identity_residual: float


@dataclass(frozen=True)
class CommensurableFamily:
    base_length: float
    mu: float
    lam1: float
    members: tuple[FamilyMember, ...]

    def to_record(self) -> dict:
        return {
            "base_length": self.base_length,
            "mu": self.mu,
            "lambda_1": self.lam1,
            "members": [
                {"p": m.p, "lambda": m.lam, "verdict": m.verdict,
                 "identity_residual": m.identity_residual}
                for m in self.members
            ],
        }


def commensurable_family(g: MetricGraph, mu: float, p_list: Sequence[int],
                         cfg: ClassifierConfig = DEFAULT_CONFIG) -> CommensurableFamily:
    """Shifted parameters lam_p = (sqrt(mu) + 2 pi p / L)^2 for commensurable lengths.

    Every edge phase moves by a full multiple of 2 pi, so
    D_{lam_p} / sqrt(lam_p) = D_mu / sqrt(mu) exactly; the reported residual
    measures how closely the assembled matrices reproduce that identity.
    Requires 0 < mu < lambda_1 of the outer-Dirichlet problem.
    """
    base = commensurable_base(g.lengths)
    lam1 = lambda_1(g)
    if not 0.0 < mu < lam1:
        raise MuOutOfRange(mu, lam1)

    ref = assemble_outer(g, mu).entries / math.sqrt(mu)
    scale = max(1.0, float(np.abs(ref).max()))
    members = []
    for p in p_list:
        p = int(p)
        if p < 0:
            raise ValueError("shift indices must be non-negative")
        lam_p = (math.sqrt(mu) + 2.0 * math.pi * p / base) ** 2
        D = assemble_outer(g, lam_p)
        resid = float(np.abs(D.entries / math.sqrt(lam_p) - ref).max()) / scale
        members.append(FamilyMember(p=p, lam=lam_p, verdict=classify(D, cfg).tag,
                                    identity_residual=resid))
    return CommensurableFamily(base_length=base, mu=mu, lam1=lam1,
                               members=tuple(members))
