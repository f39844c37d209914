"""Exception hierarchy for the whole package.

Graph validation errors name the offending element so callers can report
actionable messages; numerical errors carry the quantity that tripped them.
"""

from __future__ import annotations


class DtnError(Exception):
    """Base class for all package errors."""


# --- graph validation -------------------------------------------------------

class GraphValidationError(DtnError):
    """Base class for errors raised while validating a graph description."""


class NotSimple(GraphValidationError):
    def __init__(self, element: object) -> None:
        self.element = element
        super().__init__(f"graph is not simple: offending edge {element!r}")


class Disconnected(GraphValidationError):
    def __init__(self, element: object) -> None:
        self.element = element
        super().__init__(f"graph is disconnected: vertex {element!r} unreachable")


class NonPositiveLength(GraphValidationError):
    def __init__(self, element: object, length: float) -> None:
        self.element = element
        self.length = length
        super().__init__(f"edge {element!r} has non-positive or non-finite length {length!r}")


class EmptyOuterSet(GraphValidationError):
    def __init__(self) -> None:
        super().__init__("outer vertex set is empty")


# --- matrix assembly --------------------------------------------------------

class AtPole(DtnError):
    """lambda lies in the per-edge Dirichlet spectrum within tolerance."""

    def __init__(self, lam: float, edge: object = None, detail: str = "") -> None:
        self.lam = lam
        self.edge = edge
        msg = f"lambda={lam!r} is at a pole"
        if edge is not None:
            msg += f" of edge {edge!r}"
        if detail:
            msg += f" ({detail})"
        super().__init__(msg)


class InnerBlockSingular(DtnError):
    """The inner block of -D is numerically singular (lambda near the reduced spectrum)."""

    def __init__(self, lam: float, cond: float) -> None:
        self.lam = lam
        self.cond = cond
        super().__init__(f"inner block singular at lambda={lam!r} (condition estimate {cond:.3e})")


class PatternViolation(DtnError):
    """A reduced matrix has a non-negligible entry outside its adjacency pattern."""

    def __init__(self, index: tuple[int, int], value: float, bound: float) -> None:
        self.index = index
        self.value = value
        self.bound = bound
        super().__init__(
            f"entry {index} = {value!r} violates the zero pattern (tolerance {bound!r})"
        )


class PoleCluster(DtnError):
    """Another pole lies inside the residue probe window."""


# --- spectra ----------------------------------------------------------------

class ResolutionTooLow(DtnError):
    def __init__(self, estimate: float, lam1: float) -> None:
        self.estimate = estimate
        self.lam1 = lam1
        super().__init__(
            f"discretization error estimate {estimate:.3e} exceeds 1% of lambda_1={lam1:.6g}; "
            "increase the resolution"
        )


# --- classification ---------------------------------------------------------

class NumericallyMarginal(DtnError):
    """A decisive classification quantity is within tolerance of zero."""

    def __init__(self, quantity: str, value: float, tolerance: float) -> None:
        self.quantity = quantity
        self.value = value
        self.tolerance = tolerance
        super().__init__(
            f"classification is marginal: {quantity} = {value!r} within tolerance {tolerance!r}"
        )


# --- searches ---------------------------------------------------------------

class BudgetExhausted(DtnError):
    def __init__(self, budget: int, best_residual: float, level: int) -> None:
        self.budget = budget
        self.best_residual = best_residual
        self.level = level
        super().__init__(
            f"search budget of {budget} points exhausted at level {level}; "
            f"best residual {best_residual:.3e}"
        )


class IndependenceNotAsserted(DtnError):
    def __init__(self) -> None:
        super().__init__(
            "rational independence of the edge lengths must be asserted by the caller "
            "(pass independence_asserted=True / --assert-independent)"
        )


class NoCycle(DtnError):
    def __init__(self) -> None:
        super().__init__("the reduced graph is a tree: no cycle edge to perturb")


class NotCommensurable(DtnError):
    def __init__(self, detail: str) -> None:
        super().__init__(f"edge lengths are not commensurable: {detail}")


class MuOutOfRange(DtnError):
    def __init__(self, mu: float, lam1: float) -> None:
        self.mu = mu
        self.lam1 = lam1
        super().__init__(f"mu={mu!r} outside the admissible interval (0, {lam1!r})")
