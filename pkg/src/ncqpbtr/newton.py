"""Damped Newton method with backtracking line search.

Constants follow the classical analysis for self-concordant functions:
the Armijo parameter is 0.1, the step is shrunk by 0.8, and iteration stops
once half the squared Newton decrement drops below the tolerance.
"""

from dataclasses import dataclass, field
from enum import Enum
import math

import numpy as np

from .errors import BadParameters, NotPositiveDefinite
from .linalg import cholesky

ARMIJO = 0.1
SHRINK = 0.8
MIN_STEP = 1e-18
MIN_ITER_CAP = 500


class Termination(str, Enum):
    DECREMENT_SMALL = "DecrementSmall"
    ITERATION_CAP = "IterationCap"
    NUMERICAL_FAILURE = "NumericalFailure"


@dataclass
class NewtonResult:
    """Outcome of one :func:`damped_newton` run.

    ``values[k]`` and ``decrement_sq_history[k]`` belong to iterate ``k``
    (``k = 0 .. iterations``); ``step_lengths[k]`` is the accepted step
    from iterate ``k`` to ``k + 1``.
    """

    x_final: np.ndarray
    iterations: int
    decrement_sq_history: list = field(default_factory=list)
    values: list = field(default_factory=list)
    step_lengths: list = field(default_factory=list)
    line_search_steps: int = 0
    termination: Termination = Termination.DECREMENT_SMALL
    message: str = ""
    parameter: float = None

    @property
    def converged(self):
        return self.termination is Termination.DECREMENT_SMALL

    @property
    def linear_solves(self):
        # every pass through the loop, the terminating one included, factors
        # the Hessian once
        return len(self.decrement_sq_history)


def newton_decrement_sq(f, x):
    """Return ``(lambda_sq, step)`` with ``step = -H^{-1} g``.

    Raises
    ------
    NotPositiveDefinite
        If the Hessian of ``f`` at ``x`` cannot be Cholesky factored.
    """
    g = f.gradient(x)
    step = -cholesky(f.hessian(x)).solve(g)
    return float(-(step @ g)), step


def default_iter_cap(gap_estimate=None):
    if gap_estimate is None:
        return MIN_ITER_CAP
    return max(MIN_ITER_CAP, math.ceil(10 * (375 * gap_estimate + 64)))


def iteration_bound(initial_gap, eps):
    """``375 * (g(x0) - min g) + log2(1 - log2(eps))``."""
    return 375.0 * initial_gap + math.log2(1.0 - math.log2(eps))


def quadratic_phase_bound(eps):
    """Iterations needed once the gap is below 1/4: ``ceil(log2(1 - log2(eps)))``."""
    return math.ceil(math.log2(1.0 - math.log2(eps)))


def damped_newton(f, x0, eps, iter_cap=None, gap_estimate=None):
    """Minimize ``f`` from ``x0`` until ``lambda**2 / 2 <= eps``.

    ``f`` must provide ``value``, ``gradient`` and ``hessian``; ``value``
    returns ``inf`` outside its domain, so the backtracking loop never
    accepts an infeasible point. Failures are reported through
    ``termination`` rather than raised.
    """
    if not eps > 0:
        raise BadParameters(f"eps must be positive, got {eps}")
    cap = default_iter_cap(gap_estimate) if iter_cap is None else int(iter_cap)
    x = np.array(x0, dtype=float)
    fx = f.value(x)
    if not math.isfinite(fx):
        raise BadParameters("starting point is not in the interior of the domain")

    res = NewtonResult(x_final=x, iterations=0)
    k = 0
    while True:
        g = f.gradient(x)
        try:
            step = -cholesky(f.hessian(x)).solve(g)
        except NotPositiveDefinite as exc:
            return _fail(res, x, k, f"Hessian not positive definite: {exc}")
        lam_sq = float(-(step @ g))
        if not math.isfinite(lam_sq):
            return _fail(res, x, k, "non-finite Newton decrement")
        if lam_sq < 0:
            if -lam_sq > 64 * np.finfo(float).eps * np.linalg.norm(step) * np.linalg.norm(g):
                return _fail(res, x, k, f"negative Newton decrement {lam_sq!r}")
            lam_sq = 0.0
        res.decrement_sq_history.append(lam_sq)
        res.values.append(fx)

        if lam_sq / 2 <= eps:
            res.x_final, res.iterations = x, k
            return res
        if k >= cap:
            res.x_final, res.iterations = x, k
            res.termination = Termination.ITERATION_CAP
            res.message = f"iteration cap {cap} reached"
            return res

        t = 1.0
        while True:
            x_new = x + t * step
            f_new = f.value(x_new)
            if f_new <= fx - ARMIJO * t * lam_sq:
                break
            t *= SHRINK
            res.line_search_steps += 1
            if t < MIN_STEP:
                return _fail(res, x, k, "line search step underflow")
        res.step_lengths.append(t)
        x, fx = x_new, f_new
        k += 1


def _fail(res, x, k, message):
    res.x_final, res.iterations = x, k
    res.termination = Termination.NUMERICAL_FAILURE
    res.message = message
    return res
