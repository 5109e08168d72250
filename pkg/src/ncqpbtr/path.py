"""Short-step primal path-following on ``g_tau = f / tau + barrier``."""

from dataclasses import dataclass, field
import math

from .errors import BadParameters, NumericalFailure
from .newton import damped_newton

INNER_TOL = 0.25
INNER_BOUND = 380


@dataclass
class PathResult:
    x_final: object
    outer_iterations: int
    inner_iterations_per_step: list
    final_iterations: int
    total_linear_solves: int
    tau_schedule: list
    tau0: float
    tauE: float
    eps: float
    sigma: float
    barrier_weight: float
    runs: list = field(default_factory=list)
    flags: list = field(default_factory=list)
    termination: str = "Converged"


def reduction_factor(barrier_weight):
    return 1.0 / (1.0 + 1.0 / math.sqrt(barrier_weight))


def outer_iteration_bound(barrier_weight, tau0, tauE):
    """``ceil(log(|Gamma| tau0 / tauE) / log(1 + 1/sqrt(|Gamma|)))``."""
    return math.ceil(math.log(barrier_weight * tau0 / tauE)
                     / math.log1p(1.0 / math.sqrt(barrier_weight)))


def path_follow_newton(f, barrier, x_start, tau0, tauE, eps):
    """Follow the minimizers of ``f / tau + barrier`` from ``tau0`` to ``tauE``.

    ``x_start`` should be within 1/4 of the minimum of the ``tau0`` member.
    Each parameter value is solved to tolerance 1/4 with warm starts; the
    ``tauE`` member is then polished to ``eps``. ``f`` and ``barrier`` are
    :class:`~ncqpbtr.problem.Objective` instances of the same problem.

    Raises
    ------
    BadParameters
        If ``tauE > tau0``, ``tauE <= 0`` or ``eps <= 0``.
    NumericalFailure
        If any inner Newton run does not converge.
    """
    if not (0 < tauE <= tau0) or not eps > 0:
        raise BadParameters(f"need 0 < tauE <= tau0 and eps > 0 (tau0={tau0}, tauE={tauE}, eps={eps})")
    weight = barrier.barrier_weight
    sigma = reduction_factor(weight)
    result = PathResult(x_final=None, outer_iterations=0, inner_iterations_per_step=[],
                        final_iterations=0, total_linear_solves=0, tau_schedule=[],
                        tau0=tau0, tauE=tauE, eps=eps, sigma=sigma, barrier_weight=weight)
    tau = tau0
    x = x_start
    while True:
        tau = max(tauE, sigma * tau)
        g = _member(f, barrier, tau)
        run = _newton(g, x, INNER_TOL, result, tau)
        result.tau_schedule.append(tau)
        result.inner_iterations_per_step.append(run.iterations)
        if run.iterations > INNER_BOUND:
            result.flags.append(
                f"inner Newton run at tau={tau!r} took {run.iterations} > {INNER_BOUND} iterations")
        x = run.x_final
        if tau == tauE:
            break
    result.outer_iterations = len(result.tau_schedule)
    run = _newton(g, x, eps, result, tau)
    result.final_iterations = run.iterations
    result.x_final = run.x_final
    return result


def _member(f, barrier, tau):
    g = f.divided(tau) + barrier
    g.name = f"({f.name})/{tau!r}+{barrier.name}"
    return g


def _newton(g, x, eps, result, tau):
    run = damped_newton(g, x, eps, gap_estimate=INNER_TOL)
    run.parameter = tau
    result.runs.append(run)
    result.total_linear_solves += run.linear_solves
    if not run.converged:
        result.termination = "NumericalFailure"
        raise NumericalFailure(f"Newton failed at parameter {tau!r}: {run.message}", result)
    return run
