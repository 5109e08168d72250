"""Three-phase primal interior-point solver.

Phase 1 centers the combined box/trust-region barrier coordinate by
coordinate. Phase 2 follows the central path of ``16/tau * qhat +
16 * Gamma_hat`` from ``tau0`` down to ``tau_F``. Phase 3 follows
``16/pi * qhat + 16 tau_F/pi * Gamma_LR + 16 * Gamma_Delta`` from
``pi = tau_F`` down to ``pi_F``; at ``pi_F`` this function is
``16/pi_F`` times the objective ``Phi``.
"""

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
import logging
import math

import numpy as np

from .errors import BadParameters, EntryConditionViolated, NcqpError, NumericalFailure
from .linalg import spectral_norm, spectral_norm_upper_bound
from .newton import damped_newton
from .path import path_follow_newton
from .problem import (
    Convexity,
    Objective,
    check_psi_convexity,
    make_Phi,
    make_coordinate_barrier,
    make_phi1,
    make_phi2,
    validate,
)

log = logging.getLogger(__name__)

# Worst-case initial gap of a coordinate barrier at the interval midpoint,
# log(32/27), is below 64/375.
PHASE1_GAP = 64.0 / 375.0


@dataclass
class Phase1Result:
    x: np.ndarray
    eps: float
    runs: list

    @property
    def iterations(self):
        return [r.iterations for r in self.runs]


@dataclass
class Solution:
    x_hat: np.ndarray
    phi_value: float
    certified_gap: float


@dataclass
class SolveTrace:
    phase1: Phase1Result
    tau0: float
    entry_ratio: float
    phase2: object
    pi0: float
    eps3: float
    phase3: object
    convexity: Convexity
    L: float
    warnings: list = field(default_factory=list)

    @property
    def x_I(self):
        return self.phase1.x

    @property
    def x_II(self):
        return self.phase2.x_final

    @property
    def x_III(self):
        return self.phase3.x_final

    @property
    def total_linear_solves(self):
        return self.phase2.total_linear_solves + self.phase3.total_linear_solves

    @property
    def phase1_linear_solves(self):
        return sum(r.linear_solves for r in self.phase1.runs)


def phase1_tolerance(geometry, spec):
    """``min((delta * Delta / (2048 sqrt(n)))**2, 1/36)``."""
    r = geometry.shortest_side * spec.delta / (2048.0 * math.sqrt(spec.n))
    return min(r * r, 1.0 / 36.0)


def run_box_j(j, spec, geometry, eps):
    g = make_coordinate_barrier(spec, j)
    x0 = 0.5 * (geometry.lower[j] + geometry.upper[j])
    run = damped_newton(g, [x0], eps, gap_estimate=PHASE1_GAP)
    if not run.converged:
        raise NumericalFailure(f"coordinate {j}: {run.message}", run)
    return run


def solve_box_j(j, spec, geometry, eps):
    """Minimize the scalar barrier of coordinate ``j``; return ``(x_j, iterations)``."""
    run = run_box_j(j, spec, geometry, eps)
    return float(run.x_final[0]), run.iterations


def phase1(spec, geometry, eps=None, threads=1):
    """Center ``Gamma_hat``; its Hessian is diagonal, so each coordinate is
    solved on its own. Results are assembled in index order regardless of
    ``threads``."""
    if eps is None:
        eps = phase1_tolerance(geometry, spec)
    solve_one = lambda j: run_box_j(j, spec, geometry, eps)  # noqa: E731
    if threads > 1 and spec.n > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            runs = list(pool.map(solve_one, range(spec.n)))
    else:
        runs = [solve_one(j) for j in range(spec.n)]
    x = np.array([r.x_final[0] for r in runs])
    return Phase1Result(x=x, eps=eps, runs=runs)


def compute_tau0(spec):
    """``64/Delta * (||Q|| (||x_L|| + ||x_R||) + ||c||)``, with the Frobenius
    norm standing in for ``||Q||_2``, and never below ``tau_F``."""
    bound = spectral_norm_upper_bound(spec.Q)
    tau0 = 64.0 / spec.delta * (bound * (np.linalg.norm(spec.x_L) + np.linalg.norm(spec.x_R))
                                + np.linalg.norm(spec.c))
    return max(float(tau0), spec.tau_F)


def phase2_entry_ratio(spec, geometry, x_I, tau0):
    """``||grad phi2_tau0(x_I)|| / Delta``; must not exceed 1/2."""
    g = make_phi2(spec, geometry, tau0).gradient(x_I)
    return float(np.linalg.norm(g)) / spec.delta


def phase2(spec, geometry, x_I, tau0=None):
    if tau0 is None:
        tau0 = compute_tau0(spec)
    ratio = phase2_entry_ratio(spec, geometry, x_I, tau0)
    if not ratio <= 0.5:
        raise EntryConditionViolated(
            f"phase 2 entry condition violated: ||grad phi2(x_I)||/Delta = {ratio!r} > 1/2")
    f = Objective(spec, geometry, quad=16.0, name="16*qhat")
    barrier = Objective(spec, geometry, box=16.0, trust=16.0, name="16*Gamma_hat")
    return path_follow_newton(f, barrier, x_I, tau0, spec.tau_F, 0.25)


def phase3_tolerance(spec, tol):
    """Tolerance on ``phi3_{pi_F} = 16/pi_F * Phi`` that yields ``Phi`` gap ``<= tol``.

    ``tol * pi_F / 16`` is used whenever it suffices (``pi_F <= 16``);
    otherwise ``16 * tol / pi_F``.
    """
    return min(tol * spec.pi_F / 16.0, 16.0 * tol / spec.pi_F)


def phase3(spec, geometry, x_II, tol):
    eps = phase3_tolerance(spec, tol)
    f = Objective(spec, geometry, quad=16.0, box=16.0 * spec.tau_F, name="16*(qhat+tau_F*Gamma_LR)")
    barrier = Objective(spec, geometry, trust=16.0, name="16*Gamma_Delta")
    return path_follow_newton(f, barrier, x_II, spec.tau_F, spec.pi_F, eps)


def problem_size(spec, geometry, tol):
    """Bit-length style size measure used in the complexity bound.

    The ``log(1 - log(.))`` terms for ``tol`` and the shortest side are
    floored at zero so that values above ``e`` do not make them undefined.
    """
    lq = lambda v: math.log(max(1.0, 1.0 - math.log(v)))  # noqa: E731
    d = spec.delta
    return (1.0 + math.log1p(spectral_norm(spec.Q)) + math.log1p(np.linalg.norm(spec.c))
            + math.log1p(np.linalg.norm(spec.x_L)) + math.log1p(np.linalg.norm(spec.x_R))
            + math.log(1.0 + d + 1.0 / d) + math.log(spec.n) - math.log(spec.pi_F)
            + lq(tol) + lq(geometry.shortest_side))


def solve(spec, tol, threads=1):
    """Run all three phases; return ``(Solution, SolveTrace)``.

    Errors escaping a phase carry the phase number in their ``phase``
    attribute.
    """
    if not tol > 0:
        raise BadParameters(f"tol must be positive, got {tol}")
    geometry = validate(spec)
    notes = []
    convexity = check_psi_convexity(spec, geometry)
    if convexity is not Convexity.CERTIFIED:
        notes.append("psi convexity could not be certified; complexity guarantees may not hold")
        log.warning(notes[-1])

    current = 1
    try:
        p1 = phase1(spec, geometry, threads=threads)
        current = 2
        p2 = phase2(spec, geometry, p1.x)
        current = 3
        p3 = phase3(spec, geometry, p2.x_final, tol)
    except NcqpError as exc:
        exc.phase = exc.phase or current
        raise
    for res in (p2, p3):
        notes.extend(res.flags)

    x_hat = p3.x_final
    sol = Solution(x_hat=x_hat, phi_value=make_Phi(spec, geometry).value(x_hat),
                   certified_gap=spec.pi_F / 16.0 * p3.eps)
    trace = SolveTrace(phase1=p1, tau0=p2.tau0, entry_ratio=phase2_entry_ratio(spec, geometry, p1.x, p2.tau0),
                       phase2=p2,
                       pi0=spec.tau_F, eps3=p3.eps, phase3=p3, convexity=convexity,
                       L=problem_size(spec, geometry, tol), warnings=notes)
    return sol, trace


def phase1_gradient_norm(spec, geometry, x_I):
    """``||grad Gamma_hat(x_I)||``, bounded by ``Delta/64`` after phase 1."""
    return float(np.linalg.norm(make_phi1(spec, geometry).gradient(x_I)))
