import math

import numpy as np
import pytest

from ncqpbtr.errors import BadParameters, NumericalFailure
from ncqpbtr.path import INNER_BOUND, outer_iteration_bound, path_follow_newton, reduction_factor
from ncqpbtr.problem import Objective, ProblemSpec, validate
from ncqpbtr.newton import damped_newton
from ncqpbtr.solver import compute_tau0, phase1

from helpers import random_instances


def phase2_parts(spec, geometry):
    f = Objective(spec, geometry, quad=16.0)
    barrier = Objective(spec, geometry, box=16.0, trust=16.0)
    return f, barrier


def test_reduction_factor():
    assert reduction_factor(16) == pytest.approx(0.8, rel=1e-15)
    assert reduction_factor(64) == pytest.approx(8 / 9, rel=1e-15)


def test_outer_bound_arithmetic():
    # log(64e3) / log(1.125) = 93.96
    assert outer_iteration_bound(64, 1e3, 1.0) == 94
    assert outer_iteration_bound(16, 1.0, 1.0) == math.ceil(math.log(16) / math.log(1.25))


def test_single_outer_step_when_equal():
    s = random_instances(1, 3)[0]
    g = validate(s)
    f, b = phase2_parts(s, g)
    x = phase1(s, g).x
    res = path_follow_newton(f, b, x, s.tau_F, s.tau_F, 0.25)
    assert res.outer_iterations == 1
    assert res.tau_schedule == [s.tau_F]


def scalar_instance():
    s = ProblemSpec(Q=[[1.0]], c=[0.3], x_L=[-1.0], x_R=[1.0], delta=1.0, tau_F=1.0, pi_F=1.0)
    return s, validate(s)


def test_scalar_outer_count():
    s, g = scalar_instance()
    f, b = phase2_parts(s, g)
    assert b.barrier_weight == 64
    res = path_follow_newton(f, b, np.zeros(1), 1e3, 1.0, 1e-10)
    assert res.outer_iterations <= 94
    assert res.outer_iterations == len(res.tau_schedule)
    assert res.termination == "Converged"


def test_schedule_invariants():
    for s in random_instances(5, 77):
        g = validate(s)
        f, b = phase2_parts(s, g)
        tau0 = compute_tau0(s)
        res = path_follow_newton(f, b, phase1(s, g).x, tau0, s.tau_F, 1e-8)
        sched = res.tau_schedule
        assert sched[-1] == s.tau_F
        assert all(b_ < a for a, b_ in zip(sched, sched[1:]))
        prev = [tau0] + sched[:-1]
        for p, t in zip(prev, sched):
            assert t == max(s.tau_F, res.sigma * p)
        assert all(k <= INNER_BOUND for k in res.inner_iterations_per_step)
        assert res.outer_iterations <= outer_iteration_bound(b.barrier_weight, tau0, s.tau_F) + 1
        assert res.total_linear_solves == sum(r.iterations + 1 for r in res.runs)
        assert len(res.runs) == res.outer_iterations + 1
        assert [r.parameter for r in res.runs] == sched + [s.tau_F]
        assert not res.flags


def test_warm_start_chain():
    s = random_instances(1, 5)[0]
    g = validate(s)
    f, b = phase2_parts(s, g)
    x0 = phase1(s, g).x
    res = path_follow_newton(f, b, x0, compute_tau0(s), s.tau_F, 1e-8)
    starts = [x0] + [r.x_final for r in res.runs[:-1]]
    for run, start in zip(res.runs, starts):
        # a run with zero iterations ends where it started
        if run.iterations == 0:
            assert np.array_equal(run.x_final, start)
    assert np.array_equal(res.x_final, res.runs[-1].x_final)


def test_final_member_is_optimal():
    s, g = scalar_instance()
    f, b = phase2_parts(s, g)
    res = path_follow_newton(f, b, np.zeros(1), 50.0, 2.0, 1e-14)
    member = f.divided(2.0) + b
    ref = damped_newton(member, [0.0], 1e-15)
    assert res.x_final[0] == pytest.approx(ref.x_final[0], abs=1e-7)


@pytest.mark.parametrize("tau0, tauE, eps", [(1.0, 2.0, 0.1), (1.0, 0.0, 0.1), (1.0, 0.5, 0.0)])
def test_bad_parameters(tau0, tauE, eps):
    s, g = scalar_instance()
    f, b = phase2_parts(s, g)
    with pytest.raises(BadParameters):
        path_follow_newton(f, b, np.zeros(1), tau0, tauE, eps)


def test_failure_carries_partial_result():
    # indefinite quadratic without a barrier: the Hessian is never positive definite
    s = ProblemSpec(Q=[[-1.0]], c=[0.0], x_L=[-1.0], x_R=[1.0], delta=1.0, tau_F=1.0, pi_F=1.0)
    g = validate(s)
    f = Objective(s, g, quad=1.0)
    b = Objective(s, g, barrier_weight=1.0)
    with pytest.raises(NumericalFailure) as info:
        path_follow_newton(f, b, np.array([0.1]), 2.0, 1.0, 0.1)
    assert info.value.result.termination == "NumericalFailure"
