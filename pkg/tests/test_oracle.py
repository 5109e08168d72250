import math

import numpy as np
import pytest

from ncqpbtr.errors import DimensionTooLarge, NoSignChange, NotConvexOnSample
from ncqpbtr.generator import GenParams, generate
from ncqpbtr.oracle import (
    GridSpec,
    bisect_root,
    fd_check,
    grid_refine_min,
    grid_resolution,
    min_eigenvalue_bisect,
    minimize_scalar_Phi,
    phi_batch,
    random_interior_point,
    self_concordance_scan,
)
from ncqpbtr.problem import (
    ProblemSpec,
    eval_Phi,
    make_barrier,
    make_phi1,
    make_phi2,
    make_qhat,
    validate,
)
from ncqpbtr.solver import compute_tau0

from helpers import Scalar, random_instances


class TestBisect:
    @pytest.mark.parametrize("f, a, b, root", [
        (lambda x: x - 0.3, 0.0, 1.0, 0.3),
        (lambda x: x ** 3 - 2, 0.0, 2.0, 2 ** (1 / 3)),
        (math.atan, -1.0, 5.0, 0.0),
    ])
    def test_roots(self, f, a, b, root):
        assert bisect_root(f, a, b) == pytest.approx(root, abs=1e-11)

    def test_no_sign_change(self):
        with pytest.raises(NoSignChange):
            bisect_root(lambda x: x * x + 1, -1.0, 1.0)

    def test_decreasing_rejected(self):
        with pytest.raises(NoSignChange):
            bisect_root(lambda x: -x, -1.0, 1.0)


N1_SEED0_X = -0.9374356403204347
N1_SEED0_PHI = -0.9227806078776826


class TestScalarAndGrid:
    def test_generated_n1_bisection_golden(self):
        s = generate(GenParams(n=1, seed=0))
        g = validate(s)
        x = minimize_scalar_Phi(s, g)
        assert x == pytest.approx(N1_SEED0_X, abs=1e-10)
        assert eval_Phi(s, g, [x]) == pytest.approx(N1_SEED0_PHI, abs=1e-12)

    def test_grid_matches_bisection(self):
        for s in random_instances(5, 51, n_choices=[1]):
            g = validate(s)
            x_b = minimize_scalar_Phi(s, g)
            x_g, f_g = grid_refine_min(s, g)
            res = grid_resolution(g)
            f_b = eval_Phi(s, g, [x_b])
            assert f_g >= f_b - 1e-12 * (1 + abs(f_b))
            assert f_g - f_b <= 10 * res + 1e-12 * (1 + abs(f_b))

    def test_n2_golden(self):
        s = generate(GenParams(n=2, seed=0))
        g = validate(s)
        x, f = grid_refine_min(s, g)
        assert f == pytest.approx(0.31440044551716684, abs=1e-12)
        assert np.allclose(x, [0.46642632084288455, -0.44371757262350087], atol=1e-9)
        assert grid_resolution(g) == pytest.approx(6.39e-8, rel=1e-2)

    def test_deterministic(self):
        s = random_instances(1, 52, n_choices=[2])[0]
        g = validate(s)
        grid = GridSpec(points_per_axis=101, shrink_rounds=3)
        a = grid_refine_min(s, g, grid)
        b = grid_refine_min(s, g, grid, chunk=777)
        assert np.array_equal(a[0], b[0]) and a[1] == b[1]

    def test_dimension_limit(self):
        s = random_instances(1, 53, n_choices=[4])[0]
        with pytest.raises(DimensionTooLarge):
            grid_refine_min(s, validate(s))

    def test_phi_batch_agrees_with_objective(self):
        rng = np.random.default_rng(0)
        for s in random_instances(5, 54, n_choices=[1, 2, 3]):
            g = validate(s)
            X = np.array([random_interior_point(g, rng) for _ in range(20)])
            direct = [eval_Phi(s, g, x) for x in X]
            assert np.allclose(phi_batch(s, X), direct, rtol=1e-12, atol=1e-12)
            assert phi_batch(s, g.upper[None, :])[0] == math.inf

    @pytest.mark.parametrize("kw", [dict(points_per_axis=2), dict(points_per_axis=100),
                                    dict(shrink_factor=1.0)])
    def test_grid_spec_validation(self, kw):
        with pytest.raises(ValueError):
            GridSpec(**kw)


class TestFdCheck:
    def test_exact_on_cubic(self):
        f = Scalar(lambda t: t ** 3, lambda t: 3 * t * t, lambda t: 6 * t)
        assert fd_check(f, [0.7], "gradient") < 1e-9
        assert fd_check(f, [0.7], "hessian") < 1e-9

    def test_detects_wrong_gradient(self):
        f = Scalar(lambda t: t ** 3, lambda t: 3 * t * t + 0.01, lambda t: 6 * t)
        assert fd_check(f, [0.7], "gradient") > 1e-3

    def test_bad_order(self):
        with pytest.raises(ValueError):
            fd_check(Scalar(abs, abs, abs), [1.0], "third")


class TestSelfConcordance:
    def test_log_barrier_is_at_most_one(self):
        s = random_instances(1, 61, n_choices=[3])[0]
        g = validate(s)
        ratio = self_concordance_scan(make_barrier("trust", s, g), segments=20, samples_per_segment=20)
        assert 0 < ratio <= 1 + 1e-3

    def test_phi2(self):
        s = random_instances(1, 62, n_choices=[4])[0]
        g = validate(s)
        f = make_phi2(s, g, compute_tau0(s))
        assert self_concordance_scan(f, segments=20, samples_per_segment=20) <= 1 + 1e-3

    def test_scalar_barrier_near_bound(self):
        # -log(1 - x) - log(1 + x) attains ratio 1 close to the boundary
        s = ProblemSpec(Q=[[0.0]], c=[0.0], x_L=[-5.0], x_R=[5.0], delta=1.0, tau_F=1, pi_F=1)
        r = self_concordance_scan(make_barrier("trust", s), segments=4, samples_per_segment=50)
        assert 0.9 < r <= 1 + 1e-3

    def test_indefinite_quadratic_rejected(self):
        s = ProblemSpec(Q=[[-1.0, 0.0], [0.0, -1.0]], c=[0, 0], x_L=[-1, -1], x_R=[1, 1],
                        delta=1, tau_F=1, pi_F=1)
        f = make_qhat(s, validate(s))
        with pytest.raises(NotConvexOnSample):
            self_concordance_scan(f, segments=2, samples_per_segment=3)

    def test_deterministic(self):
        s = random_instances(1, 63, n_choices=[2])[0]
        f = make_phi1(s, validate(s))
        assert self_concordance_scan(f, 5, 5, seed=3) == self_concordance_scan(f, 5, 5, seed=3)


class TestMinEigenvalueBisect:
    @pytest.mark.parametrize("Q, expected", [
        ([[2.0]], 2.0),
        ([[2.0, 1.0], [1.0, 2.0]], 1.0),
        ([[0.0, 1.0], [1.0, 0.0]], -1.0),
        (np.diag([3.0, -4.0, 5.0]), -4.0),
    ])
    def test_examples(self, Q, expected):
        assert min_eigenvalue_bisect(Q) == pytest.approx(expected, abs=1e-9)
