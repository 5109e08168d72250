import math

import numpy as np

from ncqpbtr.generator import GenParams, generate


class Scalar:
    """Minimal scalar objective with the value/gradient/hessian interface."""

    def __init__(self, value, d1, d2, lo=-math.inf, hi=math.inf):
        self._v, self._d1, self._d2 = value, d1, d2
        self.lo, self.hi = lo, hi

    def value(self, x):
        t = float(np.asarray(x).reshape(-1)[0])
        if not (self.lo < t < self.hi):
            return math.inf
        return self._v(t)

    def gradient(self, x):
        return np.array([self._d1(float(np.asarray(x).reshape(-1)[0]))])

    def hessian(self, x):
        return np.array([[self._d2(float(np.asarray(x).reshape(-1)[0]))]])


def half_square():
    return Scalar(lambda t: 0.5 * t * t, lambda t: t, lambda t: 1.0)


def worst_case_barrier(delta=1.0):
    """-2 log(delta + x) - log(delta - x): the coordinate barrier with
    x_L = -delta and x_R -> infinity, up to a constant."""
    return Scalar(lambda t: -2 * math.log(delta + t) - math.log(delta - t),
                  lambda t: -2 / (delta + t) + 1 / (delta - t),
                  lambda t: 2 / (delta + t) ** 2 + 1 / (delta - t) ** 2,
                  lo=-delta, hi=delta)


def random_params(rng, n_choices=range(1, 21)):
    return GenParams(
        n=int(rng.choice(list(n_choices))),
        seed=int(rng.integers(0, 2 ** 63)),
        q_min_eig=float(rng.uniform(-2.0, 1.0)),
        box_scale=float(rng.uniform(0.0, 5.0)),
        delta=float(10 ** rng.uniform(-1.5, 1.0)),
        tau_F=float(10 ** rng.uniform(-2, 1)),
        pi_F=float(10 ** rng.uniform(-3, 0)),
        tightness=float(rng.uniform(0.0, 0.95)),
    )


def random_instances(count, seed, n_choices=range(1, 21)):
    rng = np.random.default_rng(seed)
    return [generate(random_params(rng, n_choices)) for _ in range(count)]
