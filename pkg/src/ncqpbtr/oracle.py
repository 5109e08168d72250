"""Slow reference computations used to check the solver.

Nothing in here calls into the Newton or path-following code. The grid
search evaluates the objective from its formula directly rather than
through :class:`~ncqpbtr.problem.Objective`.
"""

from dataclasses import dataclass
import math

import numpy as np

from .errors import DimensionTooLarge, NoSignChange, NotConvexOnSample
from .problem import validate

TINY = 1e-300


def bisect_root(f_prime, a, b, tol=1e-12, max_iter=400):
    """Root of an increasing function on ``[a, b]`` by bisection.

    Needs ``f_prime(a) < 0 < f_prime(b)``. For the derivative of a strictly
    convex function the result is the minimizer to within ``tol``.
    """
    fa, fb = f_prime(a), f_prime(b)
    if not (fa < 0 < fb):
        raise NoSignChange(f"f'({a!r}) = {fa!r}, f'({b!r}) = {fb!r}")
    for _ in range(max_iter):
        if b - a <= tol:
            break
        m = 0.5 * (a + b)
        if m <= a or m >= b:
            break
        fm = f_prime(m)
        if fm == 0:
            return m
        if fm < 0:
            a = m
        else:
            b = m
    return 0.5 * (a + b)


def scalar_Phi_prime(spec, j=0):
    """Derivative of the objective along coordinate ``j`` for ``n == 1``
    problems (and separable problems in general)."""
    q = float(spec.Q[j, j])
    c = float(spec.c[j])
    xl, xr, d, tau, pi = float(spec.x_L[j]), float(spec.x_R[j]), spec.delta, spec.tau_F, spec.pi_F

    def fp(x):
        return (q * x + c + tau * (1.0 / (xr - x) - 1.0 / (x - xl))
                + pi * (1.0 / (d - x) - 1.0 / (d + x)))

    return fp


def coordinate_barrier_prime(x_L, x_R, delta):
    def fp(x):
        return 1.0 / (x_R - x) - 1.0 / (x - x_L) + 1.0 / (delta - x) - 1.0 / (delta + x)

    return fp


def minimize_scalar_Phi(spec, geometry, tol=1e-13):
    """Minimizer of a one-dimensional problem by bisection on the derivative."""
    lo, hi = float(geometry.lower[0]), float(geometry.upper[0])
    w = hi - lo
    return bisect_root(scalar_Phi_prime(spec), lo + 1e-14 * w, hi - 1e-14 * w, tol=tol * w)


@dataclass(frozen=True)
class GridSpec:
    points_per_axis: int = 2001
    shrink_rounds: int = 6
    shrink_factor: float = 0.2

    def __post_init__(self):
        if self.points_per_axis < 3 or self.points_per_axis % 2 == 0:
            raise ValueError("points_per_axis must be odd and at least 3")
        if not 0 < self.shrink_factor < 1:
            raise ValueError("shrink_factor must lie in (0, 1)")


def phi_batch(spec, X):
    """Objective values at the rows of ``X``; ``inf`` outside the domain."""
    X = np.atleast_2d(X)
    with np.errstate(divide="ignore", invalid="ignore"):
        quad = 0.5 * np.einsum("ij,jk,ik->i", X, spec.Q, X) + X @ spec.c
        a, b = X - spec.x_L, spec.x_R - X
        p, m = spec.delta + X, spec.delta - X
        ok = np.all((a > 0) & (b > 0) & (p > 0) & (m > 0), axis=1)
        val = (quad - spec.tau_F * np.sum(np.log(a) + np.log(b), axis=1)
               - spec.pi_F * np.sum(np.log(p) + np.log(m), axis=1))
    return np.where(ok, val, np.inf)


def grid_resolution(geometry, grid=GridSpec()):
    """Point spacing of the last refinement round (largest over axes)."""
    w = float(np.max(geometry.upper - geometry.lower))
    return w * grid.shrink_factor ** grid.shrink_rounds / (grid.points_per_axis + 1)


def grid_refine_min(spec, geometry, grid=GridSpec(), chunk=400_000):
    """Minimize the objective on a sequence of shrinking tensor grids.

    Returns ``(x_star, phi_star)``. Limited to ``n <= 3``.
    """
    n = spec.n
    if n > 3:
        raise DimensionTooLarge(f"grid oracle supports n <= 3, got n = {n}")
    P = grid.points_per_axis
    lower, upper = geometry.lower, geometry.upper
    half = 0.5 * (upper - lower)
    center = 0.5 * (upper + lower)
    best_x, best_f = center.copy(), float(phi_batch(spec, center)[0])
    offsets = np.linspace(-1.0, 1.0, P + 2)[1:-1]
    for _ in range(grid.shrink_rounds + 1):
        axes = [center[j] + half[j] * offsets for j in range(n)]
        x, f = _grid_argmin(spec, axes, chunk)
        if f < best_f:
            best_x, best_f = x, f
        center = best_x
        half = half * grid.shrink_factor
    return best_x, best_f


def _grid_argmin(spec, axes, chunk):
    n = len(axes)
    first = axes[0]
    rest = np.stack(np.meshgrid(*axes[1:], indexing="ij"), axis=-1).reshape(-1, n - 1) if n > 1 else None
    per = 1 if rest is None else rest.shape[0]
    step = max(1, chunk // per)
    best_x, best_f = None, math.inf
    for start in range(0, first.size, step):
        block = first[start:start + step]
        if rest is None:
            X = block[:, None]
        else:
            X = np.concatenate([np.repeat(block, per)[:, None], np.tile(rest, (block.size, 1))], axis=1)
        vals = phi_batch(spec, X)
        i = int(np.argmin(vals))
        if vals[i] < best_f:
            best_x, best_f = X[i].copy(), float(vals[i])
    return best_x, best_f


def fd_check(f, x, order="gradient"):
    """Worst relative error of the analytic gradient or Hessian of ``f``
    against central differences with ``h = 1e-6 (1 + ||x||_inf)``.

    Errors are measured in the max norm relative to ``max(||exact||, 1)``.
    """
    x = np.asarray(x, dtype=float)
    h = 1e-6 * (1.0 + np.max(np.abs(x)))
    n = x.size
    if order == "gradient":
        exact = f.gradient(x)
        approx = np.empty(n)
        for j in range(n):
            e = np.zeros(n)
            e[j] = h
            approx[j] = (f.value(x + e) - f.value(x - e)) / (2 * h)
    elif order == "hessian":
        exact = f.hessian(x)
        approx = np.empty((n, n))
        for j in range(n):
            e = np.zeros(n)
            e[j] = h
            approx[:, j] = (f.gradient(x + e) - f.gradient(x - e)) / (2 * h)
    else:
        raise ValueError(f"order must be 'gradient' or 'hessian', got {order!r}")
    return float(np.max(np.abs(approx - exact)) / max(np.max(np.abs(exact)), 1.0))


def random_interior_point(geometry, rng, margin=0.01):
    """Uniform point of the box shrunk by ``margin`` of each side length."""
    w = geometry.upper - geometry.lower
    return geometry.lower + w * (margin + (1 - 2 * margin) * rng.random(w.size))


def _chord(geometry, x, d):
    with np.errstate(divide="ignore"):
        t1 = (geometry.lower - x) / d
        t2 = (geometry.upper - x) / d
    lo = np.where(d != 0, np.minimum(t1, t2), -np.inf)
    hi = np.where(d != 0, np.maximum(t1, t2), np.inf)
    return float(np.max(lo)), float(np.min(hi))


def self_concordance_scan(f, segments=100, samples_per_segment=50, seed=0, end_margin=0.01):
    """Largest ``|g'''| / (2 g''**1.5)`` seen along random lines through the domain.

    ``g(t) = f(x + t d)``. The second derivative comes from the analytic
    Hessian of ``f``; the third derivative is a Richardson-extrapolated
    central difference of it with step ``1e-4`` times the segment length.
    Each chord of the domain is trimmed by ``end_margin`` at both ends.

    Raises
    ------
    NotConvexOnSample
        If ``g''`` is not positive at some sample.
    """
    geometry = f.geometry if f.geometry is not None else validate(f.spec)
    rng = np.random.default_rng(seed)
    n = geometry.n
    worst = 0.0
    for _ in range(segments):
        x = random_interior_point(geometry, rng)
        d = rng.standard_normal(n)
        d /= np.linalg.norm(d)
        lo, hi = _chord(geometry, x, d)
        length = hi - lo
        ts = np.linspace(lo + end_margin * length, hi - end_margin * length, samples_per_segment)
        h = 1e-4 * length * (1 - 2 * end_margin)

        def g2(t):
            return float(d @ f.hessian(x + t * d) @ d)

        for t in ts:
            c2 = g2(t)
            if not c2 > 0:
                raise NotConvexOnSample(f"g'' = {c2!r} at {x + t * d}")
            D1 = (g2(t + h) - g2(t - h)) / (2 * h)
            D2 = (g2(t + h / 2) - g2(t - h / 2)) / h
            c3 = (4 * D2 - D1) / 3
            worst = max(worst, abs(c3) / (2 * c2 ** 1.5 + TINY))
    return worst


def _negative_pivots(A):
    """Number of negative eigenvalues of symmetric ``A`` (Sylvester inertia),
    via Gaussian elimination without pivoting."""
    A = np.array(A, dtype=float)
    n = A.shape[0]
    count = 0
    for k in range(n):
        p = A[k, k]
        if p == 0.0:
            p = 1e-300
        if p < 0:
            count += 1
        if k + 1 < n:
            A[k + 1:, k + 1:] -= np.outer(A[k + 1:, k], A[k, k + 1:]) / p
    return count


def min_eigenvalue_bisect(Q, tol=1e-12):
    """Smallest eigenvalue of symmetric ``Q`` by bisection on the sign
    pattern of ``det(Q - lambda I)``'s leading minors."""
    Q = np.asarray(Q, dtype=float)
    n = Q.shape[0]
    r = float(np.sqrt(np.sum(Q * Q))) + 1.0
    lo, hi = -r, r
    eye = np.eye(n)
    while hi - lo > tol * r:
        mid = 0.5 * (lo + hi)
        if _negative_pivots(Q - mid * eye) >= 1:
            hi = mid
        else:
            lo = mid
    return 0.5 * (lo + hi)
