"""Problem data, domain geometry and the objective/barrier functions.

All objectives handled by the solver are of the form::

    quad * qhat(x) + box * Gamma_LR(x) + trust * Gamma_Delta(x)

with ``qhat(x) = x'Qx/2 + c'x``, the box barrier
``Gamma_LR(x) = -sum(log(x - x_L) + log(x_R - x))`` and the trust-region
barrier ``Gamma_Delta(x) = -sum(log(Delta + x) + log(Delta - x))``.
:class:`Objective` stores the three coefficients and evaluates values,
gradients and Hessians analytically. Evaluating outside the open domain of
an active barrier returns ``inf``.
"""

from dataclasses import dataclass, field
from enum import Enum
import math
import warnings

import numpy as np

from .errors import BadBounds, BadParameters, InfeasibleDomain, NonFinite, ProblemError
from .linalg import min_eigenvalue

ASYMMETRY_RTOL = 1e-12


def _frozen(a):
    a = np.array(a, dtype=float)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class ProblemSpec:
    """One problem instance.

    ``Q`` is symmetrized on construction; ``asymmetry`` keeps the relative
    size of the discarded skew part.
    """

    Q: np.ndarray
    c: np.ndarray
    x_L: np.ndarray
    x_R: np.ndarray
    delta: float
    tau_F: float
    pi_F: float
    name: str = None
    asymmetry: float = field(init=False, default=0.0)

    def __post_init__(self):
        c = _frozen(self.c).reshape(-1)
        n = c.size
        Q = np.array(self.Q, dtype=float)
        if Q.size != n * n:
            raise ProblemError(f"Q has {Q.size} entries, expected {n * n}")
        Q = Q.reshape(n, n)
        skew = float(np.max(np.abs(Q - Q.T))) if n else 0.0
        scale = float(np.max(np.abs(Q))) if n else 0.0
        asym = skew / scale if scale > 0 else 0.0
        if asym > ASYMMETRY_RTOL:
            warnings.warn(f"Q is not symmetric (relative skew {asym:.3g}); using (Q+Q')/2")
        object.__setattr__(self, "Q", _frozen(0.5 * (Q + Q.T)))
        object.__setattr__(self, "c", c)
        for key in ("x_L", "x_R"):
            v = _frozen(getattr(self, key)).reshape(-1)
            if v.size != n:
                raise ProblemError(f"{key} has {v.size} entries, expected {n}")
            object.__setattr__(self, key, v)
        for key in ("delta", "tau_F", "pi_F"):
            object.__setattr__(self, key, float(getattr(self, key)))
        object.__setattr__(self, "asymmetry", asym)

    @property
    def n(self):
        return self.c.size

    def replace(self, **changes):
        kw = dict(Q=self.Q, c=self.c, x_L=self.x_L, x_R=self.x_R, delta=self.delta,
                  tau_F=self.tau_F, pi_F=self.pi_F, name=self.name)
        kw.update(changes)
        return ProblemSpec(**kw)

    def identical(self, other):
        """Bitwise equality of all numeric data."""
        return (
            all(np.array_equal(getattr(self, k), getattr(other, k)) for k in ("Q", "c", "x_L", "x_R"))
            and (self.delta, self.tau_F, self.pi_F) == (other.delta, other.tau_F, other.pi_F)
        )


@dataclass(frozen=True, eq=False)
class DomainGeometry:
    """Intersection of box and trust region: ``lower < x < upper``."""

    lower: np.ndarray
    upper: np.ndarray
    shortest_side: float

    @property
    def n(self):
        return self.lower.size

    @property
    def midpoint(self):
        return 0.5 * (self.lower + self.upper)

    def contains(self, x):
        x = np.asarray(x, dtype=float)
        return bool(np.all(x > self.lower) and np.all(x < self.upper))


def validate(spec):
    """Check a problem instance and compute its domain geometry.

    Raises
    ------
    NonFinite, BadParameters, BadBounds, InfeasibleDomain
    """
    arrays = (spec.Q, spec.c, spec.x_L, spec.x_R)
    scalars = (spec.delta, spec.tau_F, spec.pi_F)
    if not all(np.all(np.isfinite(a)) for a in arrays) or not all(map(math.isfinite, scalars)):
        raise NonFinite("problem data contains NaN or infinite entries")
    if spec.n < 1:
        raise BadParameters("dimension n must be at least 1")
    if not spec.delta > 0:
        raise BadParameters(f"trust-region radius must be positive, got {spec.delta}")
    if not (spec.tau_F >= spec.pi_F > 0):
        raise BadParameters(f"need tau_F >= pi_F > 0, got tau_F={spec.tau_F}, pi_F={spec.pi_F}")
    bad = np.flatnonzero(~(spec.x_L < spec.x_R))
    if bad.size:
        raise BadBounds(f"x_L[j] >= x_R[j] for j in {bad.tolist()}")
    lower = np.maximum(-spec.delta, spec.x_L)
    upper = np.minimum(spec.delta, spec.x_R)
    shortest = float(np.min(upper - lower))
    if not shortest > 0:
        j = int(np.argmin(upper - lower))
        raise InfeasibleDomain(
            f"infeasible: box and trust region do not overlap in coordinate {j} "
            f"(lower {lower[j]!r} >= upper {upper[j]!r})")
    return DomainGeometry(_frozen(lower), _frozen(upper), shortest)


class Objective:
    """``quad * qhat + box * Gamma_LR + trust * Gamma_Delta`` for one problem.

    ``barrier_weight`` defaults to ``2n * (box + trust)``, i.e. the total
    constraint weight of the barrier part when every log term carries the
    same coefficient.
    """

    def __init__(self, spec, geometry, quad=0.0, box=0.0, trust=0.0, barrier_weight=None, name=""):
        self.spec = spec
        self.geometry = geometry
        self.quad = float(quad)
        self.box = float(box)
        self.trust = float(trust)
        if barrier_weight is None:
            barrier_weight = 2 * spec.n * (self.box + self.trust)
        self.barrier_weight = float(barrier_weight)
        self.name = name

    def __repr__(self):
        return (f"Objective({self.name or '?'}: quad={self.quad!r}, box={self.box!r}, "
                f"trust={self.trust!r}, |Gamma|={self.barrier_weight!r})")

    def scaled(self, k):
        return Objective(self.spec, self.geometry, k * self.quad, k * self.box, k * self.trust,
                         k * self.barrier_weight, name=f"{k!r}*{self.name}")

    def divided(self, tau):
        return Objective(self.spec, self.geometry, self.quad / tau, self.box / tau, self.trust / tau,
                         self.barrier_weight / tau, name=f"{self.name}/{tau!r}")

    def __add__(self, other):
        if other.spec is not self.spec:
            raise ValueError("cannot add objectives of different problems")
        return Objective(self.spec, self.geometry, self.quad + other.quad, self.box + other.box,
                         self.trust + other.trust, self.barrier_weight + other.barrier_weight,
                         name=f"{self.name}+{other.name}")

    def in_domain(self, x):
        x = np.asarray(x, dtype=float)
        s = self.spec
        if not np.all(np.isfinite(x)):
            return False
        if self.box and not (np.all(x > s.x_L) and np.all(x < s.x_R)):
            return False
        if self.trust and not np.all(np.abs(x) < s.delta):
            return False
        return True

    def value(self, x):
        x = np.asarray(x, dtype=float)
        s = self.spec
        if not np.all(np.isfinite(x)):
            return math.inf
        total = 0.0
        if self.quad:
            total += self.quad * (0.5 * (x @ (s.Q @ x)) + s.c @ x)
        if self.box:
            a = x - s.x_L
            b = s.x_R - x
            if np.any(a <= 0) or np.any(b <= 0):
                return math.inf
            total -= self.box * (np.sum(np.log(a)) + np.sum(np.log(b)))
        if self.trust:
            a = s.delta + x
            b = s.delta - x
            if np.any(a <= 0) or np.any(b <= 0):
                return math.inf
            total -= self.trust * (np.sum(np.log(a)) + np.sum(np.log(b)))
        return float(total)

    __call__ = value

    def gradient(self, x):
        x = np.asarray(x, dtype=float)
        s = self.spec
        g = np.zeros(s.n)
        if self.quad:
            g += self.quad * (s.Q @ x + s.c)
        if self.box:
            g += self.box * (1.0 / (s.x_R - x) - 1.0 / (x - s.x_L))
        if self.trust:
            g += self.trust * (1.0 / (s.delta - x) - 1.0 / (s.delta + x))
        return g

    def barrier_curvature(self, x):
        """Diagonal of the Hessian of the barrier terms."""
        x = np.asarray(x, dtype=float)
        s = self.spec
        d = np.zeros(s.n)
        if self.box:
            d += self.box * (1.0 / (x - s.x_L) ** 2 + 1.0 / (s.x_R - x) ** 2)
        if self.trust:
            d += self.trust * (1.0 / (s.delta + x) ** 2 + 1.0 / (s.delta - x) ** 2)
        return d

    def hessian(self, x):
        H = self.quad * self.spec.Q if self.quad else np.zeros((self.spec.n, self.spec.n))
        return H + np.diag(self.barrier_curvature(x))


def make_qhat(spec, geometry=None):
    return Objective(spec, geometry, quad=1.0, name="qhat")


def make_barrier(kind, spec, geometry=None):
    """Logarithmic barrier of the box (``"box"``), the trust region
    (``"trust"``) or both (``"hat"``)."""
    coeffs = {"box": (1.0, 0.0), "trust": (0.0, 1.0), "hat": (1.0, 1.0)}
    if kind not in coeffs:
        raise ValueError(f"unknown barrier kind {kind!r}")
    box, trust = coeffs[kind]
    return Objective(spec, geometry, box=box, trust=trust, name=f"Gamma_{kind}")


def make_phi1(spec, geometry=None):
    f = make_barrier("hat", spec, geometry)
    f.name = "phi1"
    return f


def make_phi2(spec, geometry, tau):
    """``16/tau * qhat + 16 * Gamma_hat``; self-concordant for ``tau >= tau_F``.

    The barrier weight reported is that of ``16 * Gamma_hat``, i.e. ``64 n``.
    """
    if not tau >= spec.tau_F:
        raise BadParameters(f"phi2 needs tau >= tau_F = {spec.tau_F}, got {tau}")
    return Objective(spec, geometry, quad=16.0 / tau, box=16.0, trust=16.0,
                     barrier_weight=64 * spec.n, name=f"phi2[tau={tau!r}]")


def make_phi3(spec, geometry, pi):
    """``16/pi * qhat + 16 tau_F/pi * Gamma_LR + 16 * Gamma_Delta`` for
    ``0 < pi <= tau_F``.

    The barrier weight reported is that of ``16 * Gamma_Delta``, i.e. ``32 n``.
    """
    if not (0 < pi <= spec.tau_F):
        raise BadParameters(f"phi3 needs 0 < pi <= tau_F = {spec.tau_F}, got {pi}")
    return Objective(spec, geometry, quad=16.0 / pi, box=16.0 * spec.tau_F / pi, trust=16.0,
                     barrier_weight=32 * spec.n, name=f"phi3[pi={pi!r}]")


def make_Phi(spec, geometry=None):
    return Objective(spec, geometry, quad=1.0, box=spec.tau_F, trust=spec.pi_F,
                     barrier_weight=2 * spec.n, name="Phi")


def make_psi(spec, geometry=None):
    return Objective(spec, geometry, quad=1.0, box=0.5 * spec.tau_F, name="psi")


def make_coordinate_barrier(spec, j):
    """Scalar barrier of coordinate ``j``: box and trust-region logs only.

    Returned as an :class:`Objective` over a one-dimensional sub-problem.
    """
    sub = ProblemSpec(Q=[[0.0]], c=[0.0], x_L=[spec.x_L[j]], x_R=[spec.x_R[j]],
                      delta=spec.delta, tau_F=spec.tau_F, pi_F=spec.pi_F, name=f"coord{j}")
    f = make_phi1(sub, validate(sub))
    f.name = f"Gamma_{j}"
    return f


def eval_Phi(spec, geometry, x):
    return make_Phi(spec, geometry).value(x)


def eval_psi(spec, x):
    return make_psi(spec).value(x)


class Convexity(str, Enum):
    CERTIFIED = "Certified"
    UNKNOWN = "Unknown"


def psi_convexity_margin(spec):
    """``lambda_min(Q) + 4 tau_F / max_j (x_R - x_L)_j**2``.

    Over the box every diagonal entry of the barrier Hessian of ``psi`` is
    at least ``4 tau_F / w_j**2``, so a nonnegative margin proves convexity.
    """
    w = np.max(spec.x_R - spec.x_L)
    return min_eigenvalue(spec.Q) + 4.0 * spec.tau_F / (w * w)


def check_psi_convexity(spec, geometry=None):
    return Convexity.CERTIFIED if psi_convexity_margin(spec) >= 0 else Convexity.UNKNOWN
