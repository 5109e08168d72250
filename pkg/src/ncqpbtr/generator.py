"""Deterministic random problem instances.

Random numbers come from xoshiro256** seeded through splitmix64, and all
arithmetic on the generation path is plain Python float arithmetic with
``math.fsum`` for the matrix product, so identical parameters give
bit-identical problems on every platform.

``Q = M'M + q_min_eig * I`` with ``M`` of shape ``(n-1, n)`` and entries
uniform in ``[-1, 1]``. Because ``M'M`` is singular, ``q_min_eig`` is the
smallest eigenvalue of ``Q``. ``tau_F`` is raised until the convexity
certificate for ``psi`` holds with a 10% margin.
"""

from dataclasses import dataclass
import math

from .errors import BadParameters
from .problem import ProblemSpec

MASK64 = (1 << 64) - 1
CONVEXITY_MARGIN = 1.1


def splitmix64(state):
    """Advance a splitmix64 state; return ``(new_state, output)``."""
    state = (state + 0x9E3779B97F4A7C15) & MASK64
    z = state
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
    return state, z ^ (z >> 31)


def _rotl(x, k):
    return ((x << k) | (x >> (64 - k))) & MASK64


class Xoshiro256:
    """xoshiro256** 1.0 generator."""

    def __init__(self, seed=0, state=None):
        if state is None:
            s = seed & MASK64
            state = []
            for _ in range(4):
                s, z = splitmix64(s)
                state.append(z)
        self.s = list(state)

    def next_u64(self):
        s0, s1, s2, s3 = self.s
        result = (_rotl((s1 * 5) & MASK64, 7) * 9) & MASK64
        t = (s1 << 17) & MASK64
        s2 ^= s0
        s3 ^= s1
        s1 ^= s2
        s0 ^= s3
        s2 ^= t
        s3 = _rotl(s3, 45)
        self.s = [s0, s1, s2, s3]
        return result

    def random(self):
        """Float in ``[0, 1)`` from the top 53 bits."""
        return (self.next_u64() >> 11) * 2.0 ** -53

    def uniform(self, a, b):
        return a + (b - a) * self.random()


@dataclass(frozen=True)
class GenParams:
    n: int
    seed: int = 0
    q_min_eig: float = -0.5
    box_scale: float = 2.0
    delta: float = 1.0
    tau_F: float = 0.5
    pi_F: float = 0.05
    tightness: float = 0.5

    def check(self):
        if isinstance(self.n, bool) or int(self.n) != self.n or self.n < 1:
            raise BadParameters(f"n must be a positive integer, got {self.n!r}")
        for key in ("q_min_eig", "box_scale", "delta", "tau_F", "pi_F", "tightness"):
            if not math.isfinite(getattr(self, key)):
                raise BadParameters(f"{key} must be finite")
        if self.box_scale < 0:
            raise BadParameters("box_scale must be nonnegative")
        if not (self.delta > 0 and self.tau_F > 0 and self.pi_F > 0):
            raise BadParameters("delta, tau_F and pi_F must be positive")
        if not 0 <= self.tightness < 1:
            raise BadParameters("tightness must lie in [0, 1)")


def required_tau_F(q_min_eig, max_width):
    """Smallest ``tau_F`` (with 10% margin) certifying convexity of ``psi``
    when ``lambda_min(Q) = q_min_eig`` and the widest box side is ``max_width``."""
    if q_min_eig >= 0:
        return 0.0
    return CONVEXITY_MARGIN * (-q_min_eig) * max_width ** 2 / 4.0


def generate(params):
    """Build a :class:`ProblemSpec` from ``params``.

    Every coordinate interval of the domain has length at least
    ``2 * delta * (1 - tightness)``; with probability 1/2 per side the box
    reaches up to ``box_scale`` beyond that interval.
    """
    params.check()
    n, delta = int(params.n), float(params.delta)
    rng = Xoshiro256(params.seed)

    M = [[rng.uniform(-1.0, 1.0) for _ in range(n)] for _ in range(n - 1)]
    Q = [[math.fsum(M[k][i] * M[k][j] for k in range(n - 1)) for j in range(n)] for i in range(n)]
    for i in range(n):
        Q[i][i] += params.q_min_eig
    c = [rng.uniform(-1.0, 1.0) for _ in range(n)]

    x_L, x_R = [], []
    for _ in range(n):
        width = 2.0 * delta * (1.0 - params.tightness * rng.random())
        lo = -delta + rng.random() * (2.0 * delta - width)
        hi = lo + width
        if rng.random() < 0.5:
            lo -= params.box_scale * rng.random()
        if rng.random() < 0.5:
            hi += params.box_scale * rng.random()
        x_L.append(lo)
        x_R.append(hi)

    max_width = max(r - l for l, r in zip(x_L, x_R))
    tau_F = max(params.tau_F, required_tau_F(params.q_min_eig, max_width))
    pi_F = min(params.pi_F, tau_F)
    return ProblemSpec(Q=Q, c=c, x_L=x_L, x_R=x_R, delta=delta, tau_F=tau_F, pi_F=pi_F,
                       name=f"gen-n{n}-seed{params.seed}")
