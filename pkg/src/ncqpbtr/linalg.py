"""Small dense symmetric linear algebra used by the Newton steps.

Everything here works on plain ``numpy`` arrays; nothing is sparse.
"""

from dataclasses import dataclass
import math

import numpy as np

from .errors import NotPositiveDefinite

PIVOT_FLOOR = 1e-300


@dataclass(frozen=True)
class SpdFactorization:
    """Lower Cholesky factor ``L`` with ``L @ L.T == A``."""

    L: np.ndarray

    def solve(self, b):
        L = self.L
        n = L.shape[0]
        b = np.asarray(b, dtype=float)
        y = np.empty(n)
        for i in range(n):
            y[i] = (b[i] - L[i, :i] @ y[:i]) / L[i, i]
        x = np.empty(n)
        for i in range(n - 1, -1, -1):
            x[i] = (y[i] - L[i + 1:, i] @ x[i + 1:]) / L[i, i]
        return x


def cholesky(A):
    """Factor a symmetric positive definite matrix.

    Raises
    ------
    NotPositiveDefinite
        If a pivot is not larger than ``1e-300`` (or is NaN).
    """
    A = np.asarray(A, dtype=float)
    n = A.shape[0]
    if A.shape != (n, n):
        raise ValueError("A must be square")
    L = np.zeros((n, n))
    for j in range(n):
        row = L[j, :j]
        pivot = A[j, j] - row @ row
        if not pivot > PIVOT_FLOOR:
            raise NotPositiveDefinite(f"pivot {pivot!r} at index {j}")
        d = math.sqrt(pivot)
        L[j, j] = d
        if j + 1 < n:
            L[j + 1:, j] = (A[j + 1:, j] - L[j + 1:, :j] @ row) / d
    return SpdFactorization(L)


def cholesky_solve(A, b):
    """Solve ``A x = b`` for symmetric positive definite ``A``."""
    return cholesky(A).solve(b)


def spectral_norm_upper_bound(Q):
    """Frobenius norm of ``Q``; never smaller than the spectral norm."""
    Q = np.asarray(Q, dtype=float)
    return float(math.sqrt(np.sum(Q * Q)))


def symmetric_eigenvalues(Q, rtol=1e-10, max_sweeps=100):
    """Eigenvalues of a symmetric matrix by cyclic Jacobi rotations.

    Sweeps stop once the off-diagonal Frobenius norm is at most
    ``rtol * ||Q||_F``. Returned in ascending order.
    """
    A = np.array(Q, dtype=float)
    n = A.shape[0]
    if A.shape != (n, n):
        raise ValueError("Q must be square")
    A = 0.5 * (A + A.T)
    target = rtol * spectral_norm_upper_bound(A)
    for _ in range(max_sweeps):
        off = math.sqrt(max(np.sum(A * A) - np.sum(np.diag(A) ** 2), 0.0))
        if off <= target:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = A[p, q]
                if apq == 0.0:
                    continue
                h = A[q, q] - A[p, p]
                if abs(h) + 100.0 * abs(apq) == abs(h):
                    t = apq / h
                else:
                    theta = 0.5 * h / apq
                    t = math.copysign(1.0, theta) / (abs(theta) + math.hypot(theta, 1.0))
                c = 1.0 / math.sqrt(t * t + 1.0)
                s = t * c
                cp, cq = A[:, p].copy(), A[:, q].copy()
                A[:, p] = c * cp - s * cq
                A[:, q] = s * cp + c * cq
                rp, rq = A[p, :].copy(), A[q, :].copy()
                A[p, :] = c * rp - s * rq
                A[q, :] = s * rp + c * rq
                A[p, q] = A[q, p] = 0.0
    return np.sort(np.diag(A))


def min_eigenvalue(Q):
    """Smallest eigenvalue of the symmetric matrix ``Q``."""
    return float(symmetric_eigenvalues(Q)[0])


def spectral_norm(Q):
    """Exact spectral norm of a symmetric matrix (largest absolute eigenvalue)."""
    ev = symmetric_eigenvalues(Q)
    return float(max(abs(ev[0]), abs(ev[-1]))) if ev.size else 0.0
