"""Local objective families for the simulated agents.

Every agent ``i`` owns a private, smooth, strongly convex cost ``f_i`` and the
network as a whole minimizes the sum of the ``f_i``.  Two families are
provided:

* least squares, ``f_i(x) = 0.5 ||A_i' x - b_i||^2 + 0.5 mu ||x||^2`` with a
  per-agent ``p x m`` data matrix ``A_i`` holding one sample per column;
* regularized logistic regression, ``f_i(x) = (1/m) sum_j ln(1 + exp(-y_ij
  h_ij' x)) + 0.5 mu ||x||^2`` over ``m`` labeled feature vectors per agent.

Both expose the same duck-typed protocol consumed by the optimizer steps:
``n_agents``, ``dim``, ``value(i, x)``, ``gradient(i, x)``,
``gradient_all(xs)`` for per-agent iterates stacked as an ``(n, p)`` array,
and ``global_gradient(x)`` for the average gradient at a common point.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np
from scipy.special import expit

from .errors import NORM_GUARD, DivergenceError

__all__ = [
    "QuadraticProblem",
    "LogisticProblem",
    "ConvexityBounds",
    "estimate_bounds",
    "centralized_gd_optimum",
    "GdResult",
]


@dataclass(frozen=True)
class QuadraticProblem:
    """Distributed least squares with ridge term.

    Parameters
    ----------
    a : ndarray, shape (n, p, m)
        Per-agent data matrices, one sample per column.
    b : ndarray, shape (n, m)
        Per-agent targets.
    mu : float
        Ridge weight, nonnegative.
    """

    a: np.ndarray
    b: np.ndarray
    mu: float

    def __post_init__(self):
        a = np.asarray(self.a, dtype=float)
        b = np.asarray(self.b, dtype=float)
        if a.ndim != 3:
            raise ValueError(f"data tensor must be (n, p, m), got shape {a.shape}")
        if b.shape != (a.shape[0], a.shape[2]):
            raise ValueError(f"targets shape {b.shape} does not match data {a.shape}")
        if self.mu < 0:
            raise ValueError(f"mu must be nonnegative, got {self.mu}")
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)

    @property
    def n_agents(self) -> int:
        return self.a.shape[0]

    @property
    def dim(self) -> int:
        return self.a.shape[1]

    @property
    def m(self) -> int:
        return self.a.shape[2]

    def value(self, i: int, x: np.ndarray) -> float:
        r = self.a[i].T @ x - self.b[i]
        return 0.5 * float(r @ r) + 0.5 * self.mu * float(x @ x)

    def gradient(self, i: int, x: np.ndarray) -> np.ndarray:
        return self.a[i] @ (self.a[i].T @ x - self.b[i]) + self.mu * x

    def gradient_all(self, xs: np.ndarray) -> np.ndarray:
        """Per-agent gradients, agent ``i`` evaluated at row ``xs[i]``."""
        r = np.einsum("ipm,ip->im", self.a, xs) - self.b
        return np.einsum("ipm,im->ip", self.a, r) + self.mu * xs

    def global_gradient(self, x: np.ndarray) -> np.ndarray:
        """Average gradient ``(1/n) sum_i grad f_i(x)`` at a common point."""
        r = np.einsum("ipm,p->im", self.a, x) - self.b
        return np.einsum("ipm,im->p", self.a, r) / self.n_agents + self.mu * x

    def optimum(self) -> np.ndarray:
        """Closed-form minimizer of ``sum_i f_i``.

        Solves ``(sum_i A_i A_i' + n mu I) x = sum_i A_i b_i``.  Raises
        ``numpy.linalg.LinAlgError`` when the system is singular, which can
        only happen at ``mu = 0`` with rank-deficient data.
        """
        h = np.einsum("ipm,iqm->pq", self.a, self.a)
        h += self.n_agents * self.mu * np.eye(self.dim)
        rhs = np.einsum("ipm,im->p", self.a, self.b)
        return np.linalg.solve(h, rhs)


@dataclass(frozen=True)
class LogisticProblem:
    """Distributed l2-regularized logistic regression.

    Parameters
    ----------
    features : ndarray, shape (n, m, p)
        Per-agent feature vectors, one sample per row.
    labels : ndarray, shape (n, m)
        Binary labels in ``{-1, +1}``.
    mu : float
        Regularization weight, nonnegative.
    """

    features: np.ndarray
    labels: np.ndarray
    mu: float

    def __post_init__(self):
        h = np.asarray(self.features, dtype=float)
        y = np.asarray(self.labels, dtype=float)
        if h.ndim != 3:
            raise ValueError(f"features must be (n, m, p), got shape {h.shape}")
        if y.shape != h.shape[:2]:
            raise ValueError(f"labels shape {y.shape} does not match features {h.shape}")
        if not np.all(np.isin(y, (-1.0, 1.0))):
            raise ValueError("labels must be -1 or +1")
        if self.mu < 0:
            raise ValueError(f"mu must be nonnegative, got {self.mu}")
        object.__setattr__(self, "features", h)
        object.__setattr__(self, "labels", y)

    @property
    def n_agents(self) -> int:
        return self.features.shape[0]

    @property
    def dim(self) -> int:
        return self.features.shape[2]

    @property
    def m(self) -> int:
        return self.features.shape[1]

    def value(self, i: int, x: np.ndarray) -> float:
        # logaddexp(0, z) is the overflow-safe softplus log(1 + exp(z))
        z = -self.labels[i] * (self.features[i] @ x)
        loss = float(np.logaddexp(0.0, z).mean())
        return loss + 0.5 * self.mu * float(x @ x)

    def gradient(self, i: int, x: np.ndarray) -> np.ndarray:
        z = -self.labels[i] * (self.features[i] @ x)
        s = expit(z)
        g = -(self.features[i].T @ (self.labels[i] * s)) / self.m
        return g + self.mu * x

    def gradient_all(self, xs: np.ndarray) -> np.ndarray:
        z = -self.labels * np.einsum("imp,ip->im", self.features, xs)
        s = expit(z)
        g = -np.einsum("imp,im->ip", self.features, self.labels * s) / self.m
        return g + self.mu * xs

    def global_gradient(self, x: np.ndarray) -> np.ndarray:
        z = -self.labels * np.einsum("imp,p->im", self.features, x)
        s = expit(z)
        g = -np.einsum("imp,im->p", self.features, self.labels * s) / self.m
        return g / self.n_agents + self.mu * x


@dataclass(frozen=True)
class ConvexityBounds:
    """Strong-convexity and smoothness constants shared by all agents.

    Invariant: ``0 < mu_est <= L_est``.
    """

    mu_est: float
    L_est: float

    def __post_init__(self):
        if not (0.0 < self.mu_est <= self.L_est):
            raise ValueError(
                f"bounds must satisfy 0 < mu_est <= L_est, got ({self.mu_est}, {self.L_est})"
            )


def estimate_bounds(problem) -> ConvexityBounds:
    """Uniform convexity constants valid for every agent's objective.

    For least squares the per-agent Hessian is ``A_i A_i' + mu I`` exactly, so
    ``mu_est = mu + min_i lambda_min(A_i A_i')`` and ``L_est = mu + max_i
    lambda_max(A_i A_i')``.  For logistic regression the loss curvature lies
    between 0 and ``(1/(4m)) lambda_max(sum_j h_ij h_ij')``, giving
    ``mu_est = mu`` and ``L_est`` equal to ``mu`` plus the worst-case data
    bound.

    Raises
    ------
    ValueError
        If the estimates violate ``0 < mu_est <= L_est``, e.g. an
        unregularized logistic problem.
    """
    if isinstance(problem, QuadraticProblem):
        gram = np.einsum("ipm,iqm->ipq", problem.a, problem.a)
        eigs = np.linalg.eigvalsh(gram)
        lo = max(float(eigs[:, 0].min()), 0.0)
        hi = float(eigs[:, -1].max())
        return ConvexityBounds(problem.mu + lo, problem.mu + hi)
    if isinstance(problem, LogisticProblem):
        gram = np.einsum("imp,imq->ipq", problem.features, problem.features)
        eigs = np.linalg.eigvalsh(gram)
        hi = float(eigs[:, -1].max()) / (4.0 * problem.m)
        return ConvexityBounds(problem.mu, problem.mu + hi)
    raise TypeError(f"no bound rule for problem type {type(problem).__name__}")


class GdResult(NamedTuple):
    """Outcome of :func:`centralized_gd_optimum`."""

    x: np.ndarray
    grad_norm: float


def centralized_gd_optimum(problem, alpha: float, iters: int) -> GdResult:
    """Reference minimizer by full-gradient descent on the average objective.

    Runs ``x <- x - alpha * (1/n) sum_i grad f_i(x)`` from the origin for
    ``iters`` steps and reports the final iterate together with the final
    average-gradient norm, which measures the quality of the fixed point.
    The step size should respect ``alpha <= 1 / (2 L_est)``.

    Raises
    ------
    DivergenceError
        If an iterate becomes non-finite or its norm passes ``1e12``, the
        usual sign that ``alpha`` is too large.
    """
    if iters < 1:
        raise ValueError(f"iters must be at least 1, got {iters}")
    x = np.zeros(problem.dim)
    for t in range(iters):
        x = x - alpha * problem.global_gradient(x)
        if not np.all(np.isfinite(x)):
            raise DivergenceError(t + 1)
        norm = float(np.linalg.norm(x))
        if norm > NORM_GUARD:
            raise DivergenceError(t + 1, norm)
    return GdResult(x, float(np.linalg.norm(problem.global_gradient(x))))
