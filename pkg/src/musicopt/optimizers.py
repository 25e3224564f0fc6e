"""Decentralized first-order update rules.

All algorithms share one shape of state: each agent ``i`` holds an iterate
``x_i`` (row ``i`` of ``state.x``), a post-gradient value ``v_i``, and, for
the bias-corrected family, a correction anchor.  One call to a step function
advances every agent by a single iteration ``t -> t + 1`` and maintains the
two cost counters: ``grad_evals`` grows by one per iteration (each agent
computes exactly one local gradient), ``comm_rounds`` grows by one exactly
when a combination is performed, so after ``t`` iterations of a multi-update
scheme with period ``E`` it equals ``floor(t / E)``.

Update rules, with ``a = alpha(t)`` and ``g_i = grad f_i(x_i^t)``:

* ``dgd``:            ``x_i <- sum_j w_ij x_j - a g_i``
* ``atc``:            ``v_i <- x_i - a g_i``; ``x_i <- sum_j w_ij v_j``
* ``inexact_music``:  ``v_i <- x_i - a g_i``; then ``x_i <- v_i`` on inner
  iterations, ``x_i <- sum_j w_ij v_j`` when ``t + 1`` is a multiple of ``E``
* ``exact_diffusion``: ``v_i <- x_i - a g_i``;
  ``x_i <- sum_j wb_ij (v_j^{new} + x_j - v_j^{old})``
* ``exact_music``:    ``v_i <- x_i - a g_i``; inner ``x_i <- v_i + c_i``,
  combination ``x_i <- sum_j wb_ij (v_j + c_j)`` followed by the anchor
  refresh ``c_i <- beta (x_i - v_i)``
* ``easgd_like``:     like ``exact_music`` but inner iterations drop the
  anchor (``x_i <- v_i``)

``wb`` denotes the half-identity-shifted matrix ``(W + I) / 2``; the exact
family requires it, the first three use ``W`` itself.  Combination sums are
evaluated in ascending agent-index order (a plain ``einsum`` contraction), so
repeated runs are bit-for-bit reproducible.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import NORM_GUARD, DivergenceError
from .objectives import ConvexityBounds
from .topology import MixingMatrix

__all__ = [
    "ALGORITHM_KINDS",
    "StepSchedule",
    "AlgorithmConfig",
    "NetworkState",
    "init_state",
    "step_dgd",
    "step_atc",
    "step_inexact_music",
    "step_exact_diffusion",
    "step_exact_music",
    "step_easgd_like",
    "advance",
    "stability_check",
]

ALGORITHM_KINDS = (
    "dgd",
    "atc",
    "inexact_music",
    "exact_diffusion",
    "exact_music",
    "easgd_like",
)

# Kinds whose update has no multi-update period; E is pinned to 1 for them.
SINGLE_UPDATE_KINDS = ("dgd", "atc", "exact_diffusion")


@dataclass(frozen=True)
class StepSchedule:
    """Step-size rule ``alpha(t)``.

    ``constant`` returns ``alpha0`` for every ``t``; ``diminishing`` returns
    ``alpha0 / (t + 1) ** delta`` so the first step (``t = 0``) divides by 1.
    ``delta`` must lie in ``(0, 2)``.
    """

    kind: str
    alpha0: float
    delta: float | None = None

    def __post_init__(self):
        if self.kind not in ("constant", "diminishing"):
            raise ValueError(f"unknown schedule kind {self.kind!r}")
        if not self.alpha0 > 0:
            raise ValueError(f"alpha0 must be positive, got {self.alpha0}")
        if self.kind == "diminishing":
            if self.delta is None or not (0.0 < self.delta < 2.0):
                raise ValueError(f"delta must lie in (0, 2), got {self.delta}")
        elif self.delta is not None:
            raise ValueError("constant schedule takes no delta")

    @classmethod
    def constant(cls, alpha0: float) -> "StepSchedule":
        return cls("constant", alpha0)

    @classmethod
    def diminishing(cls, alpha0: float, delta: float) -> "StepSchedule":
        return cls("diminishing", alpha0, delta)

    def at(self, t: int) -> float:
        """Step size used by iteration ``t -> t + 1``."""
        if t < 0:
            raise ValueError(f"iteration index must be nonnegative, got {t}")
        if self.kind == "constant":
            return self.alpha0
        return self.alpha0 / (t + 1) ** self.delta


@dataclass(frozen=True)
class AlgorithmConfig:
    """One algorithm choice: kind, local-update period, anchor gain, schedule."""

    kind: str
    schedule: StepSchedule
    E: int = 1
    beta: float = 0.0

    def __post_init__(self):
        if self.kind not in ALGORITHM_KINDS:
            raise ValueError(f"unknown algorithm kind {self.kind!r}")
        if self.E < 1:
            raise ValueError(f"E must be at least 1, got {self.E}")
        if self.kind in SINGLE_UPDATE_KINDS and self.E != 1:
            raise ValueError(f"{self.kind} performs one update per combination; E must be 1")
        if self.kind in ("exact_music", "easgd_like") and not (0.0 <= self.beta <= 1.0):
            raise ValueError(f"beta must lie in [0, 1], got {self.beta}")


@dataclass
class NetworkState:
    """Per-agent iterates and counters, one row per agent.

    ``x`` holds the current iterates, ``v`` the latest post-gradient values,
    ``anchor`` the bias-correction terms (zero outside the exact family).
    """

    x: np.ndarray
    v: np.ndarray
    anchor: np.ndarray
    t: int = 0
    comm_rounds: int = 0
    grad_evals: int = 0


def init_state(n_agents: int, dim: int) -> NetworkState:
    """All agents start from the origin; ``v = x`` makes the first correction zero."""
    x = np.zeros((n_agents, dim))
    return NetworkState(x=x, v=x.copy(), anchor=np.zeros((n_agents, dim)))


def combine(w: MixingMatrix, values: np.ndarray) -> np.ndarray:
    """One combination: row ``i`` becomes ``sum_j w_ij values[j]``.

    The plain (non-optimized) einsum contraction accumulates over ``j`` in
    ascending order, which pins the floating-point result.
    """
    return np.einsum("ij,jp->ip", w.w, values, optimize=False)


def _checked(candidate: np.ndarray, t_next: int) -> np.ndarray:
    """Divergence guard applied before any candidate iterate is committed."""
    if not np.all(np.isfinite(candidate)):
        raise DivergenceError(t_next)
    norm = float(np.linalg.norm(candidate))
    if norm > NORM_GUARD:
        raise DivergenceError(t_next, norm)
    return candidate


def step_dgd(
    state: NetworkState, problem, w: MixingMatrix, schedule: StepSchedule
) -> NetworkState:
    """Combine-then-adapt step with the gradient taken at the pre-combination iterate."""
    a = schedule.at(state.t)
    g = problem.gradient_all(state.x)
    x_new = _checked(combine(w, state.x) - a * g, state.t + 1)
    state.x = x_new
    state.t += 1
    state.comm_rounds += 1
    state.grad_evals += 1
    return state


def step_atc(
    state: NetworkState, problem, w: MixingMatrix, schedule: StepSchedule
) -> NetworkState:
    """Adapt-then-combine step: local gradient descent, then neighbor averaging."""
    a = schedule.at(state.t)
    v_new = state.x - a * problem.gradient_all(state.x)
    x_new = _checked(combine(w, v_new), state.t + 1)
    state.v = v_new
    state.x = x_new
    state.t += 1
    state.comm_rounds += 1
    state.grad_evals += 1
    return state


def step_inexact_music(
    state: NetworkState, problem, w: MixingMatrix, config: AlgorithmConfig
) -> NetworkState:
    """Multi-update single-combination step without bias correction.

    Runs a local gradient update every iteration and combines only when
    ``t + 1`` is a multiple of ``config.E``.  With ``E = 1`` every iteration
    combines and the rule coincides with :func:`step_atc`.
    """
    a = config.schedule.at(state.t)
    v_new = state.x - a * problem.gradient_all(state.x)
    combining = (state.t + 1) % config.E == 0
    x_new = _checked(combine(w, v_new) if combining else v_new, state.t + 1)
    state.v = v_new
    state.x = x_new
    state.t += 1
    state.grad_evals += 1
    if combining:
        state.comm_rounds += 1
    return state


def step_exact_diffusion(
    state: NetworkState, problem, w_bar: MixingMatrix, schedule: StepSchedule
) -> NetworkState:
    """Bias-corrected diffusion step: adapt, correct by ``x - v_old``, combine.

    Requires ``v`` initialized to ``x`` (as :func:`init_state` does) so the
    first correction vanishes and the first iteration reduces to
    :func:`step_atc` under ``w_bar``.  Converges to the exact optimum under a
    constant step size.
    """
    a = schedule.at(state.t)
    v_new = state.x - a * problem.gradient_all(state.x)
    correction = state.x - state.v
    x_new = _checked(combine(w_bar, v_new + correction), state.t + 1)
    state.v = v_new
    state.x = x_new
    state.t += 1
    state.comm_rounds += 1
    state.grad_evals += 1
    return state


def step_exact_music(
    state: NetworkState, problem, w_bar: MixingMatrix, config: AlgorithmConfig
) -> NetworkState:
    """Multi-update single-combination step with bias-correction anchors.

    Every iteration applies the local update plus the anchor held since the
    most recent combination; combination iterations average ``v + anchor``
    over neighbors and then refresh each agent's anchor to
    ``beta * (x_new - v_new)``.  With ``E = 1`` and ``beta = 1`` the
    trajectory coincides with :func:`step_exact_diffusion`; with ``beta = 0``
    it reduces to :func:`step_inexact_music` run under ``w_bar``.
    """
    a = config.schedule.at(state.t)
    v_new = state.x - a * problem.gradient_all(state.x)
    combining = (state.t + 1) % config.E == 0
    corrected = v_new + state.anchor
    x_new = _checked(combine(w_bar, corrected) if combining else corrected, state.t + 1)
    if combining:
        state.anchor = config.beta * (x_new - v_new)
        state.comm_rounds += 1
    state.v = v_new
    state.x = x_new
    state.t += 1
    state.grad_evals += 1
    return state


def step_easgd_like(
    state: NetworkState, problem, w_bar: MixingMatrix, config: AlgorithmConfig
) -> NetworkState:
    """Variant of :func:`step_exact_music` that corrects only when combining.

    Inner iterations take the plain local update ``x <- v``; the anchor enters
    the combination alone.  Lacking the per-iteration correction, the scheme
    keeps a steady-state error floor for ``E > 1``.
    """
    a = config.schedule.at(state.t)
    v_new = state.x - a * problem.gradient_all(state.x)
    combining = (state.t + 1) % config.E == 0
    x_new = _checked(
        combine(w_bar, v_new + state.anchor) if combining else v_new, state.t + 1
    )
    if combining:
        state.anchor = config.beta * (x_new - v_new)
        state.comm_rounds += 1
    state.v = v_new
    state.x = x_new
    state.t += 1
    state.grad_evals += 1
    return state


def advance(
    state: NetworkState, problem, w: MixingMatrix, config: AlgorithmConfig
) -> NetworkState:
    """Dispatch one iteration of ``config.kind`` using matrix ``w``.

    The caller is responsible for passing the plain Metropolis matrix to the
    first three kinds and the half-identity-shifted matrix to the exact
    family.
    """
    if config.kind == "dgd":
        return step_dgd(state, problem, w, config.schedule)
    if config.kind == "atc":
        return step_atc(state, problem, w, config.schedule)
    if config.kind == "inexact_music":
        return step_inexact_music(state, problem, w, config)
    if config.kind == "exact_diffusion":
        return step_exact_diffusion(state, problem, w, config.schedule)
    if config.kind == "exact_music":
        return step_exact_music(state, problem, w, config)
    if config.kind == "easgd_like":
        return step_easgd_like(state, problem, w, config)
    raise ValueError(f"unknown algorithm kind {config.kind!r}")


def stability_check(
    bounds: ConvexityBounds,
    alpha: float,
    E: int,
    beta: float,
    z_norm: float,
    zmi_norm: float,
) -> bool:
    """Sufficient linear-convergence condition for the bias-corrected scheme.

    With ``lam = mu L / (mu + L)`` and contraction factor
    ``nu = sqrt(1 - 2 alpha lam)``, the check evaluates

        ``nu**E * (1 - beta * nu / (1 - nu) * zmi_norm)
          <= 1 - beta * nu / (1 - nu) * zmi_norm - beta * z_norm``

    where ``z_norm`` and ``zmi_norm`` are the spectral norms of the
    combination operator and of its deviation from the identity.  ``beta = 0``
    always passes.  The condition is sufficient, not necessary: configurations
    failing it may still converge in practice.

    Raises
    ------
    ValueError
        If ``alpha`` is outside ``(0, 1 / (2 L_est)]``.
    """
    mu, L = bounds.mu_est, bounds.L_est
    if not (0.0 < alpha <= 1.0 / (2.0 * L)):
        raise ValueError(f"alpha must lie in (0, {1.0 / (2.0 * L):.3e}], got {alpha}")
    if E < 1:
        raise ValueError(f"E must be at least 1, got {E}")
    lam = mu * L / (mu + L)
    nu = math.sqrt(1.0 - 2.0 * alpha * lam)
    drift = beta * nu / (1.0 - nu) * zmi_norm
    return nu**E * (1.0 - drift) <= 1.0 - drift - beta * z_norm
