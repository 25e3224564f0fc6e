"""Running algorithms, measuring error, and exporting traces.

A run advances one algorithm for ``T`` iterations from the all-zeros initial
state and records, after every iteration, the counters and the mean relative
error

    ``rel_error = (1/n) sum_i ||x_i - x_star||^2 / ||x_i^0 - x_star||^2``

against a reference optimum.  Traces serialize to CSV with one row per
iteration and a terminal-status comment, rendered with 17 significant digits
so parsing the file back reproduces the records exactly.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from typing import Mapping, NamedTuple

import numpy as np

from .errors import DivergenceError
from .optimizers import AlgorithmConfig, advance, init_state
from .topology import Graph, MixingMatrix, half_identity, metropolis_weights

__all__ = [
    "TraceRecord",
    "Trace",
    "RateEstimate",
    "ComparisonResult",
    "relative_error",
    "run",
    "compare",
    "rounds_to_threshold",
    "plateau_error",
    "reached_plateau",
    "fit_linear_rate",
    "export_csv",
    "read_trace_csv",
]

# Matrix handed to each algorithm kind by compare(): the bias-corrected family
# needs the positive definite half-identity shift.
EXACT_FAMILY = ("exact_diffusion", "exact_music", "easgd_like")

CSV_HEADER = "t,comm_rounds,grad_evals,rel_error,alpha"


class TraceRecord(NamedTuple):
    t: int
    comm_rounds: int
    grad_evals: int
    rel_error: float
    alpha: float


@dataclass
class Trace:
    """Per-iteration records plus how the run ended.

    ``terminal_status`` is one of ``"converged"`` (a target error was given
    and reached), ``"max_iters"`` (all ``T`` iterations ran without reaching
    a target), or ``"diverged"`` with ``diverged_at`` holding the offending
    iteration index.
    """

    records: list[TraceRecord] = field(default_factory=list)
    terminal_status: str = "max_iters"
    diverged_at: int | None = None

    def status_str(self) -> str:
        if self.terminal_status == "diverged":
            return f"diverged(at {self.diverged_at})"
        return self.terminal_status


def relative_error(x: np.ndarray, x_star: np.ndarray, x0: np.ndarray) -> float:
    """Mean over agents of the squared distance to ``x_star``, each agent
    normalized by its own initial distance.

    Raises ``ValueError`` if any agent starts exactly at ``x_star``.
    """
    x = np.atleast_2d(x)
    x0 = np.atleast_2d(x0)
    denom = ((x0 - x_star) ** 2).sum(axis=1)
    if np.any(denom == 0.0):
        raise ValueError("an agent's initial iterate coincides with x_star")
    num = ((x - x_star) ** 2).sum(axis=1)
    return float((num / denom).mean())


def run(
    problem,
    graph: Graph,
    w: MixingMatrix,
    config: AlgorithmConfig,
    T: int,
    x_star: np.ndarray,
    target_error: float | None = None,
) -> Trace:
    """Execute ``T`` iterations of one algorithm and record a trace.

    ``w`` must be the matrix appropriate for ``config.kind`` (the
    half-identity shift for the exact family).  The run starts from the
    origin for every agent, records one row per iteration, and stops early
    only on divergence, which is captured in the trace rather than raised.

    Parameters
    ----------
    problem
        Objective following the protocol in :mod:`musicopt.objectives`.
    graph : Graph
        Communication topology; only used for consistency checks here, the
        weights in ``w`` already encode it.
    w : MixingMatrix
        Combination weights.
    config : AlgorithmConfig
        Algorithm kind, period, anchor gain and step schedule.
    T : int
        Number of iterations, positive.
    x_star : ndarray
        Reference optimum used by the relative-error metric.
    target_error : float, optional
        When given, reaching it anywhere in the run marks the trace
        ``"converged"`` (the run still executes all ``T`` iterations).
    """
    if T < 1:
        raise ValueError(f"T must be at least 1, got {T}")
    n = problem.n_agents
    if graph.n != n or w.n != n:
        raise ValueError(
            f"size mismatch: problem has {n} agents, graph {graph.n}, weights {w.n}"
        )
    x_star = np.asarray(x_star, dtype=float)
    if x_star.shape != (problem.dim,):
        raise ValueError(f"x_star shape {x_star.shape}, expected ({problem.dim},)")

    state = init_state(n, problem.dim)
    x0 = state.x.copy()
    trace = Trace()
    reached = False
    for t in range(T):
        a = config.schedule.at(t)
        try:
            advance(state, problem, w, config)
        except DivergenceError as err:
            trace.terminal_status = "diverged"
            trace.diverged_at = err.iteration
            return trace
        rel = relative_error(state.x, x_star, x0)
        trace.records.append(
            TraceRecord(state.t, state.comm_rounds, state.grad_evals, rel, a)
        )
        if target_error is not None and rel <= target_error:
            reached = True
    trace.terminal_status = "converged" if reached else "max_iters"
    return trace


@dataclass
class ComparisonResult:
    """Labeled traces from :func:`compare` plus per-label rounds to target."""

    traces: dict[str, Trace]
    rounds_to_target: dict[str, int | None]
    target_error: float | None


def compare(
    problem,
    graph: Graph,
    configs: Mapping[str, AlgorithmConfig],
    T: int,
    x_star: np.ndarray,
    target_error: float | None = None,
) -> ComparisonResult:
    """Run several algorithm configs on one problem/graph and label the traces.

    Metropolis weights are built once from the graph; each config receives
    either that matrix or its half-identity shift depending on its kind.  A
    divergent config is recorded as such without aborting the others, and two
    identical configs produce identical traces.
    """
    w = metropolis_weights(graph)
    wb = half_identity(w)
    traces: dict[str, Trace] = {}
    rounds: dict[str, int | None] = {}
    for label, config in configs.items():
        matrix = wb if config.kind in EXACT_FAMILY else w
        trace = run(problem, graph, matrix, config, T, x_star, target_error)
        traces[label] = trace
        rounds[label] = (
            rounds_to_threshold(trace, target_error) if target_error is not None else None
        )
    return ComparisonResult(traces, rounds, target_error)


def rounds_to_threshold(trace: Trace, target: float) -> int | None:
    """Communication rounds spent when the error first meets ``target`` at a
    combination step, or ``None`` if it never does."""
    prev = 0
    for rec in trace.records:
        if rec.comm_rounds > prev and rec.rel_error <= target:
            return rec.comm_rounds
        prev = rec.comm_rounds
    return None


def _tail(records: list[TraceRecord], fraction: float = 0.1) -> list[TraceRecord]:
    k = max(1, int(len(records) * fraction))
    return records[-k:]


def plateau_error(trace: Trace) -> float:
    """Steady-state readout: best rel_error over the last tenth of the trace."""
    if not trace.records:
        raise ValueError("empty trace has no plateau")
    return min(r.rel_error for r in _tail(trace.records))


def reached_plateau(trace: Trace) -> bool:
    """True when the best error of the last tenth improved by less than 1%
    relative to the best of the tenth before it."""
    recs = trace.records
    if len(recs) < 20:
        return False
    k = max(1, len(recs) // 10)
    last = min(r.rel_error for r in recs[-k:])
    prev = min(r.rel_error for r in recs[-2 * k : -k])
    if prev == 0.0:
        return True
    return (prev - last) / prev < 0.01


class RateEstimate(NamedTuple):
    """Fitted per-round error contraction factor."""

    rho: float
    contracting: bool
    n_points: int


def fit_linear_rate(trace: Trace, window: int = 50) -> RateEstimate:
    """Estimate the linear convergence rate per communication round.

    Takes the record at each combination step, drops points already inside
    the plateau (within 10x of the steady-state readout) unless that leaves
    fewer than 3 points, keeps the last ``window`` of them, and fits a
    least-squares line to ``log(rel_error)`` against ``comm_rounds``.  The
    exponentiated slope is the per-round factor: 1.0 for a flat trace,
    below 1 for contraction.  ``contracting`` is False when the fit comes
    out above 1.

    Raises
    ------
    ValueError
        If fewer than 3 usable points exist or any of them has a
        non-positive error.
    """
    if window < 3:
        raise ValueError(f"window must be at least 3, got {window}")
    boundaries = []
    prev = 0
    for rec in trace.records:
        if rec.comm_rounds > prev:
            boundaries.append(rec)
        prev = rec.comm_rounds
    if len(boundaries) < 3:
        raise ValueError(f"window too short: {len(boundaries)} combination records")
    floor = plateau_error(trace)
    eligible = [r for r in boundaries if r.rel_error > 10.0 * floor]
    pts = (eligible if len(eligible) >= 3 else boundaries)[-window:]
    if any(r.rel_error <= 0.0 for r in pts):
        raise ValueError("non-positive errors in the fit window")
    rounds = np.array([r.comm_rounds for r in pts], dtype=float)
    logs = np.array([math.log(r.rel_error) for r in pts])
    slope = np.polyfit(rounds, logs, 1)[0]
    rho = float(np.exp(slope))
    return RateEstimate(rho, rho <= 1.0, len(pts))


def export_csv(trace: Trace) -> str:
    """Render a trace as CSV: header, one row per record, status comment."""
    lines = [CSV_HEADER]
    for rec in trace.records:
        lines.append(
            f"{rec.t},{rec.comm_rounds},{rec.grad_evals},"
            f"{rec.rel_error:.17g},{rec.alpha:.17g}"
        )
    lines.append(f"# status={trace.status_str()}")
    return "\n".join(lines) + "\n"


def read_trace_csv(text: str) -> Trace:
    """Parse the :func:`export_csv` format back into a trace."""
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines or lines[0] != CSV_HEADER:
        raise ValueError(f"expected header {CSV_HEADER!r}")
    if not lines[-1].startswith("# status="):
        raise ValueError("missing terminal status comment")
    status = lines[-1][len("# status=") :]
    trace = Trace()
    m = re.fullmatch(r"diverged\(at (\d+)\)", status)
    if m:
        trace.terminal_status = "diverged"
        trace.diverged_at = int(m.group(1))
    elif status in ("converged", "max_iters"):
        trace.terminal_status = status
    else:
        raise ValueError(f"unknown terminal status {status!r}")
    for ln in lines[1:-1]:
        t_s, c_s, g_s, rel_s, a_s = ln.split(",")
        trace.records.append(
            TraceRecord(int(t_s), int(c_s), int(g_s), float(rel_s), float(a_s))
        )
    return trace
