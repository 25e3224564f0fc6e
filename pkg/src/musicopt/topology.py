"""Communication graphs and mixing matrices for decentralized optimization.

Agents sit on the vertices of an undirected, connected graph and may only
exchange iterates with their neighbors.  A combination step averages neighbor
values through a symmetric doubly stochastic mixing matrix ``W``; the
bias-corrected algorithm family uses the positive definite variant
``(W + I) / 2`` instead.

Randomness is produced by numpy's PCG64 generator (``numpy.random.default_rng``),
a 64-bit output PRNG seedable through ``SeedSequence``, which is how
``erdos_renyi`` derives the per-attempt sub-streams of its
resample-until-connected loop.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

__all__ = [
    "Graph",
    "MixingMatrix",
    "erdos_renyi",
    "is_connected",
    "metropolis_weights",
    "half_identity",
    "validate_doubly_stochastic",
]


@dataclass(frozen=True)
class Graph:
    """Undirected graph on vertices ``0 .. n-1``.

    Parameters
    ----------
    n : int
        Number of vertices, positive.
    edges : iterable of (int, int)
        Undirected edges.  Normalized to sorted ``(i, j)`` pairs with
        ``i < j``.  Self-loops, duplicates and out-of-range indices are
        rejected.
    """

    n: int
    edges: tuple[tuple[int, int], ...] = field(default=())

    def __post_init__(self):
        if self.n <= 0:
            raise ValueError(f"graph needs at least one vertex, got n={self.n}")
        seen = set()
        for i, j in self.edges:
            if i == j:
                raise ValueError(f"self-loop at vertex {i}")
            if not (0 <= i < self.n and 0 <= j < self.n):
                raise ValueError(f"edge ({i}, {j}) out of range for n={self.n}")
            key = (min(i, j), max(i, j))
            if key in seen:
                raise ValueError(f"duplicate edge ({key[0]}, {key[1]})")
            seen.add(key)
        object.__setattr__(self, "edges", tuple(sorted(seen)))

    @property
    def m(self) -> int:
        """Number of edges."""
        return len(self.edges)

    @cached_property
    def neighbors(self) -> tuple[tuple[int, ...], ...]:
        """Adjacency lists, ascending within each vertex."""
        adj: list[list[int]] = [[] for _ in range(self.n)]
        for i, j in self.edges:
            adj[i].append(j)
            adj[j].append(i)
        return tuple(tuple(sorted(a)) for a in adj)

    @cached_property
    def degrees(self) -> np.ndarray:
        """Vertex degrees as an int array of length ``n``."""
        return np.array([len(a) for a in self.neighbors], dtype=int)

    def adjacency(self) -> np.ndarray:
        """Dense 0/1 adjacency matrix."""
        a = np.zeros((self.n, self.n))
        for i, j in self.edges:
            a[i, j] = a[j, i] = 1.0
        return a

    def to_edge_list(self) -> str:
        """Serialize as text: first line ``"n m"``, then one ``"i j"`` line per edge."""
        lines = [f"{self.n} {self.m}"]
        lines += [f"{i} {j}" for i, j in self.edges]
        return "\n".join(lines) + "\n"

    @classmethod
    def from_edge_list(cls, text: str) -> "Graph":
        """Parse the ``to_edge_list`` format back into a graph."""
        lines = [ln for ln in text.splitlines() if ln.strip()]
        if not lines:
            raise ValueError("empty edge-list document")
        try:
            n, m = (int(tok) for tok in lines[0].split())
        except ValueError as exc:
            raise ValueError(f"bad header line {lines[0]!r}") from exc
        if len(lines) - 1 != m:
            raise ValueError(f"header promises {m} edges, found {len(lines) - 1}")
        edges = []
        for ln in lines[1:]:
            i, j = (int(tok) for tok in ln.split())
            edges.append((i, j))
        return cls(n, tuple(edges))


def erdos_renyi(n: int, avg_degree: float, seed: int, max_attempts: int = 1000) -> Graph:
    """Sample a connected Erdos-Renyi graph.

    Each of the ``n (n - 1) / 2`` vertex pairs is included independently with
    probability ``avg_degree / (n - 1)``, so the expected number of edges is
    ``n * avg_degree / 2``.  Disconnected samples are rejected and redrawn from
    a fresh sub-stream (``SeedSequence((seed, attempt))``), which keeps the
    result a deterministic function of ``(n, avg_degree, seed)``.

    Parameters
    ----------
    n : int
        Number of vertices, at least 2.
    avg_degree : float
        Target mean degree, in ``(0, n)``.
    seed : int
        Base seed for the PCG64 streams.
    max_attempts : int
        Resampling budget before giving up.

    Returns
    -------
    Graph
        A connected graph.

    Raises
    ------
    RuntimeError
        If no connected sample appears within ``max_attempts`` draws.
    """
    if n < 2:
        raise ValueError(f"need n >= 2 to connect anything, got {n}")
    if not (0 < avg_degree < n):
        raise ValueError(f"avg_degree must lie in (0, n), got {avg_degree}")
    p = avg_degree / (n - 1)
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    for attempt in range(max_attempts):
        rng = np.random.default_rng(np.random.SeedSequence((seed, attempt)))
        u = rng.random(len(pairs))
        g = Graph(n, tuple(pair for pair, ui in zip(pairs, u) if ui < p))
        if is_connected(g):
            return g
    raise RuntimeError(
        f"no connected graph in {max_attempts} attempts (n={n}, avg_degree={avg_degree})"
    )


def is_connected(g: Graph) -> bool:
    """True iff every vertex is reachable from vertex 0."""
    if g.n == 1:
        return True
    seen = np.zeros(g.n, dtype=bool)
    seen[0] = True
    queue = deque([0])
    while queue:
        i = queue.popleft()
        for j in g.neighbors[i]:
            if not seen[j]:
                seen[j] = True
                queue.append(j)
    return bool(seen.all())


@dataclass(frozen=True)
class MixingMatrix:
    """Dense combination-weight matrix over ``n`` agents.

    Instances built by :func:`metropolis_weights` or :func:`half_identity` are
    symmetric and doubly stochastic with nonnegative entries;
    :func:`validate_doubly_stochastic` checks those properties explicitly.
    """

    n: int
    w: np.ndarray

    def __post_init__(self):
        w = np.asarray(self.w, dtype=float)
        if w.shape != (self.n, self.n):
            raise ValueError(f"weight matrix shape {w.shape} does not match n={self.n}")
        object.__setattr__(self, "w", w)

    def to_csv(self) -> str:
        """Serialize as ``n`` comma-separated rows with 17 significant digits."""
        return "\n".join(",".join(f"{x:.17g}" for x in row) for row in self.w) + "\n"

    @classmethod
    def from_csv(cls, text: str) -> "MixingMatrix":
        rows = [
            [float(tok) for tok in ln.split(",")] for ln in text.splitlines() if ln.strip()
        ]
        w = np.array(rows, dtype=float)
        if w.ndim != 2 or w.shape[0] != w.shape[1]:
            raise ValueError(f"expected a square matrix, got shape {w.shape}")
        return cls(w.shape[0], w)


def metropolis_weights(g: Graph) -> MixingMatrix:
    """Metropolis-Hastings combination weights for a graph.

    Adjacent agents ``i != j`` receive ``w_ij = 1 / (1 + max(deg_i, deg_j))``,
    non-adjacent pairs receive 0, and the diagonal absorbs the remainder so
    every row sums to one.  The result is symmetric, doubly stochastic and
    defined purely by the local degrees.

    Parameters
    ----------
    g : Graph
        A connected graph.

    Returns
    -------
    MixingMatrix
    """
    if not is_connected(g):
        raise ValueError("metropolis weights require a connected graph")
    deg = g.degrees
    w = np.zeros((g.n, g.n))
    for i, j in g.edges:
        w[i, j] = w[j, i] = 1.0 / (1.0 + max(deg[i], deg[j]))
    np.fill_diagonal(w, 1.0 - w.sum(axis=1))
    return MixingMatrix(g.n, w)


def half_identity(w: MixingMatrix) -> MixingMatrix:
    """Shift a mixing matrix halfway toward the identity: ``(W + I) / 2``.

    The shift keeps symmetry and double stochasticity, and makes the matrix
    positive definite, which the bias-corrected combination steps require.
    """
    return MixingMatrix(w.n, (w.w + np.eye(w.n)) / 2.0)


def validate_doubly_stochastic(w: MixingMatrix | np.ndarray, tol: float = 1e-12) -> list[str]:
    """Check symmetry, nonnegativity and row/column sums of a square matrix.

    Parameters
    ----------
    w : MixingMatrix or ndarray
        Square matrix to check.
    tol : float
        Largest tolerated deviation.

    Returns
    -------
    list of str
        Human-readable violations; empty when the matrix passes.  Each entry
        starts with ``"row i"``, ``"column j"``, ``"entry (i, j)"`` or
        ``"symmetry (i, j)"`` so callers can filter by kind.
    """
    mat = np.asarray(w.w if isinstance(w, MixingMatrix) else w, dtype=float)
    if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {mat.shape}")
    out: list[str] = []
    row_sums = mat.sum(axis=1)
    col_sums = mat.sum(axis=0)
    for i, s in enumerate(row_sums):
        if abs(s - 1.0) > tol:
            out.append(f"row {i} sums to {s:.17g}, off by {abs(s - 1.0):.3e}")
    for j, s in enumerate(col_sums):
        if abs(s - 1.0) > tol:
            out.append(f"column {j} sums to {s:.17g}, off by {abs(s - 1.0):.3e}")
    neg = np.argwhere(mat < -tol)
    for i, j in neg:
        out.append(f"entry ({i}, {j}) is negative: {mat[i, j]:.17g}")
    asym = np.argwhere(np.abs(mat - mat.T) > tol)
    for i, j in asym:
        if i < j:
            out.append(
                f"symmetry ({i}, {j}) broken: {mat[i, j]:.17g} vs {mat[j, i]:.17g}"
            )
    return out
