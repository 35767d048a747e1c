"""Seeded dataset generators: random graphs and target matrices.

Random generation is a pure function of ``(parameters, seed)`` through
PCG64 streams (see :mod:`hilbertsimplex.seeding`), so datasets are bit
reproducible.  Graphs are undirected, unweighted, simple; matrices are
plain float arrays.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass

import numpy as np

from .seeding import make_rng
from .validation import check_seed

__all__ = [
    "Graph",
    "GraphConnectivityError",
    "make_erdos_renyi",
    "make_barabasi_albert",
    "shortest_path_matrix",
    "random_walk_similarity",
    "random_points_distance_matrix",
    "save_graph",
    "load_graph",
    "save_matrix",
    "load_matrix",
]


class GraphConnectivityError(ValueError):
    """Raised when an operation requires a connected graph."""


@dataclass(frozen=True)
class Graph:
    """Undirected simple graph on nodes ``0 .. n-1``.

    ``edges`` is a lexicographically sorted tuple of ``(i, j)`` pairs
    with ``i < j``; no self loops, no duplicates.
    """

    n: int
    edges: tuple[tuple[int, int], ...]

    def __post_init__(self):
        if self.n < 1:
            raise ValueError(f"graph needs at least one node, got n={self.n}")
        seen = set()
        for i, j in self.edges:
            if not (0 <= i < j < self.n):
                raise ValueError(f"edge ({i}, {j}) invalid for n={self.n}")
            if (i, j) in seen:
                raise ValueError(f"duplicate edge ({i}, {j})")
            seen.add((i, j))
        object.__setattr__(self, "edges", tuple(sorted(self.edges)))

    @property
    def num_edges(self) -> int:
        return len(self.edges)

    def adjacency_lists(self) -> list[list[int]]:
        adj: list[list[int]] = [[] for _ in range(self.n)]
        for i, j in self.edges:
            adj[i].append(j)
            adj[j].append(i)
        return adj

    def adjacency_matrix(self) -> np.ndarray:
        A = np.zeros((self.n, self.n))
        for i, j in self.edges:
            A[i, j] = 1.0
            A[j, i] = 1.0
        return A

    def degrees(self) -> np.ndarray:
        deg = np.zeros(self.n, dtype=int)
        for i, j in self.edges:
            deg[i] += 1
            deg[j] += 1
        return deg

    def is_connected(self) -> bool:
        if self.n == 1:
            return True
        seen = _bfs_levels(self.adjacency_lists(), 0)
        return bool((seen >= 0).all())


def _bfs_levels(adj: list[list[int]], source: int) -> np.ndarray:
    """Hop counts from ``source``; -1 marks unreachable nodes."""
    levels = np.full(len(adj), -1, dtype=int)
    levels[source] = 0
    queue = deque([source])
    while queue:
        v = queue.popleft()
        for w in adj[v]:
            if levels[w] < 0:
                levels[w] = levels[v] + 1
                queue.append(w)
    return levels


def _erdos_renyi_sample(n: int, p: float, seed: int, attempt: int) -> Graph:
    """One unconditioned G(n, p) draw: each pair i.i.d. Bernoulli(p)."""
    iu, ju = np.triu_indices(n, k=1)
    rng = make_rng(seed, attempt)
    mask = rng.random(iu.size) < p
    return Graph(n, tuple(zip(iu[mask].tolist(), ju[mask].tolist())))


def make_erdos_renyi(n: int, p: float, seed: int) -> Graph:
    """Connected Erdos-Renyi graph G(n, p).

    Each unordered pair is included independently with probability
    ``p``.  Because shortest-path targets need finite entries, sampling
    is retried with a fresh derived seed until the graph is connected
    (at most 100 attempts); at the dense parameters used by the
    benchmarks, retries are rare.

    Parameters
    ----------
    n : int
        Number of nodes, >= 2.
    p : float
        Edge probability in (0, 1].
    seed : int
        Base seed; attempt ``k`` uses the stream derived from
        ``(seed, k)``.
    """
    if n < 2:
        raise ValueError(f"n must be >= 2, got {n}")
    if not (0.0 < p <= 1.0):
        raise ValueError(f"p must be in (0, 1], got {p}")
    check_seed(seed)
    for attempt in range(100):
        g = _erdos_renyi_sample(n, p, seed, attempt)
        if g.is_connected():
            return g
    raise GraphConnectivityError(
        f"no connected G({n}, {p}) sample within 100 attempts (seed {seed})"
    )


def make_barabasi_albert(n: int, m: int, seed: int) -> Graph:
    """Barabasi-Albert preferential-attachment graph G(n, m).

    Starts from a complete graph on ``m + 1`` nodes; every subsequent
    node attaches ``m`` edges to distinct existing nodes drawn with
    probability proportional to current degree (rejection sampling).
    The result is connected with exactly
    ``C(m+1, 2) + (n - m - 1) * m`` edges.

    Parameters
    ----------
    n : int
        Number of nodes, > m.
    m : int
        Edges attached per new node, >= 1.
    seed : int
        Seed of the sampling stream.
    """
    if m < 1:
        raise ValueError(f"m must be >= 1, got {m}")
    if n <= m:
        raise ValueError(f"n must exceed m, got n={n}, m={m}")
    rng = make_rng(seed)
    edges = [(i, j) for i in range(m + 1) for j in range(i + 1, m + 1)]
    degree = np.zeros(n)
    degree[: m + 1] = m
    for new in range(m + 1, n):
        weights = degree[:new] / degree[:new].sum()
        chosen: set[int] = set()
        while len(chosen) < m:
            candidate = int(rng.choice(new, p=weights))
            chosen.add(candidate)
        for target in sorted(chosen):
            edges.append((target, new))
            degree[target] += 1
        degree[new] = m
    return Graph(n, tuple(edges))


def shortest_path_matrix(g: Graph) -> np.ndarray:
    """All-pairs shortest path hop counts via BFS from every node.

    O(n (n + |E|)); raises :class:`GraphConnectivityError` if any pair
    is unreachable.
    """
    adj = g.adjacency_lists()
    D = np.zeros((g.n, g.n))
    for source in range(g.n):
        levels = _bfs_levels(adj, source)
        if (levels < 0).any():
            missing = int(np.flatnonzero(levels < 0)[0])
            raise GraphConnectivityError(
                f"graph is disconnected: node {missing} unreachable from {source}"
            )
        D[source] = levels
    return D


def random_walk_similarity(g: Graph, steps: int) -> np.ndarray:
    """Row-stochastic k-step random-walk similarity matrix.

    The degree-normalized adjacency matrix is raised to ``steps``; the
    diagonal is then zeroed and every row renormalized to sum to one, so
    each row is a distribution over *other* nodes (self-similarity mass
    is excluded).
    """
    if steps < 1:
        raise ValueError(f"steps must be >= 1, got {steps}")
    A = g.adjacency_matrix()
    deg = A.sum(axis=1)
    if np.any(deg == 0):
        isolated = int(np.flatnonzero(deg == 0)[0])
        raise GraphConnectivityError(f"node {isolated} is isolated (degree 0)")
    T = A / deg[:, None]
    P = np.linalg.matrix_power(T, steps)
    np.fill_diagonal(P, 0.0)
    mass = P.sum(axis=1)
    if np.any(mass <= 0):
        bad = int(np.flatnonzero(mass <= 0)[0])
        raise GraphConnectivityError(
            f"row {bad} has no off-diagonal mass after {steps} steps"
        )
    return P / mass[:, None]


def random_points_distance_matrix(n: int, seed: int) -> np.ndarray:
    """Euclidean distance matrix of n i.i.d. standard Gaussian points in R^n."""
    if n < 2:
        raise ValueError(f"n must be >= 2, got {n}")
    X = make_rng(seed).standard_normal((n, n))
    diff = X[:, None, :] - X[None, :, :]
    return np.sqrt(np.sum(diff * diff, axis=-1))


def save_graph(g: Graph, path) -> None:
    """Write a graph as a plain edge list: first line ``n``, then ``i j`` pairs."""
    lines = [str(g.n)]
    lines.extend(f"{i} {j}" for i, j in g.edges)
    with open(path, "w", encoding="ascii") as fh:
        fh.write("\n".join(lines) + "\n")


def load_graph(path) -> Graph:
    """Read a graph written by :func:`save_graph`."""
    with open(path, "r", encoding="ascii") as fh:
        tokens = fh.read().split()
    if not tokens:
        raise ValueError(f"empty graph file: {path}")
    n = int(tokens[0])
    rest = tokens[1:]
    if len(rest) % 2 != 0:
        raise ValueError(f"odd number of edge endpoints in {path}")
    pairs = [(int(rest[k]), int(rest[k + 1])) for k in range(0, len(rest), 2)]
    edges = tuple((min(i, j), max(i, j)) for i, j in pairs)
    return Graph(n, edges)


def save_matrix(M: np.ndarray, path) -> None:
    """Write a matrix as CSV, one full row per line, round-trip precision."""
    np.savetxt(path, np.asarray(M, dtype=float), delimiter=",", fmt="%.17g")


def load_matrix(path) -> np.ndarray:
    """Read a CSV matrix written by :func:`save_matrix`."""
    return np.loadtxt(path, delimiter=",", ndmin=2)
