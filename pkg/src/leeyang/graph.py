"""Simple undirected graphs: parsing, generators, vertex deletion, components."""

from __future__ import annotations

import hashlib
from collections import deque
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np


class GraphError(ValueError):
    """Malformed graph input or invalid graph operation."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


@dataclass(frozen=True)
class Graph:
    """Undirected simple graph on vertices 0..n-1.

    Edges are stored as ``(i, j)`` with ``i < j`` in the order they were given.
    Instances are immutable and safe to share between workers.
    """

    n: int
    edges: tuple[tuple[int, int], ...] = ()
    adjacency: tuple[tuple[int, ...], ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if self.n < 0:
            raise GraphError(f"negative vertex count {self.n}")
        norm = []
        seen = set()
        adj: list[list[int]] = [[] for _ in range(self.n)]
        for i, j in self.edges:
            i, j = int(i), int(j)
            if not (0 <= i < self.n and 0 <= j < self.n):
                raise GraphError(f"edge ({i}, {j}) has endpoint outside [0, {self.n})")
            if i == j:
                raise GraphError(f"self-loop at vertex {i}")
            e = (i, j) if i < j else (j, i)
            if e in seen:
                raise GraphError(f"duplicate edge {e}")
            seen.add(e)
            norm.append(e)
            adj[e[0]].append(e[1])
            adj[e[1]].append(e[0])
        object.__setattr__(self, "edges", tuple(norm))
        object.__setattr__(self, "adjacency", tuple(tuple(sorted(a)) for a in adj))

    @property
    def m(self) -> int:
        return len(self.edges)

    def degree(self, u: int) -> int:
        return len(self.adjacency[u])

    def neighbors(self, u: int) -> tuple[int, ...]:
        return self.adjacency[u]

    @cached_property
    def csr(self) -> tuple[np.ndarray, np.ndarray]:
        """Adjacency in CSR form ``(indptr, indices)`` as int64 arrays."""
        indptr = np.zeros(self.n + 1, dtype=np.int64)
        for v, a in enumerate(self.adjacency):
            indptr[v + 1] = indptr[v] + len(a)
        indices = np.array([w for a in self.adjacency for w in a], dtype=np.int64)
        return indptr, indices

    def is_connected(self) -> bool:
        return len(connected_components(self)) <= 1

    def render(self) -> str:
        lines = [f"{self.n} {self.m}"]
        lines += [f"{i} {j}" for i, j in self.edges]
        return "\n".join(lines) + "\n"

    @cached_property
    def graph_id(self) -> str:
        """Short content hash of the canonical edge list (order-insensitive)."""
        canon = f"{self.n}:" + ";".join(f"{i},{j}" for i, j in sorted(self.edges))
        return hashlib.sha256(canon.encode()).hexdigest()[:16]


def parse_edge_list(text: str) -> Graph:
    """Parse the ``n m`` header + ``i j`` lines format.

    Lines starting with ``#`` and blank lines are ignored. Errors carry the
    1-based line number of the offending line.
    """
    header = None
    edges: list[tuple[int, int]] = []
    seen: set[tuple[int, int]] = set()
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if len(parts) != 2:
            raise GraphError(f"expected two integers, got {line!r}", lineno)
        try:
            a, b = int(parts[0]), int(parts[1])
        except ValueError:
            raise GraphError(f"non-integer token in {line!r}", lineno) from None
        if header is None:
            if a < 0 or b < 0:
                raise GraphError("negative count in header", lineno)
            header = (a, b)
            continue
        n = header[0]
        if not (0 <= a < n and 0 <= b < n):
            raise GraphError(f"endpoint out of range [0, {n}) in {line!r}", lineno)
        if a == b:
            raise GraphError(f"self-loop at vertex {a}", lineno)
        e = (min(a, b), max(a, b))
        if e in seen:
            raise GraphError(f"duplicate edge {e}", lineno)
        seen.add(e)
        edges.append(e)
    if header is None:
        raise GraphError("missing 'n m' header")
    if len(edges) != header[1]:
        raise GraphError(f"header declares {header[1]} edges, found {len(edges)}")
    return Graph(header[0], tuple(edges))


def read_graph(path) -> Graph:
    with open(path) as fh:
        return parse_edge_list(fh.read())


def generate(family: str, seed: int = 0, **params) -> Graph:
    """Build a graph from a named family.

    Families and parameters: ``path(n)``, ``cycle(n)`` with n >= 3,
    ``complete(n)``, ``grid(rows, cols)``, ``gnp(n, p)``. ``gnp`` uses
    ``seed`` and is returned as drawn, connected or not.
    """
    if family == "path":
        n = _count(params, "n", 1)
        return Graph(n, tuple((i, i + 1) for i in range(n - 1)))
    if family == "cycle":
        n = _count(params, "n", 3)
        return Graph(n, tuple((i, (i + 1) % n) for i in range(n)))
    if family == "complete":
        n = _count(params, "n", 1)
        return Graph(n, tuple((i, j) for i in range(n) for j in range(i + 1, n)))
    if family == "grid":
        rows = _count(params, "rows", 1)
        cols = _count(params, "cols", 1)
        edges = []
        for r in range(rows):
            for c in range(cols):
                v = r * cols + c
                if c + 1 < cols:
                    edges.append((v, v + 1))
                if r + 1 < rows:
                    edges.append((v, v + cols))
        return Graph(rows * cols, tuple(edges))
    if family == "gnp":
        n = _count(params, "n", 1)
        p = float(params.get("p", -1.0))
        if not 0.0 <= p <= 1.0:
            raise GraphError(f"gnp needs 0 <= p <= 1, got {p}")
        rng = np.random.default_rng(seed)
        pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
        keep = rng.random(len(pairs)) < p
        return Graph(n, tuple(e for e, k in zip(pairs, keep) if k))
    raise GraphError(f"unknown graph family {family!r}")


def _count(params: dict, key: str, minimum: int) -> int:
    if key not in params:
        raise GraphError(f"missing parameter {key!r}")
    value = params[key]
    if int(value) != value or value < minimum:
        raise GraphError(f"parameter {key} must be an integer >= {minimum}, got {value!r}")
    return int(value)


def delete_vertex(g: Graph, u: int) -> tuple[Graph, dict[int, int]]:
    """Return ``G - {u}`` relabeled compactly, plus the old -> new vertex map."""
    if not 0 <= u < g.n:
        raise GraphError(f"vertex {u} out of range [0, {g.n})")
    relabel = {v: (v if v < u else v - 1) for v in range(g.n) if v != u}
    edges = tuple((relabel[i], relabel[j]) for i, j in g.edges if u not in (i, j))
    return Graph(g.n - 1, edges), relabel


def connected_components(g: Graph) -> list[list[int]]:
    """Vertex sets of the connected components, each sorted, ordered by least vertex."""
    seen = [False] * g.n
    comps = []
    for s in range(g.n):
        if seen[s]:
            continue
        seen[s] = True
        comp = [s]
        queue = deque([s])
        while queue:
            v = queue.popleft()
            for w in g.adjacency[v]:
                if not seen[w]:
                    seen[w] = True
                    comp.append(w)
                    queue.append(w)
        comps.append(sorted(comp))
    return comps


def induced_subgraph(g: Graph, vertices) -> tuple[Graph, dict[int, int]]:
    """Subgraph on ``vertices`` relabeled in increasing vertex order."""
    vs = sorted(vertices)
    relabel = {v: k for k, v in enumerate(vs)}
    edges = tuple((relabel[i], relabel[j]) for i, j in g.edges if i in relabel and j in relabel)
    return Graph(len(vs), edges), relabel
