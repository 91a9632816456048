"""Bipartite graphs with parts W and U, and the quotient / expansion /
bi-complement constructions.

Vertex ``w`` of W and vertex ``u`` of U are separate index ranges. When a
graph is viewed as a single vertex set (automorphisms, group actions), W
comes first: W-vertex ``w`` is point ``w`` and U-vertex ``u`` is point
``n_w + u``.
"""

from __future__ import annotations

from collections import Counter, deque
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Sequence

W = "W"
U = "U"

FORMAT_HEADER = "ssg-bipartite 1"


@dataclass(frozen=True)
class BipartiteGraph:
    n_w: int
    n_u: int
    adjacency: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        if self.n_w < 0 or self.n_u < 0:
            raise ValueError("part sizes must be non-negative")
        if len(self.adjacency) != self.n_w:
            raise ValueError("need one neighbour list per W-vertex")
        for w, nbrs in enumerate(self.adjacency):
            if any(not 0 <= u < self.n_u for u in nbrs):
                raise ValueError(f"neighbour of W-vertex {w} out of range")
            if any(a >= b for a, b in zip(nbrs, nbrs[1:])):
                raise ValueError(f"neighbours of W-vertex {w} not sorted and distinct")

    @classmethod
    def from_edges(cls, n_w: int, n_u: int, edges: Iterable[tuple[int, int]]) -> BipartiteGraph:
        nbrs: list[set[int]] = [set() for _ in range(n_w)]
        for w, u in edges:
            if not (0 <= w < n_w and 0 <= u < n_u):
                raise ValueError(f"edge ({w}, {u}) out of range")
            nbrs[w].add(u)
        return cls(n_w, n_u, tuple(tuple(sorted(s)) for s in nbrs))

    @cached_property
    def u_adjacency(self) -> tuple[tuple[int, ...], ...]:
        out: list[list[int]] = [[] for _ in range(self.n_u)]
        for w, nbrs in enumerate(self.adjacency):
            for u in nbrs:
                out[u].append(w)
        return tuple(tuple(x) for x in out)

    @cached_property
    def edge_set(self) -> frozenset[tuple[int, int]]:
        return frozenset(self.edges())

    @property
    def order(self) -> int:
        return self.n_w + self.n_u

    @property
    def edge_count(self) -> int:
        return sum(len(n) for n in self.adjacency)

    def edges(self) -> list[tuple[int, int]]:
        return [(w, u) for w, nbrs in enumerate(self.adjacency) for u in nbrs]

    def has_edge(self, w: int, u: int) -> bool:
        return (w, u) in self.edge_set

    def neighbours(self, side: str, v: int) -> tuple[int, ...]:
        return self.adjacency[v] if side == W else self.u_adjacency[v]

    def point_adjacency(self) -> list[list[int]]:
        """Adjacency over the combined point set (W first, then U)."""
        n_w = self.n_w
        adj = [[n_w + u for u in nbrs] for nbrs in self.adjacency]
        adj.extend(list(ws) for ws in self.u_adjacency)
        return adj

    def relabel(self, w_perm: Sequence[int], u_perm: Sequence[int]) -> BipartiteGraph:
        """Graph with W-vertex w renamed w_perm[w] and U-vertex u renamed u_perm[u]."""
        return BipartiteGraph.from_edges(self.n_w, self.n_u, ((w_perm[w], u_perm[u]) for w, u in self.edges()))

    def swap_sides(self) -> BipartiteGraph:
        return BipartiteGraph.from_edges(self.n_u, self.n_w, ((u, w) for w, u in self.edges()))


@dataclass(frozen=True)
class VertexPartition:
    side: str
    cells: tuple[tuple[int, ...], ...]

    @classmethod
    def from_cells(cls, side: str, cells: Iterable[Iterable[int]], size: int | None = None) -> VertexPartition:
        if side not in (W, U):
            raise ValueError(f"side must be {W!r} or {U!r}")
        cells = tuple(sorted((tuple(sorted(c)) for c in cells), key=lambda c: c[0] if c else -1))
        flat = sorted(x for c in cells for x in c)
        if any(not c for c in cells) or len(flat) != len(set(flat)):
            raise ValueError("cells must be non-empty and disjoint")
        if size is not None and flat != list(range(size)):
            raise ValueError("cells do not cover the side")
        return cls(side, cells)

    @classmethod
    def singletons(cls, side: str, size: int) -> VertexPartition:
        return cls(side, tuple((i,) for i in range(size)))

    def cell_of(self) -> dict[int, int]:
        return {x: i for i, c in enumerate(self.cells) for x in c}


def _side_size(g: BipartiteGraph, side: str) -> int:
    return g.n_w if side == W else g.n_u


def quotient(g: BipartiteGraph, pw: VertexPartition, pu: VertexPartition) -> BipartiteGraph:
    """Cells adjacent iff some edge joins them; cells numbered by smallest member."""
    for part, side in ((pw, W), (pu, U)):
        if part.side != side:
            raise ValueError(f"expected a partition of side {side}")
        VertexPartition.from_cells(side, part.cells, _side_size(g, side))
    cw, cu = pw.cell_of(), pu.cell_of()
    return BipartiteGraph.from_edges(len(pw.cells), len(pu.cells), ((cw[w], cu[u]) for w, u in g.edges()))


def expand(sigma: BipartiteGraph, p: int) -> BipartiteGraph:
    """Replace each U-vertex u by p copies (u, i), indexed p*u + i, sharing its neighbourhood."""
    if p < 1:
        raise ValueError("p must be positive")
    adj = tuple(tuple(p * u + i for u in nbrs for i in range(p)) for nbrs in sigma.adjacency)
    return BipartiteGraph(sigma.n_w, sigma.n_u * p, adj)


def bicomplement(g: BipartiteGraph) -> BipartiteGraph:
    adj = []
    for nbrs in g.adjacency:
        have = set(nbrs)
        adj.append(tuple(u for u in range(g.n_u) if u not in have))
    return BipartiteGraph(g.n_w, g.n_u, tuple(adj))


def complete_bipartite(n: int, m: int) -> BipartiteGraph:
    return BipartiteGraph(n, m, tuple(tuple(range(m)) for _ in range(n)))


def twin_classes(g: BipartiteGraph, side: str) -> VertexPartition:
    """Partition one side by exact equality of neighbourhoods."""
    if side not in (W, U):
        raise ValueError(f"side must be {W!r} or {U!r}")
    lists = g.adjacency if side == W else g.u_adjacency
    buckets: dict[tuple[int, ...], list[int]] = {}
    for v, nbrs in enumerate(lists):
        buckets.setdefault(tuple(nbrs), []).append(v)
    return VertexPartition.from_cells(side, buckets.values())


def has_twins(g: BipartiteGraph, side: str) -> bool:
    return any(len(c) > 1 for c in twin_classes(g, side).cells)


def is_connected(g: BipartiteGraph) -> bool:
    adj = g.point_adjacency()
    n = len(adj)
    if n == 0:
        return True
    seen = [False] * n
    seen[0] = True
    queue = deque([0])
    count = 1
    while queue:
        v = queue.popleft()
        for x in adj[v]:
            if not seen[x]:
                seen[x] = True
                count += 1
                queue.append(x)
    return count == n


def degrees(g: BipartiteGraph) -> tuple[Counter, Counter, bool]:
    """W-degree multiset, U-degree multiset, and whether both sides are regular."""
    wd = Counter(len(n) for n in g.adjacency)
    ud = Counter(len(n) for n in g.u_adjacency)
    return wd, ud, len(wd) <= 1 and len(ud) <= 1


def is_regular(g: BipartiteGraph) -> bool:
    wd, ud, _ = degrees(g)
    return len(set(wd) | set(ud)) <= 1


# ---------------------------------------------------------------------------
# text format

def format_graph(g: BipartiteGraph) -> str:
    lines = [FORMAT_HEADER, f"parts {g.n_w} {g.n_u}", f"edges {g.edge_count}"]
    lines.extend(f"{w} {u}" for w, u in g.edges())
    return "\n".join(lines) + "\n"


def parse_graph(text: str) -> BipartiteGraph:
    lines = text.splitlines()
    if len(lines) < 3 or lines[0].strip() != FORMAT_HEADER:
        raise ValueError(f"missing header {FORMAT_HEADER!r}")
    head = lines[1].split()
    if len(head) != 3 or head[0] != "parts":
        raise ValueError("line 2 must be 'parts <n_w> <n_u>'")
    n_w, n_u = int(head[1]), int(head[2])
    head = lines[2].split()
    if len(head) != 2 or head[0] != "edges":
        raise ValueError("line 3 must be 'edges <m>'")
    m = int(head[1])
    body = [ln for ln in lines[3:] if ln.strip()]
    if len(body) != m:
        raise ValueError(f"expected {m} edge lines, found {len(body)}")
    edges = []
    for ln in body:
        parts = ln.split()
        if len(parts) != 2:
            raise ValueError(f"bad edge line {ln!r}")
        w, u = int(parts[0]), int(parts[1])
        if not (0 <= w < n_w and 0 <= u < n_u):
            raise ValueError(f"edge ({w}, {u}) out of range")
        if edges and (w, u) <= edges[-1]:
            raise ValueError(f"edge ({w}, {u}) duplicated or out of order")
        edges.append((w, u))
    return BipartiteGraph.from_edges(n_w, n_u, edges)


def read_graph(path) -> BipartiteGraph:
    with open(path, encoding="ascii") as fh:
        return parse_graph(fh.read())


def write_graph(g: BipartiteGraph, path) -> None:
    with open(path, "w", encoding="ascii", newline="\n") as fh:
        fh.write(format_graph(g))
