"""Automorphism groups and canonical forms of bipartite graphs.

Individualisation-refinement search: ordered partitions are refined to
equitable ones, the first smallest non-singleton cell is split in ascending
vertex order, and leaves are compared through the relabelled edge list.
Automorphisms found at leaves prune equivalent siblings (orbit pruning) and
trigger back-jumps to the common ancestor with the first or best leaf.
"""

from __future__ import annotations

import hashlib
from collections import deque
from dataclasses import dataclass, field
from typing import Sequence

from .bigraph import BipartiteGraph, U, W, has_twins, is_regular
from .permgroup import Permutation, PermGroup

DEFAULT_BOUND = 256


class SearchBoundExceeded(ValueError):
    pass


@dataclass(frozen=True)
class ColoredGraph:
    """A bipartite graph plus an initial colouring of its points (W first)."""

    graph: BipartiteGraph
    colors: tuple[int, ...]

    @classmethod
    def of(cls, graph: BipartiteGraph, colors: Sequence[int] | None = None) -> ColoredGraph:
        if colors is None:
            if graph.n_w == graph.n_u:
                colors = (0,) * graph.order
            else:
                colors = (0,) * graph.n_w + (1,) * graph.n_u
        if len(colors) != graph.order:
            raise ValueError("need one colour per vertex")
        return cls(graph, tuple(colors))

    def initial_cells(self) -> list[list[int]]:
        by_color: dict[int, list[int]] = {}
        for v, c in enumerate(self.colors):
            by_color.setdefault(c, []).append(v)
        return [by_color[c] for c in sorted(by_color)]


@dataclass
class AutResult:
    degree: int
    generators: list[Permutation]
    order: int
    orbits: list[tuple[int, ...]]

    def group(self) -> PermGroup:
        return PermGroup(self.degree, self.generators)


@dataclass
class SemisymVerdict:
    regular: bool
    edge_transitive: bool | None
    edge_mode: str
    vertex_transitive: bool | None
    vertex_mode: str
    semisymmetric: bool | None
    certificate: str
    details: dict = field(default_factory=dict)

    @property
    def decided(self) -> bool:
        return self.semisymmetric is not None

    def as_dict(self) -> dict:
        return {
            "regular": self.regular,
            "edge_transitive": self.edge_transitive,
            "edge_mode": self.edge_mode,
            "vertex_transitive": self.vertex_transitive,
            "vertex_mode": self.vertex_mode,
            "semisymmetric": "UNDECIDED" if self.semisymmetric is None else self.semisymmetric,
            "certificate": self.certificate,
            **self.details,
        }


# ---------------------------------------------------------------------------
# ordered partitions

class _Partition:
    """Ordered partition: ``lab`` lists the points, cells are maximal runs
    identified by their start position."""

    __slots__ = ("lab", "cell", "size")

    def __init__(self, lab, cell, size):
        self.lab = lab
        self.cell = cell
        self.size = size

    @classmethod
    def from_cells(cls, n: int, cells: Sequence[Sequence[int]]) -> _Partition:
        lab, cell, size = [], [0] * n, {}
        for c in cells:
            start = len(lab)
            size[start] = len(c)
            for v in c:
                cell[v] = start
                lab.append(v)
        if sorted(lab) != list(range(n)):
            raise ValueError("cells do not partition the vertex set")
        return cls(lab, cell, size)

    def copy(self) -> _Partition:
        return _Partition(self.lab[:], self.cell[:], dict(self.size))

    def starts(self) -> list[int]:
        return sorted(self.size)

    def cells(self) -> list[list[int]]:
        return [self.lab[s:s + self.size[s]] for s in self.starts()]

    def is_discrete(self) -> bool:
        return len(self.size) == len(self.lab)

    def target_cell(self) -> int | None:
        best = None
        for s in self.starts():
            k = self.size[s]
            if k > 1 and (best is None or k < self.size[best]):
                best = s
        return best

    def individualize(self, v: int) -> int:
        start = self.cell[v]
        k = self.size[start]
        pos = self.lab.index(v, start, start + k)
        self.lab[start], self.lab[pos] = self.lab[pos], self.lab[start]
        self.size[start] = 1
        self.size[start + 1] = k - 1
        for x in self.lab[start + 1:start + k]:
            self.cell[x] = start + 1
        return start


def _refine(adj: list[list[int]], part: _Partition, splitters: Sequence[int]) -> None:
    lab, cell, size = part.lab, part.cell, part.size
    queue = deque(sorted(splitters))
    in_queue = set(queue)
    while queue:
        s = queue.popleft()
        in_queue.discard(s)
        counts: dict[int, int] = {}
        for v in lab[s:s + size[s]]:
            for x in adj[v]:
                counts[x] = counts.get(x, 0) + 1
        touched: dict[int, int] = {}
        for x in counts:
            c = cell[x]
            touched[c] = touched.get(c, 0) + 1
        for c in sorted(touched):
            k = size[c]
            if k == 1:
                continue
            members = lab[c:c + k]
            if touched[c] == k:
                first = counts[members[0]]
                if all(counts[x] == first for x in members):
                    continue
            members.sort(key=lambda x: counts.get(x, 0))
            lab[c:c + k] = members
            frags = []
            start = c
            prev = counts.get(members[0], 0)
            for off in range(1, k + 1):
                cur = counts.get(members[off], 0) if off < k else None
                if cur != prev:
                    frags.append((start, c + off - start))
                    start = c + off
                    prev = cur
            for fs, fl in frags:
                size[fs] = fl
                for x in lab[fs:fs + fl]:
                    cell[x] = fs
            if c in in_queue:
                new = [fs for fs, _ in frags if fs != c]
            else:
                largest = max(frags, key=lambda f: f[1])
                new = [fs for fs in (f[0] for f in frags) if fs != largest[0]]
            for fs in new:
                if fs not in in_queue:
                    queue.append(fs)
                    in_queue.add(fs)


def refine(cg: ColoredGraph, partition: Sequence[Sequence[int]] | None = None) -> list[list[int]]:
    """Coarsest equitable refinement of an ordered partition (default: the colouring)."""
    cells = cg.initial_cells() if partition is None else [list(c) for c in partition]
    part = _Partition.from_cells(cg.graph.order, cells)
    _refine(cg.graph.point_adjacency(), part, part.starts())
    return part.cells()


# ---------------------------------------------------------------------------
# search

class _Search:
    def __init__(self, cg: ColoredGraph, bound: int):
        n = cg.graph.order
        if n > bound:
            raise SearchBoundExceeded(f"{n} vertices exceeds the full-search bound {bound}")
        self.n = n
        self.adj = cg.graph.point_adjacency()
        nw = cg.graph.n_w
        self.edges = [(w, nw + u) for w, u in cg.graph.edges()]
        self.header = (cg.graph.n_w, cg.graph.n_u, tuple(len(c) for c in cg.initial_cells()))
        self.gens: list[tuple] = []
        self.first = None
        self.best = None
        self.leaves = 0
        root = _Partition.from_cells(n, cg.initial_cells())
        _refine(self.adj, root, root.starts())
        self._search(root, [])

    def _cert(self, lab: list[int]) -> tuple:
        pos = [0] * self.n
        for i, v in enumerate(lab):
            pos[v] = i
        out = []
        for a, b in self.edges:
            pa, pb = pos[a], pos[b]
            out.append((pa, pb) if pa < pb else (pb, pa))
        out.sort()
        return tuple(out)

    def _add_gen(self, src: list[int], dst: list[int]) -> None:
        img = [0] * self.n
        for a, b in zip(src, dst):
            img[a] = b
        img = tuple(img)
        if any(i != x for i, x in enumerate(img)) and img not in self.gens:
            self.gens.append(img)

    @staticmethod
    def _common(a: list[int], b: list[int]) -> int:
        k = 0
        for x, y in zip(a, b):
            if x != y:
                break
            k += 1
        return k

    def _leaf(self, part: _Partition, path: list[int]) -> int:
        self.leaves += 1
        lab = part.lab[:]
        cert = self._cert(lab)
        if self.first is None:
            self.first = self.best = (lab, path, cert)
            return len(path)
        if cert == self.first[2]:
            self._add_gen(self.first[0], lab)
            return self._common(path, self.first[1])
        if cert == self.best[2]:
            self._add_gen(self.best[0], lab)
            return self._common(path, self.best[1])
        if cert < self.best[2]:
            self.best = (lab, path, cert)
        return len(path)

    def _orbit_roots(self, path: list[int]) -> list[int]:
        parent = list(range(self.n))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for g in self.gens:
            if all(g[v] == v for v in path):
                for i, x in enumerate(g):
                    ri, rx = find(i), find(x)
                    if ri != rx:
                        parent[max(ri, rx)] = min(ri, rx)
        return [find(x) for x in range(self.n)]

    def _search(self, part: _Partition, path: list[int]) -> int:
        depth = len(path)
        if part.is_discrete():
            return self._leaf(part, path)
        start = part.target_cell()
        targets = sorted(part.lab[start:start + part.size[start]])
        done_roots: set[int] = set()
        ngens = -1
        roots = None
        for v in targets:
            if len(self.gens) != ngens:
                ngens = len(self.gens)
                roots = self._orbit_roots(path)
                done_roots = {roots[x] for x in done_roots}
            if roots[v] in done_roots:
                continue
            child = part.copy()
            s = child.individualize(v)
            _refine(self.adj, child, [s])
            back = self._search(child, path + [v])
            done_roots.add(roots[v] if len(self.gens) == ngens else v)
            if back < depth:
                return back
        return depth


def automorphism_group(cg: ColoredGraph | BipartiteGraph, bound: int = DEFAULT_BOUND) -> AutResult:
    if isinstance(cg, BipartiteGraph):
        cg = ColoredGraph.of(cg)
    search = _Search(cg, bound)
    gens = [Permutation(g, check=False) for g in search.gens]
    group = PermGroup(search.n, gens)
    return AutResult(search.n, gens, group.order(), group.orbits())


@dataclass(frozen=True)
class CanonicalForm:
    labeling: tuple[int, ...]  # labeling[v] = canonical label of point v
    certificate: str


def canonical_form(cg: ColoredGraph | BipartiteGraph, bound: int = DEFAULT_BOUND) -> CanonicalForm:
    if isinstance(cg, BipartiteGraph):
        cg = ColoredGraph.of(cg)
    search = _Search(cg, bound)
    lab, _, cert = search.best
    labeling = [0] * search.n
    for i, v in enumerate(lab):
        labeling[v] = i
    text = repr(search.header) + ";" + ";".join(f"{a},{b}" for a, b in cert)
    return CanonicalForm(tuple(labeling), hashlib.sha256(text.encode("ascii")).hexdigest())


def is_isomorphic(g1: BipartiteGraph, g2: BipartiteGraph, bound: int = DEFAULT_BOUND) -> bool:
    if (g1.n_w, g1.n_u, g1.edge_count) != (g2.n_w, g2.n_u, g2.edge_count):
        return False
    return canonical_form(g1, bound).certificate == canonical_form(g2, bound).certificate


# ---------------------------------------------------------------------------
# transitivity and semisymmetry

def edge_orbit_covers(graph: BipartiteGraph, gens: Sequence[Permutation]) -> bool:
    """True iff the orbit of one edge under ``gens`` is the whole edge set.

    Raises ValueError if a generator fails to preserve the edge set.
    """
    nw = graph.n_w
    edges = {(w, nw + u) for w, u in graph.edges()}
    if not edges:
        return True
    for g in gens:
        for a, b in edges:
            ga, gb = g[a], g[b]
            if (ga, gb) not in edges and (gb, ga) not in edges:
                raise ValueError("action does not preserve the edge set")
    start = min(edges)
    seen = {start}
    queue = deque([start])
    while queue:
        a, b = queue.popleft()
        for g in gens:
            ga, gb = g[a], g[b]
            e = (ga, gb) if ga < gb else (gb, ga)
            if e not in seen:
                seen.add(e)
                queue.append(e)
    return len(seen) == len(edges)


def is_vertex_transitive(g: BipartiteGraph, bound: int = DEFAULT_BOUND) -> bool:
    res = automorphism_group(ColoredGraph.of(g, (0,) * g.order), bound)
    return len(res.orbits) <= 1


def semisymmetry(
    g: BipartiteGraph,
    mode: str = "full",
    witness: PermGroup | None = None,
    bound: int = DEFAULT_BOUND,
) -> SemisymVerdict:
    """Regular, edge-transitive and not vertex-transitive?"""
    regular = is_regular(g) and g.edge_count > 0
    if mode == "full":
        res = automorphism_group(ColoredGraph.of(g, (0,) * g.order), bound)
        et = edge_orbit_covers(g, res.generators)
        vt = len(res.orbits) <= 1
        semi = regular and et and not vt
        cert = f"|Aut| = {res.order}; {len(res.orbits)} vertex orbit(s)"
        return SemisymVerdict(regular, et, "full-aut", vt, "full-aut", semi, cert, {"aut_order": str(res.order)})
    if mode != "certificate":
        raise ValueError(f"unknown mode {mode!r}")
    if witness is None:
        raise ValueError("certificate mode needs a witness group")
    if witness.degree != g.order:
        raise ValueError("witness degree must equal the number of vertices")
    et = edge_orbit_covers(g, witness.generators)
    tw, tu = has_twins(g, W), has_twins(g, U)
    if not regular:
        return SemisymVerdict(regular, et or None, "supplied-group", None, "twin-certificate", False, "not regular")
    if not et:
        return SemisymVerdict(
            regular, None, "supplied-group", None, "twin-certificate", None,
            "witness group is not edge-transitive; inconclusive",
        )
    if tw != tu:
        side = U if tu else W
        cert = f"side {side} has twin vertices and the other side has none"
        return SemisymVerdict(regular, True, "supplied-group", False, "twin-certificate", True, cert)
    cert = "both sides have twins" if tw else "both sides are twin-free"
    return SemisymVerdict(regular, True, "supplied-group", None, "twin-certificate", None, cert + "; inconclusive")
