"""Bi-coset graphs B(G, L, R; D).

W is the set of right cosets of L, U the right cosets of R, and Lg ~ Rdg for
every g in G and d in D. G acts on both coset sets by right multiplication.
D is given by double-coset representatives and never expanded to a set of
elements; the edge set is the orbit of the seed edges (L, Rd) under G.

With several representatives the degree formula is summed over the double
cosets they represent; the single-double-coset case is the classical one.
"""

from __future__ import annotations

import os
from collections import deque
from dataclasses import dataclass, field
from typing import Any, Hashable, Sequence

from .autosearch import edge_orbit_covers
from .bigraph import BipartiteGraph
from .permgroup import Permutation, PermGroup

L_TAG = "L"
R_TAG = "R"
DEFAULT_COSET_BOUND = 10**6


class CosetEnumerationError(RuntimeError):
    pass


def coset_bound() -> int:
    value = os.environ.get("SSG_COSET_BOUND")
    return int(value) if value else DEFAULT_COSET_BOUND


class GroupHandle:
    """What the bi-coset machinery needs from a group.

    Subclasses provide arithmetic, generators and a membership test for each
    designated subgroup; the optional hooks return None when unavailable.
    """

    generators: list

    def identity(self):
        raise NotImplementedError

    def mul(self, a, b):
        raise NotImplementedError

    def inv(self, a):
        raise NotImplementedError

    def subgroup_generators(self, tag: str) -> list:
        raise NotImplementedError

    def contains(self, tag: str, x) -> bool:
        raise NotImplementedError

    def order(self) -> int | None:
        return None

    def subgroup_order(self, tag: str) -> int | None:
        return None

    def perm_rep(self, x) -> Permutation | None:
        return None

    def coset_invariant(self, tag: str, x) -> Hashable:
        return None

    def elements(self):
        return None


class PermGroupHandle(GroupHandle):
    """A permutation group with subgroups given as permutation groups."""

    def __init__(self, group: PermGroup, subgroups: dict[str, PermGroup]):
        self.group = group
        self.subgroups = subgroups
        self.generators = list(group.generators)
        self._orbits: dict[str, list[tuple[int, ...]]] = {}

    def identity(self):
        return Permutation.identity(self.group.degree)

    def mul(self, a, b):
        return a * b

    def inv(self, a):
        return a.inverse()

    def subgroup_generators(self, tag):
        return list(self.subgroups[tag].generators)

    def contains(self, tag, x):
        return self.subgroups[tag].contains(x)

    def order(self):
        return self.group.order()

    def subgroup_order(self, tag):
        return self.subgroups[tag].order()

    def perm_rep(self, x):
        return x

    def coset_invariant(self, tag, x):
        # for each orbit O of H, the set O^g is the same for every g in a coset Hg
        orbits = self._orbits.get(tag)
        if orbits is None:
            orbits = self._orbits[tag] = self.subgroups[tag].orbits()
        img = x.images
        return tuple(img[o[0]] if len(o) == 1 else frozenset(img[i] for i in o) for o in orbits)


@dataclass
class CosetSpace:
    """Right cosets Hg found by breadth-first search from H itself."""

    handle: GroupHandle
    tag: str
    reps: list = field(default_factory=list)
    # parent[i] = (coset index, generator index) that first reached coset i
    parent: list = field(default_factory=list)
    # table[a][i] = index of coset reps[i] * generators[a]
    table: list[list[int]] = field(default_factory=list)
    _buckets: dict = field(default_factory=dict, repr=False)
    _rep_inv: list = field(default_factory=list, repr=False)

    def __len__(self) -> int:
        return len(self.reps)

    def locate(self, x) -> int | None:
        h = self.handle
        for i in self._buckets.get(h.coset_invariant(self.tag, x), ()):
            if h.contains(self.tag, h.mul(x, self._rep_inv[i])):
                return i
        return None

    def _add(self, x, parent) -> int:
        idx = len(self.reps)
        self.reps.append(x)
        self._rep_inv.append(self.handle.inv(x))
        self.parent.append(parent)
        self._buckets.setdefault(self.handle.coset_invariant(self.tag, x), []).append(idx)
        return idx

    def action_of(self, x) -> list[int]:
        """Permutation of coset indices induced by right multiplication with x."""
        h = self.handle
        out = []
        for r in self.reps:
            j = self.locate(h.mul(r, x))
            if j is None:
                raise CosetEnumerationError("coset space not closed under the element")
            out.append(j)
        return out


def enumerate_cosets(handle: GroupHandle, tag: str, bound: int | None = None) -> CosetSpace:
    bound = coset_bound() if bound is None else bound
    one = handle.identity()
    if not handle.contains(tag, one):
        raise CosetEnumerationError(f"membership oracle for {tag} rejects the identity")
    for h in handle.subgroup_generators(tag):
        if not handle.contains(tag, h):
            raise CosetEnumerationError(f"membership oracle for {tag} rejects one of its generators")
    space = CosetSpace(handle, tag)
    gens = handle.generators
    space.table = [[] for _ in gens]
    space._add(one, None)
    queue = deque([0])
    while queue:
        i = queue.popleft()
        r = space.reps[i]
        for a, g in enumerate(gens):
            cand = handle.mul(r, g)
            j = space.locate(cand)
            if j is None:
                if len(space.reps) >= bound:
                    raise CosetEnumerationError(f"more than {bound} cosets of {tag}")
                j = space._add(cand, (i, a))
                queue.append(j)
            space.table[a].append(j)
    n = len(space.reps)
    for row in space.table:
        if sorted(row) != list(range(n)):
            raise CosetEnumerationError(f"membership oracle for {tag} is inconsistent: generator action not a bijection")
    return space


@dataclass
class BiCosetGraphResult:
    graph: BipartiteGraph
    action: PermGroup
    w_space: CosetSpace
    u_space: CosetSpace
    d_reps: list


def build(handle: GroupHandle, d_reps: Sequence[Any], L: str = L_TAG, R: str = R_TAG,
          bound: int | None = None) -> BiCosetGraphResult:
    if not d_reps:
        raise ValueError("need at least one double-coset representative")
    ws = enumerate_cosets(handle, L, bound)
    us = enumerate_cosets(handle, R, bound)
    seeds = set()
    for d in d_reps:
        j = us.locate(d)
        if j is None:
            raise CosetEnumerationError("representative not found among the cosets of R")
        seeds.add((0, j))
    edges = set(seeds)
    queue = deque(sorted(seeds))
    tables = list(zip(ws.table, us.table))
    while queue:
        w, u = queue.popleft()
        for tw, tu in tables:
            e = (tw[w], tu[u])
            if e not in edges:
                edges.add(e)
                queue.append(e)
    graph = BipartiteGraph.from_edges(len(ws), len(us), edges)
    nw = len(ws)
    gens = [Permutation(list(tw) + [nw + x for x in tu], check=False) for tw, tu in tables]
    return BiCosetGraphResult(graph, PermGroup(nw + len(us), gens), ws, us, list(d_reps))


def _orbit(start: int, perms: Sequence[Sequence[int]]) -> set[int]:
    seen = {start}
    queue = deque([start])
    while queue:
        x = queue.popleft()
        for p in perms:
            y = p[x]
            if y not in seen:
                seen.add(y)
                queue.append(y)
    return seen


def degree_contract(handle: GroupHandle, d_reps: Sequence[Any], L: str = L_TAG, R: str = R_TAG,
                    u_space: CosetSpace | None = None) -> tuple[int, int]:
    """(|D|/|R|, |D|/|L|) from subgroup orders and |L : L meet R^d| per representative.

    |L : L meet R^d| is the length of the L-orbit of the coset Rd.
    """
    order_l, order_r = handle.subgroup_order(L), handle.subgroup_order(R)
    if order_l is None or order_r is None:
        raise ValueError("subgroup orders are required")
    us = u_space if u_space is not None else enumerate_cosets(handle, R)
    l_perms = [us.action_of(h) for h in handle.subgroup_generators(L)]
    covered: set[int] = set()
    size_d = 0
    for d in d_reps:
        j = us.locate(d)
        if j in covered:
            raise ValueError("representatives do not lie in distinct double cosets")
        orbit = _orbit(j, l_perms)
        covered |= orbit
        meet = order_l // len(orbit)  # |L meet R^d|
        size_d += order_r * order_l // meet
    if size_d % order_r or size_d % order_l:
        raise ArithmeticError("|D| not divisible by |L| and |R|")
    return size_d // order_r, size_d // order_l


def d_inverse_d_generators(handle: GroupHandle, d_reps: Sequence[Any], L: str = L_TAG, R: str = R_TAG) -> list:
    """Generators of the subgroup generated by D^-1 D.

    Every element l^-1 d1^-1 r d2 l' factors as (l^-1)(d1^-1 r d1)(d1^-1 d2)(l'),
    so L, the conjugates d^-1 R d and the quotients d1^-1 d2 suffice.
    """
    one = handle.identity()
    out = [h for h in handle.subgroup_generators(L)]
    r_gens = handle.subgroup_generators(R)
    for d1 in d_reps:
        d1i = handle.inv(d1)
        for r in r_gens:
            out.append(handle.mul(handle.mul(d1i, r), d1))
        for d2 in d_reps:
            out.append(handle.mul(d1i, d2))
    return [x for x in out if x != one]


def connectivity_criterion(handle: GroupHandle, d_reps: Sequence[Any], L: str = L_TAG, R: str = R_TAG,
                           w_space: CosetSpace | None = None) -> bool:
    """Does D^-1 D generate G?

    The generated subgroup K contains L, so K = G iff K is transitive on the
    cosets of L. When a faithful permutation representation is available the
    order of K is compared with |G| as well.
    """
    gens = d_inverse_d_generators(handle, d_reps, L, R)
    ws = w_space if w_space is not None else enumerate_cosets(handle, L)
    transitive = len(_orbit(0, [ws.action_of(x) for x in gens])) == len(ws)
    order = handle.order()
    if order is not None and gens and handle.perm_rep(gens[0]) is not None:
        reps = [handle.perm_rep(x) for x in gens]
        by_order = PermGroup(reps[0].degree, reps).order() == order
        if by_order != transitive:
            raise RuntimeError("connectivity tests disagree")
    return transitive


def kernel_of_action(result: BiCosetGraphResult, handle: GroupHandle) -> int:
    """|G| / |image of G acting on both coset sets|."""
    order = handle.order()
    if order is None:
        raise ValueError("group order unknown")
    image = result.action.order()
    if order % image:
        raise ArithmeticError("image order does not divide |G|")
    return order // image


def core_intersection_order(result: BiCosetGraphResult, handle: GroupHandle) -> int:
    """Order of Core(L) meet Core(R): the elements fixing every coset.

    With a permutation representation, the pointwise stabiliser of the coset
    points in the combined action; otherwise by scanning all elements.
    """
    ws, us = result.w_space, result.u_space
    rep0 = handle.perm_rep(handle.identity())
    if rep0 is not None:
        n = rep0.degree
        nw, nu = len(ws), len(us)
        gens = []
        for g, tw, tu in zip(handle.generators, ws.table, us.table):
            gens.append(Permutation(handle.perm_rep(g).images + tuple(n + x for x in tw)
                                    + tuple(n + nw + x for x in tu), check=False))
        big = PermGroup(n + nw + nu, gens)
        return big.pointwise_stabilizer(range(n, n + nw + nu)).order()
    elements = handle.elements()
    if elements is None:
        raise ValueError("no permutation representation and no element list")
    count = 0
    for x in elements:
        if all(handle.contains(sp.tag, handle.mul(handle.mul(r, x), rinv))
               for sp in (ws, us) for r, rinv in zip(sp.reps, sp._rep_inv)):
            count += 1
    return count


# ---------------------------------------------------------------------------
# edge-transitive graphs back to bi-coset data

def is_edge_transitive(graph: BipartiteGraph, action: PermGroup) -> bool:
    if action.degree != graph.order:
        raise ValueError("action degree must equal the number of vertices")
    nw = graph.n_w
    for g in action.generators:
        if any(g[w] >= nw for w in range(nw)):
            raise ValueError("action does not preserve the parts")
    return edge_orbit_covers(graph, action.generators)


def from_semitransitive(graph: BipartiteGraph, action: PermGroup, u: int, w: int) -> tuple[list, list, list]:
    """Stabiliser generators of W-vertex ``w`` and U-vertex ``u`` plus one d with u^d adjacent to w.

    Rebuilding with L = G_w, R = G_u and D = R d L gives a graph isomorphic
    to ``graph`` (W-part = cosets of G_w).
    """
    nw = graph.n_w
    if not is_edge_transitive(graph, action):
        raise ValueError("action is not edge-transitive")
    upoint = nw + u
    if len(action.orbit(w)) != nw or len(action.orbit(upoint)) != graph.n_u:
        raise ValueError("action is not semitransitive")
    if not graph.adjacency[w]:
        raise ValueError("vertex w has no neighbours")
    d = action.transversal_element(upoint, nw + graph.adjacency[w][0])
    if d is None:
        raise ValueError("u and w lie in different edge orbits")
    l_gens = action.stabilizer(w).generators
    r_gens = action.stabilizer(upoint).generators
    return list(l_gens), list(r_gens), [d]


def rebuild(graph: BipartiteGraph, action: PermGroup, u: int = 0, w: int = 0) -> tuple[BiCosetGraphResult, PermGroupHandle]:
    l_gens, r_gens, d_reps = from_semitransitive(graph, action, u, w)
    n = action.degree
    handle = PermGroupHandle(action, {L_TAG: PermGroup(n, l_gens), R_TAG: PermGroup(n, r_gens)})
    return build(handle, d_reps), handle
