"""Constructors for the explicit graphs and their edge-transitive groups.

Family tokens: sigma3small, sigma6small, gamma9, gamma18 (all over GF(3))
and sigma1:p, sigma2:p, sigma3:p, gamma1:p, gamma2:p, gamma3:p for primes
p >= 5.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from itertools import product
from typing import NamedTuple

from . import bicoset
from .bicoset import L_TAG, R_TAG, GroupHandle, PermGroupHandle
from .bigraph import BipartiteGraph, bicomplement, expand
from .gflinalg import AffineMap, GFpMatrix, affine_perm_rep, point_index, unipotent_x
from .permgroup import Permutation, PermGroup

SMALL_NAMES = ("sigma3small", "sigma6small", "gamma9", "gamma18")
PARAM_NAMES = ("sigma1", "sigma2", "sigma3", "gamma1", "gamma2", "gamma3")


class FamilyError(ValueError):
    pass


def is_prime(n: int) -> bool:
    return n >= 2 and all(n % q for q in range(2, math.isqrt(n) + 1))


def _check_p(p: int) -> None:
    if not (is_prime(p) and p >= 5):
        raise FamilyError(f"p must be prime ≥ 5 (got {p})")


def primitive_root(p: int) -> int:
    for g in range(2, p):
        if all(pow(g, (p - 1) // q, p) != 1 for q in range(2, p) if (p - 1) % q == 0 and is_prime(q)):
            return g
    return 1


@dataclass
class FamilyBuild:
    name: str
    p: int
    graph: BipartiteGraph
    action: PermGroup
    provenance: dict = field(default_factory=dict)

    @property
    def token(self) -> str:
        return self.name if self.name in SMALL_NAMES else f"{self.name}:{self.p}"


# ---------------------------------------------------------------------------
# helpers on actions

def extend_to_u(graph: BipartiteGraph, w_perm: Permutation) -> Permutation:
    """Extend a permutation of W to W+U by matching U-neighbourhoods (U twin-free)."""
    nw = graph.n_w
    by_nbhd = {frozenset(ws): u for u, ws in enumerate(graph.u_adjacency)}
    if len(by_nbhd) != graph.n_u:
        raise ValueError("U-side has twins; extension by neighbourhoods is ambiguous")
    images = list(w_perm.images)
    for u, ws in enumerate(graph.u_adjacency):
        target = by_nbhd.get(frozenset(w_perm[w] for w in ws))
        if target is None:
            raise ValueError("permutation of W does not extend to an automorphism")
        images.append(nw + target)
    return Permutation(images, check=False)


def lift_to_expansion(action: PermGroup, n_w: int, n_u: int, p: int) -> PermGroup:
    """Fibre-trivial lift of each generator plus the simultaneous fibre shift."""
    gens = []
    for g in action.generators:
        img = list(g.images[:n_w])
        for u in range(n_u):
            target = g[n_w + u] - n_w
            img.extend(n_w + p * target + i for i in range(p))
        gens.append(Permutation(img, check=False))
    shift = list(range(n_w)) + [n_w + p * u + (i + 1) % p for u in range(n_u) for i in range(p)]
    gens.append(Permutation(shift, check=False))
    return PermGroup(n_w + n_u * p, gens)


# ---------------------------------------------------------------------------
# GF(3) examples

def _monomial_generators(p: int) -> list[GFpMatrix]:
    """Generators of the 3x3 monomial matrices over GF(p)."""
    return [
        GFpMatrix(p, ((0, 1, 0), (0, 0, 1), (1, 0, 0))),
        GFpMatrix(p, ((0, 1, 0), (1, 0, 0), (0, 0, 1))),
        GFpMatrix.diag(p, (primitive_root(p), 1, 1)),
    ]


def affine_monomial_group(p: int = 3) -> PermGroup:
    """Translations extended by monomial matrices, acting on GF(p)^3."""
    maps = [AffineMap.translation_by(p, e) for e in ((1, 0, 0), (0, 1, 0), (0, 0, 1))]
    maps += [AffineMap.linear(m) for m in _monomial_generators(p)]
    return affine_perm_rep(maps)


def sigma_small_graph(variant: int) -> BipartiteGraph:
    """Points of GF(3)^3 against the nine planes a + V_i, V_i = {coordinate i = 0}.

    Plane a + V_i is U-vertex 3*i + a_i.
    """
    if variant not in (3, 6):
        raise FamilyError("variant must be 3 or 6")
    edges = []
    for a in product(range(3), repeat=3):
        w = point_index(a, 3)
        edges.extend((w, 3 * i + a[i]) for i in range(3))
    g = BipartiteGraph.from_edges(27, 9, edges)
    return g if variant == 3 else bicomplement(g)


def build_sigma_small(variant: int) -> FamilyBuild:
    graph = sigma_small_graph(variant)
    w_group = affine_monomial_group(3)
    action = PermGroup(graph.order, [extend_to_u(graph, g) for g in w_group.generators])
    return FamilyBuild(f"sigma{variant}small", 3, graph, action, {"w_group": w_group})


def build_gamma_small(variant: int) -> FamilyBuild:
    if variant not in (9, 18):
        raise FamilyError("variant must be 9 or 18")
    sigma = build_sigma_small(3 if variant == 9 else 6)
    return _expanded(f"gamma{variant}", sigma)


def _expanded(name: str, sigma: FamilyBuild) -> FamilyBuild:
    p = sigma.p
    g = sigma.graph
    action = lift_to_expansion(sigma.action, g.n_w, g.n_u, p)
    return FamilyBuild(name, p, expand(g, p), action, {"sigma": sigma})


# ---------------------------------------------------------------------------
# sigma_1(p): affine group with the unipotent x

def sigma1_group(p: int) -> PermGroupHandle:
    _check_p(p)
    g = primitive_root(p)
    x = unipotent_x(p)
    # diag(s^2/t, s, t) for (s, t) = (g, 1) and (1, g)
    h1 = GFpMatrix.diag(p, (g * g, g, 1))
    h2 = GFpMatrix.diag(p, (pow(g, -1, p), 1, g))
    t1, t2, t3 = (AffineMap.translation_by(p, e) for e in ((1, 0, 0), (0, 1, 0), (0, 0, 1)))
    lx, lh1, lh2 = (AffineMap.linear(m) for m in (x, h1, h2))
    rep = affine_perm_rep([t1, t2, t3, lx, lh1, lh2])
    t1p, t2p, t3p, xp, h1p, h2p = rep.generators
    n = rep.degree
    subgroups = {
        L_TAG: PermGroup(n, [xp, h1p, h2p]),
        R_TAG: PermGroup(n, [t1p, t2p, h1p, h2p]),
    }
    return PermGroupHandle(rep, subgroups)


def build_sigma1(p: int) -> FamilyBuild:
    handle = sigma1_group(p)
    one = handle.identity()
    result = bicoset.build(handle, [one])
    return FamilyBuild("sigma1", p, result.graph, result.action,
                       {"handle": handle, "result": result, "d_reps": [one]})


# ---------------------------------------------------------------------------
# sigma_2(p): S_p wreath the dihedral group

def _block_perm(p: int, block: int, cycles) -> Permutation:
    return Permutation.from_cycles(p * p, [[p * block + j for j in c] for c in cycles])


def _shift(p: int) -> Permutation:
    return Permutation([p * ((b + 1) % p) + j for b in range(p) for j in range(p)], check=False)


def _reflection(p: int) -> Permutation:
    return Permutation([p * (-b % p) + (-j % p) for b in range(p) for j in range(p)], check=False)


def sigma2_group(p: int) -> PermGroupHandle:
    """F = S_p wr <shift, reflection> on p blocks of p points (point p*b + j).

    The reflection negates block index and in-block point together. H is the
    stabiliser of in-block point 0, sitting in block 0 for R and in blocks
    (p-1)/2 and (p+1)/2 for L, so the reflection normalises both.
    """
    _check_p(p)
    n = p * p
    full = [[(0, 1)], [tuple(range(p))]]
    h = [[(1, 2)], [tuple(range(1, p))]]
    sigma, tau = _shift(p), _reflection(p)
    gens = [_block_perm(p, 0, c) for c in full] + [sigma, tau]

    def base(h_blocks):
        out = []
        for b in range(p):
            for c in (h if b in h_blocks else full):
                out.append(_block_perm(p, b, c))
        return out

    subgroups = {
        L_TAG: PermGroup(n, base({(p - 1) // 2, (p + 1) // 2}) + [tau]),
        R_TAG: PermGroup(n, base({0}) + [tau]),
    }
    handle = PermGroupHandle(PermGroup(n, gens), subgroups)
    handle.base_group_generators = [_block_perm(p, b, c) for b in range(p) for c in full]
    return handle


def build_sigma2(p: int) -> FamilyBuild:
    handle = sigma2_group(p)
    d = _shift(p) ** ((p - 1) // 2)
    result = bicoset.build(handle, [d])
    return FamilyBuild("sigma2", p, result.graph, result.action,
                       {"handle": handle, "result": result, "d_reps": [d],
                        "block_generators": handle.base_group_generators})


# ---------------------------------------------------------------------------
# sigma_3(p): metacyclic p-group extended by x

class NormalFormElement(NamedTuple):
    """a^i b^j x^k with i mod p^2, j mod p, k mod p-1."""

    i: int
    j: int
    k: int


def choose_s(p: int) -> int:
    """Smallest s >= 2 of multiplicative order exactly p-1 modulo p^2."""
    m = p * p
    for s in range(2, m):
        if math.gcd(s, m) != 1 or pow(s, p - 1, m) != 1:
            continue
        if all(pow(s, d, m) != 1 for d in range(1, p - 1) if (p - 1) % d == 0):
            return s
    raise ArithmeticError(f"no element of order {p - 1} mod {m}")


def nf_multiply(e1: NormalFormElement, e2: NormalFormElement, p: int, s: int) -> NormalFormElement:
    """Product in P x| <x> with a^b = a^(1+p), a^x = a^s, b^x = b.

    Moving b^j1 x^k1 past a^i2 turns it into a^(i2 * s^-k1 * (1+p)^-j1).
    """
    m = p * p
    twist = pow(s, -e1.k, m) * pow(1 + p, -e1.j, m)
    return NormalFormElement((e1.i + e2.i * twist) % m, (e1.j + e2.j) % p, (e1.k + e2.k) % (p - 1))


class NormalFormGroup(GroupHandle):
    """F = P x| <x>, elements in normal form; L = <x>, R = <b><x>."""

    def __init__(self, p: int, s: int | None = None):
        _check_p(p)
        self.p = p
        self.s = choose_s(p) if s is None else s
        self.a = NormalFormElement(1, 0, 0)
        self.b = NormalFormElement(0, 1, 0)
        self.x = NormalFormElement(0, 0, 1)
        self.generators = [self.a, self.b, self.x]
        check_x_action(self)

    def identity(self):
        return NormalFormElement(0, 0, 0)

    def mul(self, e1, e2):
        return nf_multiply(e1, e2, self.p, self.s)

    def inv(self, e):
        p, m = self.p, self.p * self.p
        # (a^i b^j x^k)^-1 = x^-k b^-j a^-i, then collect
        out = self.identity()
        for f in (NormalFormElement(0, 0, -e.k % (p - 1)), NormalFormElement(0, -e.j % p, 0),
                  NormalFormElement(-e.i % m, 0, 0)):
            out = self.mul(out, f)
        return out

    def power(self, e, n: int):
        out = self.identity()
        for _ in range(n):
            out = self.mul(out, e)
        return out

    def subgroup_generators(self, tag):
        return [self.x] if tag == L_TAG else [self.b, self.x]

    def contains(self, tag, e):
        if tag == L_TAG:
            return e.i == 0 and e.j == 0
        return e.i == 0

    def order(self):
        return self.p ** 3 * (self.p - 1)

    def subgroup_order(self, tag):
        return self.p - 1 if tag == L_TAG else self.p * (self.p - 1)

    def coset_invariant(self, tag, e):
        m = self.p * self.p
        if tag == L_TAG:
            return (e.i * pow(self.s, e.k, m) % m, e.j)
        return e.i * pow(self.s, e.k, m) * pow(1 + self.p, e.j, m) % m

    def elements(self):
        p = self.p
        return [NormalFormElement(i, j, k) for i in range(p * p) for j in range(p) for k in range(p - 1)]

    def p_elements(self):
        p = self.p
        return [NormalFormElement(i, j, 0) for i in range(p * p) for j in range(p)]

    def element_order(self, e) -> int:
        one, cur, n = self.identity(), e, 1
        while cur != one:
            cur = self.mul(cur, e)
            n += 1
        return n


def check_x_action(group: NormalFormGroup) -> None:
    """x must induce an automorphism of P of order p-1 (a -> a^s, b -> b)."""
    p, mul, inv = group.p, group.mul, group.inv
    a, b, x = group.a, group.b, group.x
    xi = inv(x)

    def conj(e):
        return mul(mul(xi, e), x)

    ok = conj(a) == group.power(a, group.s) and conj(b) == b
    ao, bo = conj(a), conj(b)
    # images must satisfy the defining relations of P
    ok = ok and group.power(ao, p * p) == group.identity() and group.power(bo, p) == group.identity()
    ok = ok and mul(mul(inv(bo), ao), bo) == group.power(ao, 1 + p)
    # iterate the automorphism: order exactly p-1 on a
    e, n = a, 0
    while True:
        e = conj(e)
        n += 1
        if e == a or n > p:
            break
    if not ok or n != p - 1:
        raise FamilyError("x-action inconsistent")


def build_sigma3(p: int) -> FamilyBuild:
    group = NormalFormGroup(p)
    result = bicoset.build(group, [group.a])
    c = NormalFormElement(p, 0, 0)
    return FamilyBuild("sigma3", p, result.graph, result.action,
                       {"handle": group, "result": result, "d_reps": [group.a], "block_generators": [c],
                        "s": group.s})


def center_and_exponent(group: NormalFormGroup) -> tuple[list[NormalFormElement], int]:
    """Centre of P = <a, b> and its exponent, by exhaustive normal-form arithmetic."""
    elems = group.p_elements()
    gens = [group.a, group.b]
    centre = [e for e in elems if all(group.mul(e, g) == group.mul(g, e) for g in gens)]
    exponent = math.lcm(*(group.element_order(e) for e in elems))
    return centre, exponent


# ---------------------------------------------------------------------------
# expansions and dispatch

def build_gamma_family(which: int, p: int) -> FamilyBuild:
    builders = {1: build_sigma1, 2: build_sigma2, 3: build_sigma3}
    if which not in builders:
        raise FamilyError("which must be 1, 2 or 3")
    return _expanded(f"gamma{which}", builders[which](p))


def u_block_partition(build: FamilyBuild) -> list[tuple[int, ...]]:
    """U-blocks induced by the normal subgroup recorded in the build (sigma2, sigma3)."""
    prov = build.provenance
    space = prov["result"].u_space
    perms = [space.action_of(g) for g in prov["block_generators"]]
    seen, blocks = set(), []
    for u in range(len(space)):
        if u in seen:
            continue
        orb = bicoset._orbit(u, perms)
        seen |= orb
        blocks.append(tuple(sorted(orb)))
    return blocks


def block_adjacency_counts(build: FamilyBuild) -> list[int]:
    """For each W-vertex, the number of distinct U-blocks among its neighbours."""
    block_of = {}
    for idx, blk in enumerate(u_block_partition(build)):
        for u in blk:
            block_of[u] = idx
    return [len({block_of[u] for u in nbrs}) for nbrs in build.graph.adjacency]


def parse_token(token: str) -> tuple[str, int]:
    if token in SMALL_NAMES:
        return token, 3
    name, sep, arg = token.partition(":")
    if name not in PARAM_NAMES or not sep:
        raise FamilyError(f"unknown family token {token!r}")
    try:
        p = int(arg)
    except ValueError:
        raise FamilyError(f"bad parameter in {token!r}") from None
    _check_p(p)
    return name, p


def build_family(token: str) -> FamilyBuild:
    name, p = parse_token(token)
    if name == "sigma3small":
        return build_sigma_small(3)
    if name == "sigma6small":
        return build_sigma_small(6)
    if name == "gamma9":
        return build_gamma_small(9)
    if name == "gamma18":
        return build_gamma_small(18)
    which = int(name[-1])
    if name.startswith("sigma"):
        return {1: build_sigma1, 2: build_sigma2, 3: build_sigma3}[which](p)
    return build_gamma_family(which, p)
