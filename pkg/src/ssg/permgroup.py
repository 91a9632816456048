"""Permutation groups on {0, ..., n-1}.

Products act left to right: ``(a * b)[i] == b[a[i]]``, i.e. ``i^(ab) = (i^a)^b``.
Stabilizer chains are built with a deterministic Schreier-Sims, so bases,
transversals and strong generators are reproducible between runs.
"""

from __future__ import annotations

import math
import re
from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Sequence


# ---------------------------------------------------------------------------
# raw tuple helpers (hot paths work on tuples, not Permutation objects)

def _mul(a: tuple, b: tuple) -> tuple:
    return tuple([b[x] for x in a])


def _inv(a: tuple) -> tuple:
    out = [0] * len(a)
    for i, x in enumerate(a):
        out[x] = i
    return tuple(out)


def _first_moved(a: tuple) -> int | None:
    for i, x in enumerate(a):
        if i != x:
            return i
    return None


class Permutation:
    """A bijection of {0, ..., degree-1} stored as its image list."""

    __slots__ = ("images", "_hash")

    def __init__(self, images: Iterable[int], check: bool = True):
        images = tuple(images)
        if check and sorted(images) != list(range(len(images))):
            raise ValueError(f"not a permutation: {images!r}")
        self.images = images
        self._hash = None

    @classmethod
    def identity(cls, degree: int) -> Permutation:
        return cls(range(degree), check=False)

    @classmethod
    def from_cycles(cls, degree: int, cycles: Iterable[Sequence[int]]) -> Permutation:
        images = list(range(degree))
        seen = set()
        for cyc in cycles:
            for x in cyc:
                if not 0 <= x < degree:
                    raise ValueError(f"point {x} out of range for degree {degree}")
                if x in seen:
                    raise ValueError(f"point {x} appears twice in cycle notation")
                seen.add(x)
            for a, b in zip(cyc, list(cyc[1:]) + list(cyc[:1])):
                images[a] = b
        return cls(images, check=False)

    @classmethod
    def parse(cls, text: str, degree: int | None = None) -> Permutation:
        """Parse cycle notation such as ``"(0 1 2)(3 4)"``; ``"()"`` is the identity."""
        text = text.strip()
        if not re.fullmatch(r"(\(\s*(\d+(\s*,?\s*\d+)*)?\s*\))+", text):
            raise ValueError(f"bad cycle notation: {text!r}")
        cycles = [
            [int(t) for t in re.split(r"[\s,]+", body.strip())]
            for body in re.findall(r"\(([^()]*)\)", text)
            if body.strip()
        ]
        top = max((max(c) for c in cycles), default=-1) + 1
        if degree is None:
            degree = top
        elif top > degree:
            raise ValueError(f"point {top - 1} out of range for degree {degree}")
        return cls.from_cycles(degree, cycles)

    @property
    def degree(self) -> int:
        return len(self.images)

    def __getitem__(self, i: int) -> int:
        return self.images[i]

    def __mul__(self, other: Permutation) -> Permutation:
        if self.degree != other.degree:
            raise ValueError(f"degree mismatch: {self.degree} vs {other.degree}")
        return Permutation(_mul(self.images, other.images), check=False)

    def inverse(self) -> Permutation:
        return Permutation(_inv(self.images), check=False)

    def __pow__(self, k: int) -> Permutation:
        base = self if k >= 0 else self.inverse()
        result = Permutation.identity(self.degree)
        k = abs(k)
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def is_identity(self) -> bool:
        return all(i == x for i, x in enumerate(self.images))

    def cycles(self) -> list[tuple[int, ...]]:
        seen = set()
        out = []
        for i in range(self.degree):
            if i in seen or self.images[i] == i:
                continue
            cyc = [i]
            seen.add(i)
            j = self.images[i]
            while j != i:
                cyc.append(j)
                seen.add(j)
                j = self.images[j]
            out.append(tuple(cyc))
        return out

    def order(self) -> int:
        return math.lcm(*(len(c) for c in self.cycles())) if not self.is_identity() else 1

    def __eq__(self, other) -> bool:
        return isinstance(other, Permutation) and self.images == other.images

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(self.images)
        return self._hash

    def __lt__(self, other: Permutation) -> bool:
        return self.images < other.images

    def __str__(self) -> str:
        cyc = self.cycles()
        return "".join("(" + " ".join(map(str, c)) + ")" for c in cyc) or "()"

    def __repr__(self) -> str:
        return f"Permutation({self}, degree={self.degree})"


def multiply(a: Permutation, b: Permutation) -> Permutation:
    """Left-to-right product: apply ``a`` first, then ``b``."""
    return a * b


# ---------------------------------------------------------------------------
# stabilizer chains

@dataclass
class StabilizerChain:
    degree: int
    base: list[int]
    # gens[l]: strong generators fixing base[:l] pointwise
    gens: list[list[tuple]]
    # transversals[l][point] = u with base[l]^u == point
    transversals: list[dict[int, tuple]]
    _inverses: list[dict[int, tuple]] = field(default_factory=list, repr=False)

    def order(self) -> int:
        return math.prod(len(t) for t in self.transversals)

    def sift(self, h: tuple, start: int = 0) -> tuple[tuple, int]:
        for level in range(start, len(self.base)):
            b = h[self.base[level]]
            inv = self._inverses[level].get(b)
            if inv is None:
                return h, level
            h = _mul(h, inv)
        return h, len(self.base)

    def contains(self, h: tuple) -> bool:
        h, level = self.sift(h)
        return level == len(self.base) and _first_moved(h) is None


def _transversal(n: int, point: int, gens: list[tuple]) -> dict[int, tuple]:
    trans = {point: tuple(range(n))}
    queue = deque([point])
    while queue:
        gamma = queue.popleft()
        u = trans[gamma]
        for s in gens:
            delta = s[gamma]
            if delta not in trans:
                trans[delta] = _mul(u, s)
                queue.append(delta)
    return trans


def schreier_sims(degree: int, generators: Sequence[tuple], base_prefix: Sequence[int] = ()) -> StabilizerChain:
    """Deterministic Schreier-Sims.

    The base starts with ``base_prefix`` (kept even where redundant) and is
    extended by the smallest point moved by the element that forced the
    extension.
    """
    ident = tuple(range(degree))
    gens = []
    for g in generators:
        if g != ident and g not in gens:
            gens.append(g)
    base = []
    for b in base_prefix:
        if b not in base:
            base.append(b)
    for g in gens:
        if all(g[b] == b for b in base):
            base.append(_first_moved(g))

    chain = StabilizerChain(degree, base, [], [], [])
    for level, b in enumerate(base):
        level_gens = [g for g in gens if all(g[x] == x for x in base[:level])]
        chain.gens.append(level_gens)
        chain.transversals.append(_transversal(degree, b, level_gens))
        chain._inverses.append({k: _inv(v) for k, v in chain.transversals[-1].items()})

    i = len(base) - 1
    while i >= 0:
        restart = False
        trans = chain.transversals[i]
        for beta, u in list(trans.items()):
            for s in chain.gens[i]:
                g1 = _mul(u, s)
                u2 = trans[s[beta]]
                if g1 == u2:
                    continue
                h, j = chain.sift(_mul(g1, chain._inverses[i][s[beta]]), i + 1)
                if j == len(chain.base):
                    moved = _first_moved(h)
                    if moved is None:
                        continue
                    chain.base.append(moved)
                    chain.gens.append([])
                    chain.transversals.append({})
                    chain._inverses.append({})
                for level in range(i + 1, j + 1):
                    chain.gens[level].append(h)
                    chain.transversals[level] = _transversal(degree, chain.base[level], chain.gens[level])
                    chain._inverses[level] = {k: _inv(v) for k, v in chain.transversals[level].items()}
                i = j
                restart = True
                break
            if restart:
                break
        if not restart:
            i -= 1
    return chain


# ---------------------------------------------------------------------------
# groups

@dataclass(frozen=True)
class BlockSystem:
    degree: int
    cells: tuple[tuple[int, ...], ...]

    @classmethod
    def from_cells(cls, degree: int, cells: Iterable[Iterable[int]]) -> BlockSystem:
        cells = tuple(sorted(tuple(sorted(c)) for c in cells))
        flat = sorted(x for c in cells for x in c)
        if flat != list(range(degree)):
            raise ValueError("cells do not partition the point set")
        return cls(degree, cells)

    @property
    def block_size(self) -> int:
        return len(self.cells[0]) if self.cells else 0

    @property
    def block_count(self) -> int:
        return len(self.cells)

    def block_of(self) -> list[int]:
        out = [0] * self.degree
        for idx, cell in enumerate(self.cells):
            for x in cell:
                out[x] = idx
        return out

    def is_trivial(self) -> bool:
        return self.block_count in (1, self.degree)


class PermGroup:
    """Finitely generated permutation group with a lazily built stabilizer chain."""

    def __init__(self, degree: int, generators: Iterable[Permutation | Sequence[int]] = ()):
        gens = []
        for g in generators:
            if not isinstance(g, Permutation):
                g = Permutation(g)
            if g.degree != degree:
                raise ValueError(f"generator degree {g.degree} != group degree {degree}")
            gens.append(g)
        self.degree = degree
        self.generators: list[Permutation] = gens
        self._raw = [g.images for g in gens]
        self._chains: dict[tuple, StabilizerChain] = {}

    def __repr__(self) -> str:
        return f"PermGroup(degree={self.degree}, generators={len(self.generators)})"

    # -- chain ---------------------------------------------------------------
    def build_chain(self, base_hint: Sequence[int] | None = None) -> StabilizerChain:
        key = tuple(base_hint or ())
        chain = self._chains.get(key)
        if chain is None:
            chain = schreier_sims(self.degree, self._raw, key)
            self._chains[key] = chain
        return chain

    def _chain(self) -> StabilizerChain:
        if self._chains:
            return next(iter(self._chains.values()))
        return self.build_chain()

    def order(self) -> int:
        return self._chain().order()

    def contains(self, x: Permutation) -> bool:
        if x.degree != self.degree:
            raise ValueError(f"degree mismatch: {x.degree} vs {self.degree}")
        return self._chain().contains(x.images)

    __contains__ = contains

    def is_trivial(self) -> bool:
        return all(g.is_identity() for g in self.generators)

    # -- orbits --------------------------------------------------------------
    def orbit(self, point: int) -> set[int]:
        if not 0 <= point < self.degree:
            raise ValueError(f"point {point} out of range")
        seen = {point}
        queue = deque([point])
        while queue:
            x = queue.popleft()
            for g in self._raw:
                y = g[x]
                if y not in seen:
                    seen.add(y)
                    queue.append(y)
        return seen

    def orbits(self) -> list[tuple[int, ...]]:
        done = set()
        out = []
        for x in range(self.degree):
            if x not in done:
                orb = self.orbit(x)
                done |= orb
                out.append(tuple(sorted(orb)))
        return out

    def is_transitive(self) -> bool:
        return self.degree <= 1 or len(self.orbit(0)) == self.degree

    # -- subgroups and actions -----------------------------------------------
    def pointwise_stabilizer(self, points: Iterable[int]) -> PermGroup:
        pts = []
        for x in points:
            if not 0 <= x < self.degree:
                raise ValueError(f"point {x} out of range")
            if x not in pts:
                pts.append(x)
        chain = self.build_chain(pts)
        k = len(pts)
        sub = PermGroup(self.degree)
        if k < len(chain.base):
            sub = PermGroup(self.degree, [Permutation(g, check=False) for g in chain.gens[k]])
            sub._chains[tuple(chain.base[k:])] = StabilizerChain(
                self.degree, chain.base[k:], chain.gens[k:], chain.transversals[k:], chain._inverses[k:]
            )
        return sub

    def stabilizer(self, point: int) -> PermGroup:
        return self.pointwise_stabilizer([point])

    def transversal_element(self, point: int, target: int) -> Permutation | None:
        """Some group element mapping ``point`` to ``target`` (None if not in one orbit)."""
        trans = _transversal(self.degree, point, self._raw)
        u = trans.get(target)
        return None if u is None else Permutation(u, check=False)

    def minimal_blocks(self, seed: tuple[int, int]) -> BlockSystem:
        a, b = seed
        if a == b:
            raise ValueError("seed points must be distinct")
        if not self.is_transitive():
            raise ValueError("group is not transitive")
        parent = list(range(self.degree))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        parent[find(b)] = find(a)
        queue = deque([(a, b)])
        while queue:
            x, y = queue.popleft()
            for g in self._raw:
                rx, ry = find(g[x]), find(g[y])
                if rx != ry:
                    parent[ry] = rx
                    queue.append((rx, ry))
        cells: dict[int, list[int]] = {}
        for x in range(self.degree):
            cells.setdefault(find(x), []).append(x)
        return BlockSystem.from_cells(self.degree, cells.values())

    def is_primitive(self) -> bool:
        if not self.is_transitive():
            raise ValueError("group is not transitive")
        return all(self.minimal_blocks((0, i)).block_count == 1 for i in range(1, self.degree))

    def is_invariant_partition(self, blocks: BlockSystem) -> bool:
        block_of = blocks.block_of()
        for g in self._raw:
            for cell in blocks.cells:
                target = block_of[g[cell[0]]]
                if any(block_of[g[x]] != target for x in cell):
                    return False
        return True

    def induced_action(self, blocks: BlockSystem) -> tuple[PermGroup, PermGroup]:
        """Action on the cells of ``blocks`` and its kernel (as a subgroup of self)."""
        if blocks.degree != self.degree or not self.is_invariant_partition(blocks):
            raise ValueError("partition is not invariant under the group")
        n, k = self.degree, blocks.block_count
        block_of = blocks.block_of()
        images = []
        combined = []
        for g in self._raw:
            img = tuple(block_of[g[cell[0]]] for cell in blocks.cells)
            images.append(img)
            combined.append(g + tuple(n + x for x in img))
        image = PermGroup(k, [Permutation(p, check=False) for p in images])
        big = PermGroup(n + k, [Permutation(p, check=False) for p in combined])
        stab = big.pointwise_stabilizer(range(n, n + k))
        kernel = PermGroup(n, [Permutation(g.images[:n], check=False) for g in stab.generators])
        # the stabilizer chain of the kernel carries over: block points are fixed
        for base, chain in stab._chains.items():
            kernel._chains[base] = StabilizerChain(
                n,
                chain.base,
                [[g[:n] for g in lvl] for lvl in chain.gens],
                [{p: u[:n] for p, u in t.items()} for t in chain.transversals],
                [{p: u[:n] for p, u in t.items()} for t in chain._inverses],
            )
        return image, kernel

    def restrict(self, points: Iterable[int]) -> PermGroup:
        """Action on an invariant subset, relabelled in increasing order."""
        pts = sorted(set(points))
        index = {x: i for i, x in enumerate(pts)}
        gens = []
        for g in self._raw:
            try:
                gens.append(Permutation([index[g[x]] for x in pts], check=False))
            except KeyError:
                raise ValueError("point set is not invariant under the group") from None
        return PermGroup(len(pts), gens)


# ---------------------------------------------------------------------------
# text form

def format_group(group: PermGroup) -> str:
    return "".join(f"{g}\n" for g in group.generators)


def parse_group(text: str, degree: int) -> PermGroup:
    gens = [Permutation.parse(line, degree) for line in text.splitlines() if line.strip()]
    return PermGroup(degree, gens)
