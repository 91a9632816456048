"""Exact linear and affine algebra over GF(p) in dimension at most 3.

Vectors are rows and matrices act on the right, so an affine map sends
``v`` to ``v*M + t`` and conjugating a translation by a linear map gives
``g^-1 t_a g = t_(a g)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations, product
from typing import Iterable, Sequence

from .permgroup import Permutation, PermGroup

MAX_DIM = 3


def _check_dim(n: int) -> None:
    if not 0 < n <= MAX_DIM:
        raise ValueError(f"dimension {n} not supported (max {MAX_DIM})")


@dataclass(frozen=True)
class GFpVector:
    p: int
    coords: tuple[int, ...]

    def __post_init__(self):
        _check_dim(len(self.coords))
        object.__setattr__(self, "coords", tuple(c % self.p for c in self.coords))

    def __add__(self, other: GFpVector) -> GFpVector:
        return GFpVector(self.p, tuple(a + b for a, b in zip(self.coords, other.coords)))

    def __neg__(self) -> GFpVector:
        return GFpVector(self.p, tuple(-a for a in self.coords))

    def scale(self, c: int) -> GFpVector:
        return GFpVector(self.p, tuple(c * a for a in self.coords))

    def __mul__(self, m: GFpMatrix) -> GFpVector:
        return GFpVector(self.p, _vec_mat(self.coords, m.rows, self.p))

    def is_zero(self) -> bool:
        return not any(self.coords)


@dataclass(frozen=True)
class GFpMatrix:
    p: int
    rows: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        n = len(self.rows)
        _check_dim(n)
        if any(len(r) != n for r in self.rows):
            raise ValueError("matrix must be square")
        object.__setattr__(self, "rows", tuple(tuple(x % self.p for x in r) for r in self.rows))

    @classmethod
    def identity(cls, p: int, n: int = 3) -> GFpMatrix:
        return cls(p, tuple(tuple(int(i == j) for j in range(n)) for i in range(n)))

    @classmethod
    def diag(cls, p: int, entries: Sequence[int]) -> GFpMatrix:
        n = len(entries)
        return cls(p, tuple(tuple(entries[i] if i == j else 0 for j in range(n)) for i in range(n)))

    @property
    def n(self) -> int:
        return len(self.rows)

    def __mul__(self, other: GFpMatrix) -> GFpMatrix:
        if self.p != other.p or self.n != other.n:
            raise ValueError("matrix shape or field mismatch")
        return GFpMatrix(self.p, tuple(_vec_mat(r, other.rows, self.p) for r in self.rows))

    def det(self) -> int:
        return det_mod(self.rows, self.p)

    def is_invertible(self) -> bool:
        return self.det() != 0

    def inverse(self) -> GFpMatrix:
        p, n = self.p, self.n
        aug = [list(r) + [int(i == j) for j in range(n)] for i, r in enumerate(self.rows)]
        for col in range(n):
            piv = next((r for r in range(col, n) if aug[r][col]), None)
            if piv is None:
                raise ValueError("singular matrix")
            aug[col], aug[piv] = aug[piv], aug[col]
            inv = pow(aug[col][col], -1, p)
            aug[col] = [x * inv % p for x in aug[col]]
            for r in range(n):
                if r != col and aug[r][col]:
                    f = aug[r][col]
                    aug[r] = [(x - f * y) % p for x, y in zip(aug[r], aug[col])]
        return GFpMatrix(p, tuple(tuple(r[n:]) for r in aug))

    def __pow__(self, l: int) -> GFpMatrix:
        return mat_pow(self, l)

    def __str__(self) -> str:
        return "[" + ", ".join("[" + ", ".join(map(str, r)) + "]" for r in self.rows) + "]"


def _vec_mat(v: Sequence[int], rows: Sequence[Sequence[int]], p: int) -> tuple[int, ...]:
    n = len(rows[0])
    return tuple(sum(v[i] * rows[i][j] for i in range(len(v))) % p for j in range(n))


def det_mod(rows: Sequence[Sequence[int]], p: int) -> int:
    """Determinant mod p by Gaussian elimination."""
    a = [[x % p for x in r] for r in rows]
    n = len(a)
    det = 1
    for col in range(n):
        piv = next((r for r in range(col, n) if a[r][col]), None)
        if piv is None:
            return 0
        if piv != col:
            a[col], a[piv] = a[piv], a[col]
            det = -det
        det = det * a[col][col] % p
        inv = pow(a[col][col], -1, p)
        for r in range(col + 1, n):
            if a[r][col]:
                f = a[r][col] * inv % p
                a[r] = [(x - f * y) % p for x, y in zip(a[r], a[col])]
    return det % p


@lru_cache(maxsize=4096)  # sweeps ask for the same few powers many times
def mat_pow(m: GFpMatrix, l: int) -> GFpMatrix:
    base = m if l >= 0 else m.inverse()
    result = GFpMatrix.identity(m.p, m.n)
    l = abs(l)
    while l:
        if l & 1:
            result = result * base
        base = base * base
        l >>= 1
    return result


def unipotent_x(p: int) -> GFpMatrix:
    """The upper unitriangular matrix [[1,2,2],[0,1,2],[0,0,1]]."""
    return GFpMatrix(p, ((1, 2, 2), (0, 1, 2), (0, 0, 1)))


# ---------------------------------------------------------------------------
# subspaces

def rref(vectors: Iterable[Sequence[int]], p: int) -> tuple[tuple[int, ...], ...]:
    rows = [[x % p for x in v] for v in vectors]
    if not rows:
        return ()
    ncols = len(rows[0])
    r = 0
    for col in range(ncols):
        piv = next((i for i in range(r, len(rows)) if rows[i][col]), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        inv = pow(rows[r][col], -1, p)
        rows[r] = [x * inv % p for x in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][col]:
                f = rows[i][col]
                rows[i] = [(x - f * y) % p for x, y in zip(rows[i], rows[r])]
        r += 1
        if r == len(rows):
            break
    return tuple(tuple(row) for row in rows[:r])


@dataclass(frozen=True)
class Subspace:
    """Subspace of GF(p)^n, stored by its reduced row echelon basis."""

    p: int
    n: int
    basis: tuple[tuple[int, ...], ...]

    @classmethod
    def span(cls, p: int, vectors: Iterable[Sequence[int]], n: int = 3) -> Subspace:
        _check_dim(n)
        vecs = [tuple(v) for v in vectors]
        if any(len(v) != n for v in vecs):
            raise ValueError("vector length mismatch")
        return cls(p, n, rref(vecs, p))

    @classmethod
    def zero(cls, p: int, n: int = 3) -> Subspace:
        return cls(p, n, ())

    @property
    def dim(self) -> int:
        return len(self.basis)

    def vectors(self) -> list[tuple[int, ...]]:
        out = []
        for coeffs in product(range(self.p), repeat=self.dim):
            out.append(tuple(sum(c * b[j] for c, b in zip(coeffs, self.basis)) % self.p for j in range(self.n)))
        return out

    def contains(self, v: Sequence[int]) -> bool:
        return rref(list(self.basis) + [tuple(v)], self.p) == self.basis

    def image(self, m: GFpMatrix) -> Subspace:
        return Subspace.span(self.p, [_vec_mat(b, m.rows, self.p) for b in self.basis], self.n)

    def annihilator(self) -> Subspace:
        """Vectors y with b . y = 0 for every basis vector b."""
        p, n = self.p, self.n
        pivots = [next(j for j, x in enumerate(b) if x) for b in self.basis]
        free = [j for j in range(n) if j not in pivots]
        null = []
        for f in free:
            y = [0] * n
            y[f] = 1
            for b, pc in zip(self.basis, pivots):
                y[pc] = -b[f] % p
            null.append(y)
        return Subspace.span(p, null, n)

    def __add__(self, other: Subspace) -> Subspace:
        return Subspace.span(self.p, list(self.basis) + list(other.basis), self.n)

    def intersect(self, other: Subspace) -> Subspace:
        return (self.annihilator() + other.annihilator()).annihilator()

    def __str__(self) -> str:
        return "<" + ", ".join("(" + ",".join(map(str, b)) + ")" for b in self.basis) + ">"


def enumerate_subspaces(p: int, dim: int, n: int = 3) -> list[Subspace]:
    """All ``dim``-dimensional subspaces of GF(p)^n in canonical order."""
    if not 0 <= dim <= n:
        raise ValueError(f"bad dimension {dim}")
    found = set()
    # one candidate per reduced echelon shape: pivot columns plus free entries
    for pivots in combinations(range(n), dim):
        free_slots = [(r, c) for r, pc in enumerate(pivots) for c in range(pc + 1, n) if c not in pivots]
        for vals in product(range(p), repeat=len(free_slots)):
            rows = [[0] * n for _ in range(dim)]
            for r, pc in enumerate(pivots):
                rows[r][pc] = 1
            for (r, c), v in zip(free_slots, vals):
                rows[r][c] = v
            found.add(Subspace.span(p, rows, n))
    return sorted(found, key=lambda s: s.basis)


def fixed_subspaces(m: GFpMatrix, dim: int) -> list[Subspace]:
    if not m.is_invertible():
        raise ValueError("matrix is singular")
    return [s for s in enumerate_subspaces(m.p, dim, m.n) if s.image(m) == s]


def triple_intersection(s: Subspace, m: GFpMatrix, i: int, j: int, k: int) -> Subspace:
    """Intersection of the images of ``s`` under m^i, m^j and m^k."""
    p = m.p
    if s.dim != 2:
        raise ValueError("expected a 2-dimensional subspace")
    if len({i % p, j % p, k % p}) != 3:
        raise ValueError("exponents must be distinct mod p")
    a, b, c = (s.image(mat_pow(m, e)) for e in (i, j, k))
    return a.intersect(b).intersect(c)


def lemma_determinant(a: GFpVector, m: GFpMatrix, i: int, j: int, k: int) -> int:
    """det of the matrix with rows a*m^-i, a*m^-j, a*m^-k."""
    rows = [(a * mat_pow(m, -e)).coords for e in (i, j, k)]
    return det_mod(rows, m.p)


def lemma_determinant_formula(a: GFpVector, i: int, j: int, k: int) -> int:
    """Closed form 4 a1^3 (i-j)(k-i)(k-j) for the unipotent x."""
    return 4 * a.coords[0] ** 3 * (i - j) * (k - i) * (k - j) % a.p


# ---------------------------------------------------------------------------
# affine maps

@dataclass(frozen=True)
class AffineMap:
    """v -> v * matrix + translation."""

    translation: GFpVector
    matrix: GFpMatrix

    def __post_init__(self):
        if self.translation.p != self.matrix.p:
            raise ValueError("field mismatch")
        if not self.matrix.is_invertible():
            raise ValueError("singular matrix in affine map")

    @property
    def p(self) -> int:
        return self.matrix.p

    @classmethod
    def translation_by(cls, p: int, v: Sequence[int]) -> AffineMap:
        return cls(GFpVector(p, tuple(v)), GFpMatrix.identity(p, len(v)))

    @classmethod
    def linear(cls, m: GFpMatrix) -> AffineMap:
        return cls(GFpVector(m.p, (0,) * m.n), m)

    def apply(self, v: Sequence[int]) -> tuple[int, ...]:
        w = _vec_mat(v, self.matrix.rows, self.p)
        return tuple((x + t) % self.p for x, t in zip(w, self.translation.coords))

    def __mul__(self, other: AffineMap) -> AffineMap:
        """Apply self first, then other."""
        return AffineMap(self.translation * other.matrix + other.translation, self.matrix * other.matrix)

    def inverse(self) -> AffineMap:
        minv = self.matrix.inverse()
        return AffineMap(-(self.translation * minv), minv)


def point_index(v: Sequence[int], p: int) -> int:
    idx = 0
    for x in v:
        idx = idx * p + x % p
    return idx


def index_point(idx: int, p: int, n: int = 3) -> tuple[int, ...]:
    out = []
    for _ in range(n):
        idx, r = divmod(idx, p)
        out.append(r)
    return tuple(reversed(out))


def affine_permutation(f: AffineMap) -> Permutation:
    p, n = f.p, f.matrix.n
    return Permutation(
        [point_index(f.apply(index_point(i, p, n)), p) for i in range(p ** n)], check=False
    )


def affine_perm_rep(maps: Sequence[AffineMap]) -> PermGroup:
    """Permutation group on the p^n points of GF(p)^n (lexicographic index)."""
    if not maps:
        raise ValueError("need at least one affine map")
    p, n = maps[0].p, maps[0].matrix.n
    for f in maps:
        if f.p != p or f.matrix.n != n:
            raise ValueError("affine maps must share p and dimension")
        if not f.matrix.is_invertible():
            raise ValueError("singular matrix")
    return PermGroup(p ** n, [affine_permutation(f) for f in maps])
