import random
from itertools import permutations, product

import pytest

from ssg.gflinalg import (
    AffineMap,
    GFpMatrix,
    GFpVector,
    Subspace,
    det_mod,
    enumerate_subspaces,
    fixed_subspaces,
    index_point,
    lemma_determinant,
    lemma_determinant_formula,
    point_index,
    rref,
    triple_intersection,
    unipotent_x,
)


def cofactor_det(rows, p):
    """Independent 3x3 oracle: first-row cofactor expansion."""
    (a, b, c), (d, e, f), (g, h, i) = rows
    return (a * (e * i - f * h) - b * (d * i - f * g) + c * (d * h - e * g)) % p


@pytest.mark.parametrize("p", [3, 5, 7, 11])
def test_x_power_closed_form(p):
    x = unipotent_x(p)
    for l in range(-3, 2 * p):
        expect = ((1, 2 * l, 2 * l * l), (0, 1, 2 * l), (0, 0, 1))
        expect = tuple(tuple(v % p for v in row) for row in expect)
        assert (x ** l).rows == expect


@pytest.mark.parametrize("p", [5, 7])
def test_det_against_cofactor(p):
    rng = random.Random(p)
    for _ in range(200):
        rows = [[rng.randrange(p) for _ in range(3)] for _ in range(3)]
        assert det_mod(rows, p) == cofactor_det(rows, p)


@pytest.mark.parametrize("p", [5, 7])
def test_lemma_determinant_random(p):
    rng = random.Random(10 * p)
    x = unipotent_x(p)
    for _ in range(200):
        a = GFpVector(p, tuple(rng.randrange(p) for _ in range(3)))
        i, j, k = (rng.randrange(p) for _ in range(3))
        rows = [(a * (x ** -e)).coords for e in (i, j, k)]
        assert cofactor_det(rows, p) == lemma_determinant(a, x, i, j, k) == lemma_determinant_formula(a, i, j, k)


def test_fixed_subspaces_p5():
    x = unipotent_x(5)
    assert [s.basis for s in fixed_subspaces(x, 1)] == [((0, 0, 1),)]
    assert [s.basis for s in fixed_subspaces(x, 2)] == [((0, 1, 0), (0, 0, 1))]


@pytest.mark.parametrize("p", [3, 5])
def test_subspace_counts(p):
    assert len(enumerate_subspaces(p, 1)) == p * p + p + 1
    assert len(enumerate_subspaces(p, 2)) == p * p + p + 1


def test_subspace_enumeration_p3_matches_brute_force():
    p = 3
    planes = {frozenset(Subspace.span(p, [u, v]).vectors())
              for u, v in product(product(range(p), repeat=3), repeat=2)}
    planes = {s for s in planes if len(s) == p * p}
    assert planes == {frozenset(s.vectors()) for s in enumerate_subspaces(p, 2)}


def test_triple_intersection_sweep_p5():
    p = 5
    x = unipotent_x(p)
    planes = [s for s in enumerate_subspaces(p, 2) if not s.contains((0, 0, 1))]
    assert len(planes) == p * p
    for s in planes:
        for i, j, k in permutations(range(p), 3):
            assert triple_intersection(s, x, i, j, k).dim == 0


def test_triple_intersection_rejects_repeats():
    x = unipotent_x(5)
    s = enumerate_subspaces(5, 2)[0]
    with pytest.raises(ValueError):
        triple_intersection(s, x, 1, 1, 2)


def test_rref_idempotent():
    rng = random.Random(3)
    for _ in range(50):
        vs = [[rng.randrange(7) for _ in range(3)] for _ in range(rng.randint(1, 4))]
        r = rref(vs, 7)
        assert rref(r, 7) == r


def test_intersection_dimension_formula():
    rng = random.Random(4)
    p = 5
    for _ in range(50):
        a = Subspace.span(p, [[rng.randrange(p) for _ in range(3)] for _ in range(2)])
        b = Subspace.span(p, [[rng.randrange(p) for _ in range(3)] for _ in range(2)])
        assert (a + b).dim + a.intersect(b).dim == a.dim + b.dim


def test_matrix_inverse():
    rng = random.Random(8)
    p = 7
    for _ in range(30):
        m = GFpMatrix(p, tuple(tuple(rng.randrange(p) for _ in range(3)) for _ in range(3)))
        if m.is_invertible():
            assert m * m.inverse() == GFpMatrix.identity(p)


def test_affine_composition_is_homomorphism():
    p = 3
    x = unipotent_x(p)
    f = AffineMap.translation_by(p, (1, 2, 0)) * AffineMap.linear(x)
    g = AffineMap.linear(GFpMatrix.diag(p, (2, 1, 2))) * AffineMap.translation_by(p, (0, 1, 1))
    for v in product(range(p), repeat=3):
        assert (f * g).apply(v) == g.apply(f.apply(v))
        assert f.inverse().apply(f.apply(v)) == v


def test_point_index_round_trip():
    for idx in range(27):
        assert point_index(index_point(idx, 3), 3) == idx
    assert point_index((1, 2, 0), 3) == 15


@pytest.mark.parametrize("p", [3, 5, 7, 11])
def test_x_has_order_p(p):
    x = unipotent_x(p)
    assert x ** p == GFpMatrix.identity(p)
    assert x ** 1 != GFpMatrix.identity(p)
