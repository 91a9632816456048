import random

import pytest

from ssg import bicoset
from ssg.bigraph import U, W, degrees, has_twins, is_connected
from ssg.families import (
    FamilyError,
    NormalFormElement,
    NormalFormGroup,
    affine_monomial_group,
    block_adjacency_counts,
    build_family,
    center_and_exponent,
    choose_s,
    parse_token,
    primitive_root,
    u_block_partition,
)


@pytest.fixture(scope="module")
def nf5():
    return NormalFormGroup(5)


def conj(group, g, h):
    """g^h = h^-1 g h"""
    return group.mul(group.mul(group.inv(h), g), h)


def test_nf_associativity(nf5):
    rng = random.Random(0)
    elems = nf5.elements()
    for _ in range(1000):
        a, b, c = (rng.choice(elems) for _ in range(3))
        assert nf5.mul(nf5.mul(a, b), c) == nf5.mul(a, nf5.mul(b, c))


def test_nf_inverse(nf5):
    one = nf5.identity()
    for e in nf5.elements():
        assert nf5.mul(e, nf5.inv(e)) == one == nf5.mul(nf5.inv(e), e)


@pytest.mark.parametrize("p", [5, 7])
def test_nf_relations(p):
    g = NormalFormGroup(p)
    a, b, x = g.a, g.b, g.x
    assert g.element_order(a) == p * p
    assert g.element_order(b) == p
    assert g.element_order(x) == p - 1
    assert conj(g, a, b) == g.power(a, 1 + p)
    assert conj(g, a, x) == g.power(a, g.s)
    assert conj(g, b, x) == b


def test_choose_s():
    assert choose_s(5) == 7
    for p in (5, 7, 11):
        s = choose_s(p)
        assert pow(s, p - 1, p * p) == 1


def test_centre_and_exponent(nf5):
    centre, exponent = center_and_exponent(nf5)
    assert exponent == 25
    assert sorted(centre) == sorted(NormalFormElement(5 * t, 0, 0) for t in range(5))


def test_primitive_root():
    assert primitive_root(5) == 2
    assert primitive_root(7) == 3


@pytest.mark.parametrize("token", ["sigma1:4", "sigma2:9", "gamma3:3", "sigma1:x", "sigma4:5", "nope"])
def test_bad_tokens(token):
    with pytest.raises(FamilyError):
        parse_token(token)


def test_bad_prime_message():
    with pytest.raises(FamilyError, match="p must be prime ≥ 5"):
        build_family("sigma1:4")


def test_affine_monomial_group():
    g = affine_monomial_group(3)
    assert g.order() == 1296
    assert g.is_transitive()


SHAPES = {
    "sigma3small": (27, 9, 3, 9),
    "sigma6small": (27, 9, 6, 18),
    "gamma9": (27, 27, 9, 9),
    "gamma18": (27, 27, 18, 18),
    "sigma1:5": (125, 25, 5, 25),
    "sigma2:5": (125, 25, 2, 10),
    "sigma3:5": (125, 25, 4, 20),
    "gamma1:5": (125, 125, 25, 25),
    "gamma2:5": (125, 125, 10, 10),
    "gamma3:5": (125, 125, 20, 20),
}


@pytest.mark.parametrize("token", sorted(SHAPES))
def test_family_shapes(token):
    fb = build_family(token)
    g = fb.graph
    wd, ud, biregular = degrees(g)
    assert (g.n_w, g.n_u, min(wd), min(ud)) == SHAPES[token]
    assert biregular
    assert is_connected(g)
    assert not has_twins(g, W)
    assert fb.token == token
    assert bicoset.is_edge_transitive(g, fb.action)


@pytest.mark.parametrize("token,expected", [("sigma2:5", 2), ("sigma3:5", 4)])
def test_block_adjacency(token, expected):
    fb = build_family(token)
    blocks = u_block_partition(fb)
    assert sorted(len(b) for b in blocks) == [5] * 5
    assert set(block_adjacency_counts(fb)) == {expected}


@pytest.mark.parametrize("which", [1, 2, 3])
def test_expansions_have_u_twins(which):
    g = build_family(f"gamma{which}:5").graph
    assert has_twins(g, U)
    assert not has_twins(g, W)


def test_builds_are_deterministic():
    assert build_family("sigma3:5").graph == build_family("sigma3:5").graph
