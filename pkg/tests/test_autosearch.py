import random

import pytest

from ssg.autosearch import (
    ColoredGraph,
    SearchBoundExceeded,
    automorphism_group,
    canonical_form,
    edge_orbit_covers,
    is_isomorphic,
    is_vertex_transitive,
    refine,
    semisymmetry,
)
from ssg.bigraph import U, BipartiteGraph, complete_bipartite, twin_classes
from ssg.families import build_family
from ssg.permgroup import Permutation, PermGroup

P3_FAMILIES = ["sigma3small", "sigma6small", "gamma9", "gamma18"]


def shuffled(g, rng):
    wp, up = list(range(g.n_w)), list(range(g.n_u))
    rng.shuffle(wp)
    rng.shuffle(up)
    return g.relabel(wp, up)


@pytest.mark.parametrize("token", P3_FAMILIES)
def test_canonical_form_relabel_invariance(token):
    g = build_family(token).graph
    ref = canonical_form(g).certificate
    rng = random.Random(token)
    for _ in range(20):
        assert canonical_form(shuffled(g, rng)).certificate == ref


@pytest.mark.parametrize("token", P3_FAMILIES)
def test_automorphisms_preserve_twin_classes(token):
    g = build_family(token).graph
    nw = g.n_w
    classes = {frozenset(nw + u for u in c) for c in twin_classes(g, U).cells}
    for gen in automorphism_group(g).generators:
        assert {frozenset(gen[x] for x in c) for c in classes} == classes


@pytest.mark.parametrize("token", ["gamma9", "gamma18"])
def test_certificate_agrees_with_full(token):
    fb = build_family(token)
    full = semisymmetry(fb.graph, "full")
    cert = semisymmetry(fb.graph, "certificate", fb.action)
    assert full.semisymmetric is True
    assert cert.semisymmetric is True
    if token == "gamma9":
        assert full.as_dict()["aut_order"] == "13060694016"


def test_automorphisms_are_automorphisms():
    g = build_family("gamma9").graph
    res = automorphism_group(g)
    assert res.order == 13060694016
    edges = g.edge_set
    for gen in res.generators:
        for w, u in edges:
            assert (gen[w], gen[g.n_w + u] - g.n_w) in edges


def test_k33_not_semisymmetric():
    k33 = complete_bipartite(3, 3)
    v = semisymmetry(k33, "full")
    assert v.regular and v.edge_transitive and v.vertex_transitive
    assert v.semisymmetric is False
    assert automorphism_group(k33).order == 72


def test_single_edge():
    k11 = complete_bipartite(1, 1)
    assert automorphism_group(k11).order == 2
    assert semisymmetry(k11, "full").semisymmetric is False


def test_unequal_parts_keep_sides():
    res = automorphism_group(complete_bipartite(2, 3))
    assert res.order == 12
    assert sorted(map(len, res.orbits)) == [2, 3]


def test_refine_regular_graph_stays_unit():
    cg = ColoredGraph.of(build_family("gamma9").graph)
    assert len(refine(cg)) == 1
    cells = refine(ColoredGraph.of(build_family("sigma3small").graph))
    assert sorted(map(len, cells)) == [9, 27]


def test_refine_splits_by_degree():
    # path W1-U1-W0-U0: ends and middles, with points numbered W first
    g = BipartiteGraph.from_edges(2, 2, [(0, 0), (0, 1), (1, 1)])
    assert sorted(sorted(c) for c in refine(ColoredGraph.of(g))) == [[0, 3], [1, 2]]
    star = complete_bipartite(1, 3)
    assert sorted(map(len, refine(ColoredGraph.of(star)))) == [1, 3]


def test_iso_negative():
    assert not is_isomorphic(build_family("sigma3small").graph, build_family("sigma6small").graph)


def test_bound():
    with pytest.raises(SearchBoundExceeded):
        automorphism_group(build_family("sigma1:5").graph, bound=100)


def test_vertex_transitive():
    assert is_vertex_transitive(complete_bipartite(2, 2))
    assert not is_vertex_transitive(build_family("gamma9").graph)


def test_certificate_mode_undecided_without_edge_transitivity():
    g = build_family("gamma9").graph
    trivial = PermGroup(g.order, [Permutation.identity(g.order)])
    v = semisymmetry(g, "certificate", trivial)
    assert v.semisymmetric is None and not v.decided
    assert v.as_dict()["semisymmetric"] == "UNDECIDED"


def test_edge_orbit_rejects_non_automorphism():
    g = BipartiteGraph.from_edges(2, 2, [(0, 0), (1, 0), (1, 1)])
    bad = Permutation.parse("(0 1)", 4)
    with pytest.raises(ValueError):
        edge_orbit_covers(g, [bad])
