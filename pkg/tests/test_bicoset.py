import random

import pytest

from ssg import bicoset
from ssg.autosearch import is_isomorphic
from ssg.bicoset import L_TAG, R_TAG, PermGroupHandle
from ssg.bigraph import degrees, is_connected
from ssg.families import build_family
from ssg.permgroup import Permutation, PermGroup


def random_element(rng, group: PermGroup):
    x = Permutation.identity(group.degree)
    for _ in range(12):
        x = x * rng.choice(group.generators)
    return x


def random_setup(seed):
    rng = random.Random(seed)
    while True:
        n = rng.randint(3, 6)
        gens = []
        for _ in range(2):
            images = list(range(n))
            rng.shuffle(images)
            gens.append(Permutation(images))
        g = PermGroup(n, gens)
        if 1 < g.order() <= 200 and g.generators:
            break
    sub = {tag: PermGroup(n, [random_element(rng, g) for _ in range(rng.randint(0, 1))]) for tag in (L_TAG, R_TAG)}
    handle = PermGroupHandle(g, sub)
    d_reps = [random_element(rng, g)]
    return handle, d_reps


@pytest.mark.parametrize("seed", range(20))
def test_connectivity_criterion_matches_bfs(seed):
    handle, d_reps = random_setup(seed)
    result = bicoset.build(handle, d_reps)
    assert bicoset.connectivity_criterion(handle, d_reps, w_space=result.w_space) == is_connected(result.graph)


@pytest.mark.parametrize("seed", range(20))
def test_degree_contract_matches_graph(seed):
    handle, d_reps = random_setup(seed)
    result = bicoset.build(handle, d_reps)
    wd, ud, biregular = degrees(result.graph)
    assert biregular
    assert bicoset.degree_contract(handle, d_reps, u_space=result.u_space) == (min(wd), min(ud))


@pytest.mark.parametrize("seed", range(10))
def test_coset_counts_are_indices(seed):
    handle, _ = random_setup(seed)
    for tag in (L_TAG, R_TAG):
        space = bicoset.enumerate_cosets(handle, tag)
        assert len(space) * handle.subgroup_order(tag) == handle.order()


def test_generator_order_does_not_matter():
    handle, d_reps = random_setup(3)
    g = handle.group
    flipped = PermGroupHandle(PermGroup(g.degree, list(reversed(g.generators))), handle.subgroups)
    a = bicoset.build(handle, d_reps)
    b = bicoset.build(flipped, d_reps)
    assert (len(a.w_space), len(a.u_space)) == (len(b.w_space), len(b.u_space))
    assert is_isomorphic(a.graph, b.graph)


def test_two_disjoint_edges():
    g = PermGroup(2, [Permutation.parse("(0 1)", 2)])
    trivial = PermGroup(2, [])
    handle = PermGroupHandle(g, {L_TAG: trivial, R_TAG: trivial})
    one = Permutation.identity(2)
    result = bicoset.build(handle, [one])
    assert result.graph.edge_count == 2
    assert not is_connected(result.graph)
    assert not bicoset.connectivity_criterion(handle, [one])


def test_coset_bound():
    handle, d_reps = random_setup(1)
    with pytest.raises(bicoset.CosetEnumerationError):
        bicoset.enumerate_cosets(handle, L_TAG, bound=0)


def test_coset_bound_from_env(monkeypatch):
    monkeypatch.setenv("SSG_COSET_BOUND", "17")
    assert bicoset.coset_bound() == 17


@pytest.mark.parametrize("token", ["sigma3small", "gamma9", "sigma1:5"])
def test_rebuild_from_stabilisers(token):
    fb = build_family(token)
    result, handle = bicoset.rebuild(fb.graph, fb.action)
    assert is_isomorphic(result.graph, fb.graph)
    assert bicoset.kernel_of_action(result, handle) == 1


@pytest.mark.parametrize("token", ["sigma3small", "sigma3:5"])
def test_kernel_equals_core_intersection(token):
    fb = build_family(token)
    if "result" in fb.provenance:
        result, handle = fb.provenance["result"], fb.provenance["handle"]
    else:
        result, handle = bicoset.rebuild(fb.graph, fb.action)
    assert bicoset.kernel_of_action(result, handle) == bicoset.core_intersection_order(result, handle)


def test_build_action_is_edge_transitive():
    fb = build_family("sigma2:5")
    assert bicoset.is_edge_transitive(fb.graph, fb.action)
