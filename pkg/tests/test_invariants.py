import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import SHEARED, SHEAR_I2, SWAP_Z_F1, SWAP_Z_F2, manifold
from gm4 import generators as gen
from gm4 import lattice as lt
from gm4.errors import TypeTooLarge
from gm4.invariants import (
    index_characterization,
    intersection_lattice,
    intersection_number,
    invariant_report,
    invariant_signature,
    manifold_type,
    require_type_at_most,
    side_lattice,
    vertex_invariants,
)
from gm4.jsonio import dumps_manifold, loads_manifold
from gm4.wstructure import DirectedEdge, GluingMatrix, apply_basis_change

W1 = DirectedEdge("e1", True)
seeds = st.integers(0, 2 ** 32 - 1)


def _loop(m):
    return manifold([("a", "a", m)])


@pytest.mark.parametrize("m, expected", [
    (SWAP_Z_F2, (0, 1, 0)),
    (SHEAR_I2, (0, 0, 1)),
    (SWAP_Z_F1, (0, 0, 1)),
])
def test_intersection_lattice_examples(m, expected):
    assert intersection_lattice(_loop(m), W1) == lt.hnf([expected])


@pytest.mark.parametrize("m, i", [(SWAP_Z_F2, 1), (SHEAR_I2, 2), (SHEARED, 1)])
def test_intersection_number_examples(m, i):
    assert intersection_number(GluingMatrix(m)) == i


def test_index_characterization_examples(cycle3):
    assert index_characterization(cycle3, "e1") == (1, 1)
    assert index_characterization(_loop(SHEAR_I2), "e1") == (2, 2)


def test_alternating_vertex(alternating4):
    vi = vertex_invariants(alternating4, "v2")
    assert vi.type == 2 and vi.j == 1
    assert vi.P1 == lt.hnf([(1, 0)]) and vi.P2 == lt.hnf([(0, 1)])


def test_parallel_edges_give_type_one(cycle3):
    vi = vertex_invariants(cycle3, "v1")
    assert vi.type == 1 and vi.j == 1 and vi.P_v == lt.full_lattice(2)


def test_secondary_index_two():
    g = gen.gen_prescribed(gen.cycle_shape(3), {v: ((1, 1), (1, -1)) for v in ("v1", "v2", "v3")}, seed=1)
    vi = vertex_invariants(g, "v1")
    assert vi.type == 2 and vi.j == 2
    assert {lat for lat, _ in vi.classes} == {lt.hnf([(1, 1)]), lt.hnf([(1, -1)])}


def test_manifold_type_examples(alternating4, cycle3):
    assert manifold_type(alternating4) == 2
    assert manifold_type(cycle3) == 1
    loop = _loop(gen.matched_gluing(1, 2).matrix())
    assert manifold_type(loop) == 2


def test_type_three_vertex_reported():
    g = gen.gen_prescribed(gen.theta_shape(), {"a": ((1, 0), (0, 1), (1, 1)), "b": ((1, 0), (0, 1))}, seed=3)
    vi = vertex_invariants(g, "a")
    assert vi.type == 3
    with pytest.raises(TypeTooLarge):
        require_type_at_most(vi)


def test_cycle_example_note_under_both_readings(cycle3_perturbed):
    rep = invariant_report(cycle3_perturbed)
    assert rep.manifold_type == 1
    assert any("type 2" in n for n in rep.notes)
    t = loads_manifold(dumps_manifold(cycle3_perturbed), transpose_gluing=True)
    types = {v: vertex_invariants(t, v).type for v in t.vertex_ids()}
    assert types == {"v1": 1, "v2": 2, "v3": 1}
    assert invariant_report(t).notes


def test_report_ordering_and_json(alternating4):
    doc = invariant_report(alternating4).to_json()
    assert [e["id"] for e in doc["edges"]] == sorted(e["id"] for e in doc["edges"])
    assert doc["manifoldType"] == 2
    assert all(v["classSizes"] == [1, 1] for v in doc["vertices"])


@settings(max_examples=500, deadline=None)
@given(seeds)
def test_index_law_on_random_matrices(seed):
    g = _loop(gen.random_gluing_matrix(random.Random(seed)))
    i, idx = index_characterization(g, "e1")
    assert i == idx


@settings(max_examples=50, deadline=None)
@given(seeds)
def test_direction_independence(seed):
    g = gen.gen_random(seed=seed % 200, target="unconstrained")
    for e in g.edges:
        w = DirectedEdge(e.id, True)
        assert intersection_number(g.gluing(w)) == intersection_number(g.gluing(-w))
        p = intersection_lattice(g, w)
        moved = lt.hnf([lt.mat_vec(g.gluing(-w).m, x) for x in p.basis])
        assert moved == intersection_lattice(g, -w)


@settings(max_examples=50, deadline=None)
@given(seeds)
def test_basis_change_invariance(seed):
    rng = random.Random(seed)
    g = gen.gen_mixed_secondary(seed % 300, 5, with_intersections=True)
    h = gen.random_basis_change(g, rng)
    assert invariant_signature(apply_basis_change(g, h)) == invariant_signature(g)


@settings(max_examples=50, deadline=None)
@given(seeds)
def test_edge_lattice_inside_P_v(seed):
    g = gen.gen_mixed_secondary(seed % 300, 5)
    for v in g.vertex_ids():
        pv = vertex_invariants(g, v).P_v
        for w in g.boundary(v):
            assert all(x in pv for x in side_lattice(g, w).basis)
