import itertools
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import critical_group
from semifact.circuits import circuit_matrix, rhs_vector
from semifact.errors import NotABlowupOf, NotCartier, SupportConditionViolated
from semifact.graph import INF, _UnionFind, build_graph, contract_infinite, nth_blowup, total_blowup
from semifact.io import fixture
from semifact.labellings import (
    CartierLattice,
    cartier_basis,
    component_group,
    delta_matrix,
    descent_solve,
    epsilon_extend,
    h_map_is_iso,
    iota_interpolate,
    is_cartier,
    multidegree,
    pushforward_multidegree,
)
from semifact.verdict import circuit_coprime, stabilization_index
from semifact.zlinalg import IntMatrix, LatticeBasis, coker_invariants, solve_diophantine
from strategies import finite_graphs, labelled_graphs


def triangle(labels=(1, 1, 1)):
    return build_graph(["a", "b", "c"], [("x", "a", "b", labels[0]), ("y", "b", "c", labels[1]),
                                         ("z", "c", "a", labels[2])])


def banana(p, q):
    return build_graph(["a", "b"], [("x", "a", "b", p), ("y", "b", "a", q)])


def laplacian(g):
    n = len(g.vertices)
    idx = g.vertex_index
    lap = [[0] * n for _ in range(n)]
    for e in g.edges:
        if e.is_loop:
            continue
        i, j = idx[e.source], idx[e.target]
        lap[i][i] += 1
        lap[j][j] += 1
        lap[i][j] -= 1
        lap[j][i] -= 1
    return lap


def random_cartier(lat: CartierLattice, rng: random.Random, spread=3):
    phi = dict.fromkeys(lat.graph.vertices, 0)
    for vec in lat.basis:
        c = rng.randint(-spread, spread)
        for v in phi:
            phi[v] += c * vec[v]
    return phi


# Cartier labellings and the multidegree operator

def test_triangle_multidegree():
    assert multidegree(triangle(), {"a": 1, "b": 0, "c": 0}) == {"a": -2, "b": 1, "c": 1}


def test_is_cartier_reports_offending_edge():
    g = banana(2, 3)
    assert is_cartier(g, {"a": 6, "b": 0}) == (True, None)
    assert is_cartier(g, {"a": 2, "b": 0}) == (False, "y")
    with pytest.raises(NotCartier):
        multidegree(g, {"a": 2, "b": 0})


def test_infinite_edges_force_equality_and_contribute_nothing():
    g = build_graph(["a", "b"], [("x", "a", "b", INF), ("y", "a", "b", 2)])
    assert not is_cartier(g, {"a": 2, "b": 0})[0]
    assert multidegree(g, {"a": 5, "b": 5}) == {"a": 0, "b": 0}


def test_loops_contribute_nothing():
    g = build_graph(["a", "b"], [("l", "a", "a", 3), ("y", "a", "b", 1)])
    assert multidegree(g, {"a": 1, "b": 0}) == {"a": -1, "b": 1}
    assert cartier_basis(g).rank == 2


def test_banana_component_group():
    h = component_group(banana(2, 3))
    assert (h.free_rank, h.torsion) == (1, (5,))
    assert str(h) == "Z + Z/5"


def test_example_component_group():
    assert str(component_group(fixture("two_triangles"))) == "Z + Z/305"


@given(labelled_graphs(max_vertices=5, max_extra=3), st.randoms(use_true_random=False))
def test_multidegree_sums_to_zero_and_kernel_is_constants(g, rnd):
    lat = cartier_basis(g)
    for _ in range(5):
        phi = random_cartier(lat, rnd)
        assert is_cartier(g, phi)[0]
        deg = multidegree(g, phi)
        assert sum(deg.values()) == 0
        gc, vmap = contract_infinite(g)
        constant = len(set(phi.values())) == 1
        assert (not any(deg.values())) == constant
    const = dict.fromkeys(g.vertices, 7)
    assert not any(multidegree(g, const).values())


@given(labelled_graphs(max_vertices=5, max_extra=3))
def test_free_rank_counts_contracted_vertices(g):
    gc, _ = contract_infinite(g)
    assert component_group(g).free_rank == len(g.vertices) - len(gc.vertices) + 1


@given(finite_graphs(max_vertices=5, max_extra=3, labels=st.just(1)))
def test_unit_labels_give_negative_laplacian(g):
    d = delta_matrix(g)
    assert d.tolist() == [[-x for x in row] for row in laplacian(g)]


@given(finite_graphs(max_vertices=4, max_extra=2, labels=st.integers(1, 4)))
def test_coprime_torsion_matches_critical_group_of_total_blowup(g):
    if not circuit_coprime(g).circuit_coprime:
        return
    t = total_blowup(g).graph
    simple = [(e.source, e.target) for e in t.edges if not e.is_loop]
    assert list(component_group(g).torsion) == critical_group(t.vertices, simple)


@given(labelled_graphs(max_vertices=4, max_extra=3), st.randoms(use_true_random=False))
def test_component_group_is_basis_independent(g, rnd):
    lat = cartier_basis(g)
    k = lat.rank
    # random unimodular change of basis from elementary operations
    u = [[int(i == j) for j in range(k)] for i in range(k)]
    for _ in range(6):
        i, j = rnd.randrange(k), rnd.randrange(k)
        if i != j:
            c = rnd.randint(-3, 3)
            u[i] = [a + c * b for a, b in zip(u[i], u[j])]
    rows = (IntMatrix.from_rows(u, cols=k) @ lat.lattice.basis).tolist()
    other = CartierLattice(g, LatticeBasis(len(g.vertices), IntMatrix.from_rows(rows, cols=len(g.vertices))))
    free, tors = coker_invariants(delta_matrix(g, other))
    h = component_group(g)
    assert (free, tuple(tors)) == (h.free_rank, h.torsion)


# maps into blow-ups

@given(labelled_graphs(max_vertices=4, max_extra=3), st.integers(1, 3),
       st.randoms(use_true_random=False))
def test_iota_is_cartier_and_commutes_with_delta(g, n, rnd):
    target = nth_blowup(g, n)
    lat = cartier_basis(g)
    for phi in lat.basis + [random_cartier(lat, rnd)]:
        lifted = iota_interpolate(g, target, phi)
        assert is_cartier(target.graph, lifted)[0]
        assert all(lifted[v] == phi[v] for v in g.vertices)
        assert multidegree(target.graph, lifted) == epsilon_extend(g, target, multidegree(g, phi))


@given(finite_graphs(max_vertices=4, max_extra=2, labels=st.integers(1, 5)))
def test_iota_commutes_with_delta_on_total_blowup(g):
    target = total_blowup(g)
    for phi in cartier_basis(g).basis:
        lifted = iota_interpolate(g, target, phi)
        assert multidegree(target.graph, lifted) == epsilon_extend(g, target, multidegree(g, phi))


def test_maps_reject_foreign_targets():
    g, other = banana(2, 3), banana(2, 5)
    target = nth_blowup(other, 1)
    with pytest.raises(NotABlowupOf):
        iota_interpolate(g, target, {"a": 0, "b": 0})
    with pytest.raises(NotABlowupOf):
        epsilon_extend(g, target, {"a": 0, "b": 0})
    with pytest.raises(NotCartier):
        iota_interpolate(g, nth_blowup(g, 1), {"a": 1, "b": 0})


def test_epsilon_is_extension_by_zero():
    g = banana(3, 2)
    target = nth_blowup(g, 1)
    ext = epsilon_extend(g, target, {"a": 4, "b": -1})
    assert ext["a"] == 4 and ext["b"] == -1
    assert all(ext[v] == 0 for v in target.new_vertices)


# descent

def test_descent_witness_verifies():
    g = fixture("two_triangles")
    target = nth_blowup(g, 2)
    for v in target.new_vertices:
        alpha = {v: 1}
        phi = descent_solve(target, alpha)
        assert phi is not None
        push = pushforward_multidegree(target, alpha, phi)
        assert set(push) == set(g.vertices)


def test_banana_22_total_blowup_has_infeasible_unit():
    target = total_blowup(banana(2, 2))
    results = [descent_solve(target, {v: 1}) for v in target.new_vertices]
    assert any(r is None for r in results)


def test_pushforward_detects_support_violation():
    g = banana(2, 3)
    target = nth_blowup(g, 1)
    zero = dict.fromkeys(target.graph.vertices, 0)
    v = target.new_vertices[0]
    with pytest.raises(SupportConditionViolated):
        pushforward_multidegree(target, {v: 1}, zero)


def test_descent_with_no_new_vertices():
    g = banana(1, 1)
    target = nth_blowup(g, 3)
    assert descent_solve(target, {"a": 5}) == {"a": 0, "b": 0}


def infinite_edges_form_forest(g):
    uf = _UnionFind(g.vertices)
    return all(uf.union(e.source, e.target) for e in g.edges if e.label == INF)


@settings(max_examples=80)
@given(labelled_graphs(max_vertices=4, max_extra=3, labels=st.sampled_from([1, 2, 3, 4, 6, INF])))
def test_h_map_iso_iff_circuit_coprime(g):
    iso = h_map_is_iso(g, stabilization_index(g))
    if infinite_edges_form_forest(g):
        assert iso == circuit_coprime(g).circuit_coprime
    else:
        assert not iso


@pytest.mark.parametrize("edges", [
    [("x", "a", "b", 1), ("l", "a", "a", INF)],
    [("x", "a", "b", INF), ("y", "a", "b", INF)],
    [("x", "a", "b", INF), ("y", "b", "a", 1), ("z", "a", "b", INF)],
])
def test_infinite_circuits_raise_the_free_rank(edges):
    # blowing up an infinite circuit separates its vertices, so the free part grows
    g = build_graph(["a", "b"], edges)
    assert circuit_coprime(g).circuit_coprime
    base = component_group(g).free_rank
    for n in (1, 2, 3):
        assert component_group(nth_blowup(g, n).graph).free_rank == base + 1
        assert not h_map_is_iso(g, n)


def test_h_map_is_always_iso_at_level_zero():
    assert h_map_is_iso(banana(2, 2), 0)
    with pytest.raises(ValueError):
        h_map_is_iso(banana(2, 2), -1)


def image_lattice_of(g, target=None):
    d = delta_matrix(g)
    return LatticeBasis.from_generators((d.col(j) for j in range(d.cols)), d.rows)


@given(labelled_graphs(max_vertices=3, max_extra=2, labels=st.sampled_from([1, 2, 3, 4, INF])),
       st.integers(1, 2))
def test_injectivity_of_h_into_blowup(g, n):
    target = nth_blowup(g, n)
    small, big = image_lattice_of(g), image_lattice_of(target.graph)
    for alpha in itertools.product(range(-2, 3), repeat=len(g.vertices)):
        a = dict(zip(g.vertices, alpha))
        ext = epsilon_extend(g, target, a)
        if [ext[v] for v in target.graph.vertices] in big:
            assert list(alpha) in small


# the circuit-system route to surjectivity

@given(finite_graphs(max_vertices=4, max_extra=2, labels=st.integers(1, 6)))
def test_circuit_systems_match_descent_on_total_blowup(g):
    if g.nullity == 0:
        return
    bundle = circuit_matrix(g, labelled=True)
    target = total_blowup(g)
    first_new = {eid: z for z, (eid, k) in target.vertex_origin.items() if k == 1}
    all_ok = True
    for e in g.edges:
        b = rhs_vector(g, e.id, bundle.circuits)
        ok = solve_diophantine(bundle.matrix, b) is not None
        assert ok == (solve_diophantine(bundle.matrix, [-x for x in b]) is not None)
        if e.label == 1:
            assert ok
            continue
        assert ok == (descent_solve(target, {first_new[e.id]: 1}) is not None)
        all_ok &= ok
    assert all_ok == circuit_coprime(g).circuit_coprime
