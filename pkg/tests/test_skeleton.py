import random

import pytest
from hypothesis import given, settings, strategies as st

from gbd.builders import SupernaturalNumber, build_bunce_deddens, build_from_data
from gbd.leveldata import LevelData
from gbd.sampling import random_skeleton
from gbd.skeleton import (BlueEdge, GbdSkeleton, StructuralError, Vertex, count_blue_paths,
                          enumerate_blue_paths, factorisation_step, order_of_edge, order_of_path,
                          path_order_by_iteration, validate_gbd)


@pytest.fixture
def bd():
    return build_bunce_deddens(SupernaturalNumber((2,)), 4)


def truncate(skel, levels):
    keep = [e for e in skel.edges if e.source.level < levels]
    return GbdSkeleton(skel.levels[:levels], keep, {e.id: skel.successor[e.id] for e in keep})


def random_path(skel, rng):
    v = rng.choice(skel.vertices(rng.randint(0, skel.depth - 1)))
    edges = []
    for _ in range(rng.randint(1, skel.depth - v.level)):
        eid = rng.choice(skel.edges_into(v))
        edges.append(eid)
        v = skel.edge(eid).source
    return skel.make_path(edges)


def test_bd_fixture_is_valid(bd):
    assert bd.levels == ((1,), (2,), (4,), (8,))
    assert validate_gbd(bd).ok


def test_single_vertex_is_valid():
    skel = GbdSkeleton([[1]], [], {})
    assert skel.depth == 0
    assert validate_gbd(skel).ok


def test_redirected_square_breaks_bijection(bd):
    ids = [e.id for e in bd.edges if e.range.level == 1]
    succ = dict(bd.successor)
    succ[ids[0]] = succ[ids[1]]
    report = validate_gbd(GbdSkeleton(bd.levels, bd.edges, succ))
    assert "square-bijection" in report.kinds()


def test_structural_errors():
    v0, v1 = Vertex(0, 1, 0), Vertex(1, 1, 0)
    with pytest.raises(StructuralError, match="no square"):
        GbdSkeleton([[1], [1]], [BlueEdge("e", v0, v1)], {})
    with pytest.raises(StructuralError, match="missing vertex"):
        GbdSkeleton([[1], [1]], [BlueEdge("e", v0, Vertex(1, 2, 0))], {"e": "e"})
    with pytest.raises(StructuralError, match="duplicate"):
        GbdSkeleton([[1], [1]], [BlueEdge("e", v0, v1), BlueEdge("e", v0, v1)], {"e": "e"})
    with pytest.raises(StructuralError):
        GbdSkeleton([], [], {})


def test_sink_and_level_violations():
    v0, v1 = Vertex(0, 1, 0), Vertex(1, 1, 0)
    skel = GbdSkeleton([[1], [1], [1]], [BlueEdge("e", v0, v1)], {"e": "e"})
    kinds = validate_gbd(skel).kinds()
    assert "sink" in kinds and "source" in kinds


def test_bd_base_edges_swap(bd):
    e1, e2 = [e.id for e in bd.edges if e.range.level == 0]
    assert factorisation_step(bd, e1, 1) == e2
    assert factorisation_step(bd, e2, 1) == e1
    assert factorisation_step(bd, e1, 0) == e1
    assert factorisation_step(bd, e1, order_of_edge(bd, e1)) == e1
    with pytest.raises(ValueError):
        factorisation_step(bd, e1, -1)


def test_bd_edge_orders(bd):
    # Brute-force iteration on the fixture gives 2 * 2^n at level n.
    for e in bd.edges:
        assert order_of_edge(bd, e.id) == 2 * 2 ** e.range.level


def test_single_edge_between_loops_has_order_one():
    v0, v1 = Vertex(0, 1, 0), Vertex(1, 1, 0)
    skel = GbdSkeleton([[1], [1]], [BlueEdge("e", v0, v1)], {"e": "e"})
    assert validate_gbd(skel).ok
    assert order_of_edge(skel, "e") == 1


def test_path_of_orders_two_and_three():
    # Level 0 -> 1 edges have order 2, level 1 -> 2 edges order 3.
    data = LevelData([1, 1, 1], [[[2]], [[3]]], [[[2]], [[3]]], [[1], [1], [1]])
    skel = build_from_data(data)
    e0 = skel.edges_into(Vertex(0, 1, 0))[0]
    e1 = skel.edges_into(skel.edge(e0).source)[0]
    path = skel.make_path([e0, e1])
    assert order_of_edge(skel, e0) == 2 and order_of_edge(skel, e1) == 3
    assert order_of_path(skel, path) == 6
    assert path_order_by_iteration(skel, path) == 6


def test_make_path_rejects_gaps(bd):
    e0 = bd.edges_into(Vertex(0, 1, 0))[0]
    far = bd.edges_into(Vertex(2, 1, 3))[0]
    with pytest.raises(ValueError):
        bd.make_path([e0, far])


def test_blue_path_counts(bd):
    two = truncate(bd, 3)
    assert len(enumerate_blue_paths(two, 0, (2, 1))) == 4
    assert count_blue_paths(two, 0, (2, 1)) == 4
    single = GbdSkeleton([[3]], [], {})
    paths = enumerate_blue_paths(single, 0, (0, 1))
    assert [p.range for p in paths] == single.vertices(0)
    assert all(p.length == 0 for p in paths)


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10**6))
def test_path_order_is_lcm_of_edge_orders(seed):
    rng = random.Random(seed)
    skel = random_skeleton(rng, min_levels=2)
    path = random_path(skel, rng)
    assert order_of_path(skel, path) == path_order_by_iteration(skel, path)


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10**6), st.integers(0, 30))
def test_red_conjugate_paths_share_order(seed, k):
    rng = random.Random(seed)
    skel = random_skeleton(rng, min_levels=2)
    path = random_path(skel, rng)
    moved = skel.path_step(path, k)
    assert skel.is_path(moved)
    assert order_of_path(skel, moved) == order_of_path(skel, path)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10**6))
def test_paths_include_trivial_ones(seed):
    skel = random_skeleton(random.Random(seed))
    for n in range(skel.depth + 1):
        for j in range(1, skel.cycle_count(n) + 1):
            total = sum(count_blue_paths(skel, m, (n, j)) for m in range(n + 1))
            assert total >= skel.cycle_length(n, j)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10**6), st.integers(-20, 20), st.integers(-20, 20))
def test_step_is_an_action(seed, a, b):
    skel = random_skeleton(random.Random(seed))
    for e in skel.edges[:5]:
        assert skel.step(skel.step(e.id, a), b) == skel.step(e.id, a + b)
