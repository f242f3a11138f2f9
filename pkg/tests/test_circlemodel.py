import random

import pytest
from hypothesis import given, settings, strategies as st

from gbd.builders import ContinuedFraction, SupernaturalNumber, build_bunce_deddens, build_irrational_rotation
from gbd.circlemodel import (CircleModel, CkGenerator, MismatchedTruncationError, NonComposableError,
                             corner_inclusion, crossings, inclusion_multiplicities, k1_winding, random_element,
                             verify_ck)
from gbd.laurent import LaurentMatrix, LaurentPoly, Z
from gbd.leveldata import extract_data
from gbd.sampling import random_skeleton
from gbd.skeleton import BluePath, GbdSkeleton, Vertex, enumerate_blue_paths


@pytest.fixture(scope="module")
def bd():
    return build_bunce_deddens(SupernaturalNumber((2,)), 4)


def test_crossings_count_marked_edge():
    assert crossings(0, 4, 0, 4) == 1
    assert crossings(3, 1, 0, 4) == 0
    assert crossings(3, 2, 0, 4) == 1
    assert crossings(0, 1, 0, 4) == 1
    assert crossings(1, 2, 0, 4) == 0
    assert crossings(2, 9, 2, 3) == 3
    assert crossings(1, 0, 0, 5) == 0


def test_level_zero_vertex_is_sum_over_paths(bd):
    model = CircleModel(bd, 2)
    v = Vertex(0, 1, 0)
    paths = enumerate_blue_paths(bd, 0, (2, 1))
    assert model.vertex(v) == LaurentMatrix.diagonal(paths)
    assert model.represent(CkGenerator("vertex", (tuple(v),))) == model.vertex(v)


def test_full_red_cycle_is_z(bd):
    model = CircleModel(bd, 2)
    for v in bd.vertices(2):
        t = BluePath.trivial(v)
        img = model.represent(CkGenerator("red-cycle", (tuple(v), 1)))
        assert img == LaurentMatrix.unit(t, t, Z)


def test_matrix_units_are_constant(bd):
    model = CircleModel(bd, 2, corner=True)
    keys = model.keys(1)
    for a in keys:
        for b in keys:
            x = model.monomial_element(a, b, 0)
            assert x == LaurentMatrix.unit(a, b)


def test_word_rejects_bad_red_length(bd):
    model = CircleModel(bd, 2)
    a = BluePath.trivial(Vertex(2, 1, 1))
    b = BluePath.trivial(Vertex(2, 1, 0))
    with pytest.raises(NonComposableError):
        model.word(a, 2, b)
    with pytest.raises(NonComposableError):
        model.word(a, -1, b)


def test_ck_on_bd_depth_two(bd):
    assert verify_ck(bd, 2).ok


def test_ck_on_single_vertex():
    assert verify_ck(GbdSkeleton([[1]], [], {})).ok


def test_ck_on_golden():
    skel, _ = build_irrational_rotation(ContinuedFraction.golden(), 3)
    assert verify_ck(skel).ok


def test_corrupted_squares_fail_ck2(bd):
    e, f = [x.id for x in bd.edges if x.range.level == 1 and x.range.position in (0, 1)][::2]
    succ = dict(bd.successor)
    succ[e], succ[f] = succ[f], succ[e]
    report = verify_ck(GbdSkeleton(bd.levels, bd.edges, succ), 3, samples=200)
    assert "CK2" in report.kinds()
    assert all(len(v.witness) == 2 for v in report.of_kind("CK2"))


def test_inclusion_basics(bd):
    src, dst = CircleModel(bd, 1, corner=True), CircleModel(bd, 2, corner=True)
    inc = corner_inclusion(src, dst)
    assert inc(src.identity()) == dst.identity()
    a = src.keys(1)[0]
    img = inc(LaurentMatrix.unit(a, a))
    assert img.trace_constant() == 2
    with pytest.raises(MismatchedTruncationError):
        corner_inclusion(src, CircleModel(bd, 3, corner=True))


def test_winding_examples(bd):
    model = CircleModel(bd, 2, corner=True)
    keys = model.keys(1)
    assert k1_winding(model.generator_unitary(1), keys) == 1
    assert k1_winding(model.identity(), keys) == 0


def test_bd_multiplicities(bd):
    data = extract_data(bd)
    for N in range(3):
        m = inclusion_multiplicities(bd, N)
        assert m.k0 == data.A[N] == ((2,),)
        assert m.k1 == data.B[N] == ((1,),)


def test_multiplicities_with_other_marked_edges(bd):
    m = inclusion_multiplicities(bd, 1, marked={1: 1}, marked_next={1: 3})
    assert m.k0 == ((2,),) and m.k1 == ((1,),)


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10**6))
def test_ck_holds_on_random_skeletons(seed):
    skel = random_skeleton(random.Random(seed))
    report = verify_ck(skel, samples=20, seed=seed)
    assert report.ok, report.violations[:2]


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10**6))
def test_inclusion_is_a_star_homomorphism(seed):
    rng = random.Random(seed)
    skel = random_skeleton(rng, min_levels=2)
    N = rng.randrange(skel.depth)
    src, dst = CircleModel(skel, N, corner=True), CircleModel(skel, N + 1, corner=True)
    inc = corner_inclusion(src, dst)
    x, y = random_element(src, rng), random_element(src, rng)
    assert inc(x @ y) == inc(x) @ inc(y)
    assert inc(x.adjoint()) == inc(x).adjoint()
    assert inc(x + y) == inc(x) + inc(y)


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10**6))
def test_multiplicities_match_data(seed):
    skel = random_skeleton(random.Random(seed))
    data = extract_data(skel)
    for N in range(skel.depth):
        m = inclusion_multiplicities(skel, N)
        assert (m.k0, m.k1) == (data.A[N], data.B[N])


def test_unitary_is_unitary(bd):
    model = CircleModel(bd, 3)
    u = model.unitary()
    assert u @ u.adjoint() == model.identity()
    assert LaurentPoly.monomial(1) == Z
