import random

import pytest
from hypothesis import given, settings, strategies as st

from gbd.builders import (ContinuedFraction, SupernaturalNumber, build_bunce_deddens, build_from_data,
                          bunce_deddens_data, irrational_rotation_data)
from gbd.leveldata import (LevelData, NotFoundWithinHorizon, Telescope, check_compatibility, determinant,
                           extract_data, find_lpf_subsequence, is_proper, matmul, telescope)
from gbd.sampling import random_level_data
from gbd.skeleton import GbdSkeleton


def fib(n):
    a, b = 0, 1
    for _ in range(n):
        a, b = b, a + b
    return a


def test_rotation_fixture_data():
    data = extract_data(build_from_data(irrational_rotation_data(ContinuedFraction((3,)), 2)))
    assert data.A == (((3, 1), (1, 0)),)
    assert data.T == ((1, 1), (1, 1))
    assert data.A == data.B


def test_bd_fixture_data():
    data = extract_data(build_bunce_deddens(SupernaturalNumber((2,)), 4))
    assert data.c == (1, 1, 1, 1)
    assert data.A == (((2,),),) * 3
    assert data.B == (((1,),),) * 3
    assert data.T == ((1,), (2,), (4,), (8,))


def test_depth_zero_extraction():
    data = extract_data(GbdSkeleton([[3, 5]], [], {}))
    assert data.A == () and data.B == ()
    assert data.T == ((3, 5),)


def test_compatibility_examples():
    assert check_compatibility(LevelData([1, 1], [[[2]]], [[[1]]], [[1], [2]])).ok
    bad = check_compatibility(LevelData([1, 1], [[[2]]], [[[1]]], [[1], [3]]))
    assert [v.kind for v in bad.violations] == ["relation"]
    assert bad.violations[0].witness == (0, 1, 1)
    improper = check_compatibility(LevelData([2, 1], [[[1, 0]]], [[[1, 0]]], [[1, 1], [1]]))
    assert "improper" in improper.kinds()


def test_matrix_helpers():
    assert matmul(((1, 1), (1, 0)), ((1, 1), (1, 0))) == ((2, 1), (1, 1))
    assert determinant(((3, 1), (1, 0))) == -1
    assert determinant(((2, 0, 1), (1, 3, 2), (1, 1, 2))) == 6
    assert not is_proper(((1, 0), (1, 0)))
    assert is_proper(((1, 0), (0, 1)))


def test_data_shape_errors():
    with pytest.raises(ValueError):
        LevelData([1, 2], [[[1]]], [[[1]]], [[1], [1, 1]])
    with pytest.raises(ValueError):
        LevelData([1], [], [], [[1, 1]])


def test_golden_triangular_telescope():
    data = irrational_rotation_data(ContinuedFraction.golden(), 30)
    idx = [n * (n + 1) // 2 for n in range(7)]
    t = telescope(data, idx)
    for n in range(t.depth):
        assert t.A[n] == ((fib(n + 2), fib(n + 1)), (fib(n + 1), fib(n)))
    # The smallest entry F_n falls below n for n = 2, 3, 4.
    assert [min(x for row in t.A[n] for x in row) >= n for n in range(t.depth)] == \
        [True, True, False, False, False, True]


def test_identity_telescope_changes_nothing():
    data = bunce_deddens_data(SupernaturalNumber((2, 3)), 5)
    assert telescope(data, range(5)) == data
    assert Telescope(data, range(5)).data == data


def test_telescope_rejects_bad_indices():
    data = bunce_deddens_data(SupernaturalNumber((2,)), 4)
    with pytest.raises(ValueError):
        telescope(data, [0, 2, 2])
    with pytest.raises(IndexError):
        telescope(data, [0, 7])


def test_bd_lpf_subsequence():
    # Step n needs 2^d >= n, so the gaps are 1, 1, 2, 2, 3, 3, 3, 3.
    found = find_lpf_subsequence(bunce_deddens_data(SupernaturalNumber((2,)), 20))
    assert isinstance(found, Telescope)
    assert found.indices == (0, 1, 2, 4, 6, 9, 12, 15, 18)
    t = found.data
    for n in range(t.depth):
        assert t.A[n][0][0] == 2 ** (found.indices[n + 1] - found.indices[n]) >= n + 1


def test_identity_data_has_no_lpf_subsequence():
    data = LevelData([1] * 10, [[[1]]] * 9, [[[1]]] * 9, [[1]] * 10)
    assert isinstance(find_lpf_subsequence(data, horizon=5), NotFoundWithinHorizon)


def test_golden_lpf_within_horizon():
    found = find_lpf_subsequence(irrational_rotation_data(ContinuedFraction.golden(), 100), horizon=20, steps=10)
    assert isinstance(found, Telescope)
    assert len(found.indices) == 11
    t = found.data
    for n in range(t.depth):
        assert min(x for row in t.A[n] for x in row) >= n + 1


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10**6), st.data())
def test_telescope_keeps_compatibility(seed, draw):
    data = random_level_data(random.Random(seed), max_levels=5)
    idx = sorted(draw.draw(st.sets(st.integers(0, data.depth), min_size=1)))
    assert check_compatibility(telescope(data, idx)).ok


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10**6))
def test_extract_inverts_build(seed):
    data = random_level_data(random.Random(seed))
    assert extract_data(build_from_data(data)) == data


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10**6))
def test_between_composes(seed):
    data = random_level_data(random.Random(seed), min_levels=3)
    m = data.depth
    for which in "AB":
        assert data.between(m, 0, which) == matmul(data.between(m, 1, which), data.between(1, 0, which))
