import random

import pytest
from hypothesis import given, settings, strategies as st

from gbd.builders import (ContinuedFraction, SupernaturalNumber, build_bunce_deddens, bunce_deddens_data,
                          irrational_rotation_data)
from gbd.families import BunceDeddensFamily, PermutationFamily, StationaryFamily, disjoint_chains_family
from gbd.ktheory import (LimitElement, LimitGroup, SubsetBoundExceeded, dimension_range_member,
                         order_ideal_lattice, path_space_sizes, torsion_quotient_witness, unit_class)
from gbd.leveldata import LevelData
from gbd.sampling import random_level_data

E = LimitElement.of


@pytest.fixture
def golden():
    return LimitGroup(irrational_rotation_data(ContinuedFraction.golden(), 10), "K0", injective_tail=True)


def test_pushes(golden):
    assert golden.push(E(0, (1, 0)), 1) == E(1, (1, 1))
    assert golden.push(E(2, (3, -1)), 2) == E(2, (3, -1))
    k1 = LimitGroup(bunce_deddens_data(SupernaturalNumber((2,)), 6), "K1")
    for n in range(6):
        assert k1.push(E(0, (1,)), n) == E(n, (1,))
    with pytest.raises(ValueError):
        golden.push(E(2, (1, 0)), 1)


def test_equality(golden):
    assert golden.equal(E(0, (1, 0)), E(1, (1, 1))).proven
    v = golden.equal(E(0, (1, 0)), E(0, (0, 1)))
    assert v.refuted and v.certificate["level"] == 0
    g = E(3, (2, -5))
    assert golden.equal(g, g).proven


def test_inequality_needs_injective_tail():
    plain = LimitGroup(irrational_rotation_data(ContinuedFraction.golden(), 10), "K0")
    assert plain.equal(E(0, (1, 0)), E(0, (0, 1))).status.value == "EvidenceUpToHorizon"


def test_non_injective_maps_identify_elements():
    data = LevelData([2, 1], [[[1, 1]]], [[[1, 1]]], [[1, 1], [1]])
    group = LimitGroup(data, "K0", injective_tail=True)
    assert group.equal(E(0, (1, 0)), E(0, (0, 1))).proven


def test_positivity(golden):
    assert golden.positive(unit_class(golden.data)).proven
    zero = golden.positive(E(0, (0, 0)))
    assert zero.proven and zero.value == "zero"
    mixed = golden.positive(E(0, (1, -1)))
    assert mixed.proven and mixed.certificate == {"level": 1, "vector": [0, 1]}
    neg = golden.positive(E(0, (-1, 0)))
    assert neg.refuted and neg.value == "negative"
    with pytest.raises(ValueError):
        LimitGroup(golden.data, "K1").positive(E(0, (1, 0)))


def test_unit_and_dimension_range():
    skel = build_bunce_deddens(SupernaturalNumber((2,)), 4)
    group = LimitGroup.of_family(BunceDeddensFamily(SupernaturalNumber((2,))), 4)
    unit = unit_class(group.data)
    assert unit == E(0, (1,))
    assert dimension_range_member(group, unit, skel).certificate["level"] == 0
    three = dimension_range_member(group, group.scale(3, unit), skel)
    assert three.proven and three.certificate["level"] == 2
    # each of the 4 level-2 vertices starts one path to each of levels 0, 1, 2
    assert path_space_sizes(skel, 2) == [12]
    assert dimension_range_member(group, E(0, (-1,)), skel).refuted


def test_torsion_witnesses():
    w = torsion_quotient_witness(bunce_deddens_data(SupernaturalNumber((2,)), 4), E(2, (1,)))
    assert (w.t, w.p) == (4, E(2, (1,)))
    w = torsion_quotient_witness(PermutationFamily("growing").data(4), E(1, (7,)))
    assert (w.t, w.p) == (1, E(1, (7,)))
    gold = irrational_rotation_data(ContinuedFraction.golden(), 5)
    assert torsion_quotient_witness(gold, E(3, (4, -2))).t == 1


def test_torsion_rejects_corrupted_data():
    data = LevelData([1, 1], [[[2]]], [[[1]]], [[1], [3]])
    with pytest.raises(AssertionError):
        torsion_quotient_witness(data, E(0, (1,)))


def test_ideal_lattices():
    bd = order_ideal_lattice(bunce_deddens_data(SupernaturalNumber((2,)), 4))
    assert len(bd) == 2
    chains = order_ideal_lattice(disjoint_chains_family(2).data(5))
    assert len(chains) == 4 and chains.is_distributive()
    gold = order_ideal_lattice(irrational_rotation_data(ContinuedFraction.golden(), 4))
    assert len(gold) == 2
    tri = StationaryFamily([[1, 0], [1, 1]], [[1, 0], [1, 1]], [1, 1])
    lat = order_ideal_lattice(tri.data(6))
    assert len(lat) == 3 and lat.is_distributive()
    with pytest.raises(SubsetBoundExceeded):
        order_ideal_lattice(disjoint_chains_family(4).data(3), max_subsets=8)


def test_ideal_generators():
    lat = order_ideal_lattice(disjoint_chains_family(2).data(5))
    sizes = sorted(len(h.generators) for h in lat)
    assert sizes == [0, 1, 1, 2]


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10**6), st.data())
def test_push_composes_and_adds(seed, draw):
    data = random_level_data(random.Random(seed), min_levels=3)
    group = LimitGroup(data)
    vec = lambda n: draw.draw(st.lists(st.integers(-5, 5), min_size=data.c[n], max_size=data.c[n]))
    g, h = E(0, vec(0)), E(1, vec(1))
    m = data.depth
    assert group.push(group.push(g, 1), m) == group.push(g, m)
    assert group.add(g, h) == group.add(h, g)
    assert group.equal(group.add(g, group.neg(g)), E(0, [0] * data.c[0])).proven


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10**6), st.data())
def test_torsion_relation(seed, draw):
    data = random_level_data(random.Random(seed))
    n = draw.draw(st.integers(0, data.depth))
    g = E(n, draw.draw(st.lists(st.integers(-9, 9), min_size=data.c[n], max_size=data.c[n])))
    w = torsion_quotient_witness(data, g)
    assert tuple(t * p for t, p in zip(data.T[n], w.p.vector)) == tuple(w.t * x for x in g.vector)
    for _, lhs, rhs in w.chain:
        assert lhs == rhs
