from fractions import Fraction
from itertools import permutations

import pytest
from hypothesis import given, settings, strategies as st

from gbd.laurent import (ONE, Z, LaurentMatrix, LaurentPoly, WindingError, determinant,
                         standard_permutation_mapping, winding)

polys = st.dictionaries(st.integers(-4, 4), st.integers(-5, 5), max_size=4).map(LaurentPoly)


def leibniz(rows):
    n = len(rows)
    total = LaurentPoly()
    for perm in permutations(range(n)):
        inversions = sum(1 for a in range(n) for b in range(a + 1, n) if perm[a] > perm[b])
        term = LaurentPoly.constant(-1 if inversions % 2 else 1)
        for r in range(n):
            term = term * rows[r][perm[r]]
        total = total + term
    return total


def test_basic_arithmetic():
    p = LaurentPoly({-1: 2, 0: 1})
    assert p * Z == LaurentPoly({0: 2, 1: 1})
    assert p - p == LaurentPoly()
    assert not LaurentPoly({3: 0})
    assert p.adjoint() == LaurentPoly({1: 2, 0: 1})
    assert LaurentPoly.constant(3) == 3
    assert (p * p).divexact(p) == p
    with pytest.raises(ArithmeticError):
        LaurentPoly({0: 1, 1: 1}).divexact(LaurentPoly({0: 1, 2: 1}))
    assert abs(p(1j) - (2 / 1j + 1)) < 1e-12


def test_winding_examples():
    z = Z
    assert winding([[z, LaurentPoly()], [LaurentPoly(), ONE]]) == 1
    # psi_2(z) = [[0, z], [z, 0]] has determinant -z^2.
    assert determinant([[LaurentPoly(), z], [z, LaurentPoly()]]) == LaurentPoly({2: -1})
    assert winding([[LaurentPoly(), z], [z, LaurentPoly()]]) == 2
    assert winding([[ONE]]) == 0
    with pytest.raises(WindingError):
        winding([[ONE + Z]])


def test_standard_permutation_mapping_of_z():
    f = LaurentMatrix.unit(0, 0, Z)
    img = standard_permutation_mapping((1, 0), f)
    assert img.entries == {((0, 0), (0, 1)): Z, ((0, 1), (0, 0)): Z}
    ident = standard_permutation_mapping((2, 0, 1), LaurentMatrix.diagonal([0, 1]))
    assert ident == LaurentMatrix.diagonal([(r, a) for r in (0, 1) for a in range(3)])


@settings(max_examples=80, deadline=None)
@given(polys, polys, polys)
def test_ring_axioms(a, b, c):
    assert a * (b + c) == a * b + a * c
    assert (a * b) * c == a * (b * c)
    assert a * b == b * a
    assert (a * b).adjoint() == a.adjoint() * b.adjoint()


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 4).flatmap(lambda n: st.lists(st.lists(polys, min_size=n, max_size=n),
                                                    min_size=n, max_size=n)))
def test_determinant_matches_leibniz(rows):
    assert determinant(rows) == leibniz(rows)


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 3).flatmap(lambda n: st.tuples(
    st.lists(st.lists(polys, min_size=n, max_size=n), min_size=n, max_size=n),
    st.lists(st.lists(polys, min_size=n, max_size=n), min_size=n, max_size=n))))
def test_determinant_is_multiplicative(pair):
    a, b = pair
    n = len(a)
    prod = (LaurentMatrix.from_dense(a) @ LaurentMatrix.from_dense(b)).dense(list(range(n)))
    assert determinant(prod) == determinant(a) * determinant(b)


@settings(max_examples=60, deadline=None)
@given(st.permutations(range(4)), st.integers(-3, 3), st.integers(-3, 3), polys, polys)
def test_permutation_mapping_is_a_homomorphism(sigma, j, k, p, q):
    f = LaurentMatrix({(0, 0): p, (0, 1): LaurentPoly.monomial(j)})
    g = LaurentMatrix({(1, 0): q, (0, 0): LaurentPoly.monomial(k, Fraction(1, 2))})
    lhs = standard_permutation_mapping(sigma, f @ g)
    rhs = standard_permutation_mapping(sigma, f) @ standard_permutation_mapping(sigma, g)
    assert lhs == rhs
    assert standard_permutation_mapping(sigma, f.adjoint()) == standard_permutation_mapping(sigma, f).adjoint()


@settings(max_examples=40, deadline=None)
@given(st.permutations(range(5)))
def test_winding_of_permutation_image(sigma):
    img = standard_permutation_mapping(sigma, LaurentMatrix.unit(0, 0, Z))
    assert winding(img.dense([(0, a) for a in range(5)])) == 5
