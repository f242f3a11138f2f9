"""Acceptance suite: one test per criterion, each with its own time budget.

The terminal summary (see conftest.py) prints a PASS/FAIL line per criterion.
"""
import random
import time
from fractions import Fraction
from math import lcm

from gbd.builders import (ContinuedFraction, SupernaturalNumber, build_bunce_deddens, build_from_data,
                          build_irrational_rotation, irrational_rotation_data)
from gbd.circlemodel import (CircleModel, corner_inclusion, inclusion_multiplicities, permutation_form_image,
                             random_element, verify_ck)
from gbd.classify import real_rank, simplicity
from gbd.families import BunceDeddensFamily, IrrationalRotationFamily, PermutationFamily
from gbd.ktheory import LimitElement, LimitGroup, torsion_quotient_witness, unit_class
from gbd.laurent import LaurentMatrix, LaurentPoly, standard_permutation_mapping
from gbd.leveldata import check_compatibility, extract_data, matmul
from gbd.sampling import (random_level_data, random_measure, random_permutation, random_permutation_system,
                          random_skeleton)
from gbd.skeleton import path_order_by_iteration, order_of_path, validate_gbd
from gbd.tracesim import (CircleMeasure, averaged, evaluate_trace, markov_apply, mixture, trace_lift,
                          tv_distance)


class Budget:
    def __init__(self, seconds):
        self.seconds = seconds

    def __enter__(self):
        self.start = time.perf_counter()
        return self

    def __exit__(self, *exc):
        self.elapsed = time.perf_counter() - self.start
        if exc[0] is None:
            assert self.elapsed < self.seconds, f"took {self.elapsed:.2f}s, budget {self.seconds}s"


def ck_fixtures():
    rng = random.Random(4)
    fixtures = [("bd", build_bunce_deddens(SupernaturalNumber((2,)), 4)),
                ("golden", build_irrational_rotation(ContinuedFraction.golden(), 4)[0])]
    fixtures += [(f"random{k}", random_skeleton(rng)) for k in range(50)]
    return fixtures


def test_criterion_01_data_matrix_identity():
    rng = random.Random(1)
    with Budget(5):
        for _ in range(200):
            skel = random_skeleton(rng)
            assert validate_gbd(skel).ok
            data = extract_data(skel)
            assert check_compatibility(data).ok
            for n in range(data.depth):
                assert matmul(data.A[n], data.T_matrix(n)) == matmul(data.T_matrix(n + 1), data.B[n])
                for i in range(data.c[n + 1]):
                    for j in range(data.c[n]):
                        block = len(skel.block(n, j + 1, i + 1))
                        assert data.A[n][i][j] * data.T[n][j] == block == data.B[n][i][j] * data.T[n + 1][i]


def _order_by_stepping(skel, eid):
    cur, k = skel.successor[eid], 1
    while cur != eid:
        cur, k = skel.successor[cur], k + 1
    return k


def test_criterion_02_builder_order_formula():
    rng = random.Random(2)
    with Budget(10):
        for _ in range(100):
            data = random_level_data(rng)
            skel = build_from_data(data)
            assert validate_gbd(skel).ok
            assert extract_data(skel) == data
            for e in skel.edges:
                n, j, i = e.range.level, e.range.cycle - 1, e.source.cycle - 1
                assert _order_by_stepping(skel, e.id) == data.A[n][i][j] * data.T[n][j]


def test_criterion_03_lcm_law():
    rng = random.Random(3)
    skeletons = [random_skeleton(rng, min_levels=3) for _ in range(20)]
    with Budget(5):
        for k in range(1000):
            skel = skeletons[k % len(skeletons)]
            v = rng.choice(skel.vertices(rng.randint(0, skel.depth - 1)))
            edges = []
            for _ in range(rng.randint(1, skel.depth - v.level)):
                eid = rng.choice(skel.edges_into(v))
                edges.append(eid)
                v = skel.edge(eid).source
            path = skel.make_path(edges)
            assert path_order_by_iteration(skel, path) == order_of_path(skel, path)


def test_criterion_04_ck_verification():
    fixtures = ck_fixtures()
    with Budget(30):
        for name, skel in fixtures:
            report = verify_ck(skel, samples=40, seed=len(name))
            assert report.ok, (name, report.violations[:3])


def test_criterion_05_k_theory_multiplicities():
    fixtures = ck_fixtures()
    with Budget(60):
        for name, skel in fixtures:
            data = extract_data(skel)
            for N in range(skel.depth):
                m = inclusion_multiplicities(skel, N)
                assert m.k0 == data.A[N], (name, N)
                assert m.k1 == data.B[N], (name, N)


def test_criterion_06_standard_permutation_form():
    rng = random.Random(6)
    count = 0
    while count < 50:
        skel = random_skeleton(rng, max_length=1, min_levels=2)
        count += 1
        for N in range(skel.depth):
            src = CircleModel(skel, N, corner=True)
            dst = CircleModel(skel, N + 1, corner=True)
            inc = corner_inclusion(src, dst)
            for _ in range(5):
                x = random_element(src, rng)
                assert inc(x) == permutation_form_image(skel, N, x)


def test_criterion_07_markov_algebra():
    rng = random.Random(7)
    for _ in range(100):
        mu, nu = random_measure(rng), random_measure(rng)
        k, l = rng.randint(1, 12), rng.randint(1, 12)
        assert markov_apply(k, markov_apply(l, mu)) == markov_apply(lcm(k, l), mu)
        assert tv_distance(markov_apply(k, mu), markov_apply(k, nu)) <= tv_distance(mu, nu)


def test_criterion_08_trace_recursion():
    rng = random.Random(8)
    for _ in range(100):
        n, m = rng.randint(1, 3), rng.randint(1, 6)
        sigma = random_permutation(rng, m)
        mu2 = random_measure(rng)
        f = LaurentMatrix({(r, c): LaurentPoly({rng.randint(-3, 3): rng.randint(-4, 4) for _ in range(2)})
                           for r in range(n) for c in range(n)})
        mu1 = averaged(sigma, mu2)
        lhs = evaluate_trace((n * m, mu2), standard_permutation_mapping(sigma, f))
        rhs = evaluate_trace((n, mu1), f)
        assert abs(lhs - rhs) <= 1e-9


def test_criterion_09_lifting_bound():
    rng = random.Random(9)
    for _ in range(20):
        system = random_permutation_system(rng, levels=6, max_cycles=3, max_size=6)
        N = rng.randint(1, 6)
        mu = mixture([(Fraction(1, 2), CircleMeasure.roots_of_unity(N, Fraction(rng.randrange(7), 7))),
                      (Fraction(1, 2), CircleMeasure.lebesgue_measure())])
        top = [Fraction(1, system.counts[-1])] * system.counts[-1]
        _, steps = trace_lift(system, top, mu, N)
        assert len(steps) == 5
        for step in steps:
            assert step.distance <= step.bound, step


def test_criterion_10_classification_concordance():
    with Budget(5):
        bd = BunceDeddensFamily(SupernaturalNumber((2,)))
        golden = IrrationalRotationFamily(ContinuedFraction.golden())
        for fam in (bd, golden):
            assert simplicity(fam).proven
            rr = real_rank(fam)
            assert rr.proven and rr.value == "zero"
        assert simplicity(PermutationFamily("identity")).refuted
        rr = real_rank(PermutationFamily("constant", 4))
        assert rr.proven and rr.value == "one"


def test_criterion_11_k_group_sanity():
    golden = LimitGroup(irrational_rotation_data(ContinuedFraction.golden(), 12), "K0", injective_tail=True)
    assert golden.equal(LimitElement.of(0, (1, 0)), LimitElement.of(1, (1, 1))).proven
    assert golden.equal(LimitElement.of(0, (1, 0)), LimitElement.of(0, (0, 1))).refuted
    assert golden.positive(unit_class(golden.data)).proven
    bd = BunceDeddensFamily(SupernaturalNumber((2,)))
    data = bd.data(8)
    rng = random.Random(11)
    for _ in range(100):
        g = LimitElement.of(rng.randint(0, 7), (rng.randint(-50, 50),))
        w = torsion_quotient_witness(data, g)
        T = data.T[g.level]
        assert all(w.t % t == 0 for t in T)
        assert tuple(t * p for t, p in zip(T, w.p.vector)) == tuple(w.t * x for x in g.vector)
