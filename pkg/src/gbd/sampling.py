"""Seeded random generators for skeletons, level data, permutation systems and measures."""
from __future__ import annotations

import random
from fractions import Fraction
from math import lcm

from .builders import PermutationSystem
from .leveldata import LevelData
from .skeleton import BlueEdge, GbdSkeleton, Vertex
from .tracesim import CircleMeasure


def _proper_pattern(rng: random.Random, rows: int, cols: int, allowed) -> list[list[bool]] | None:
    """Random zero pattern over ``allowed(i, j)`` with no empty row or column."""
    ok = [[allowed(i, j) for j in range(cols)] for i in range(rows)]
    if not all(any(r) for r in ok) or not all(any(ok[i][j] for i in range(rows)) for j in range(cols)):
        return None
    pat = [[ok[i][j] and rng.random() < 0.5 for j in range(cols)] for i in range(rows)]
    for i in range(rows):
        if not any(pat[i]):
            pat[i][rng.choice([j for j in range(cols) if ok[i][j]])] = True
    for j in range(cols):
        if not any(pat[i][j] for i in range(rows)):
            pat[rng.choice([i for i in range(rows) if ok[i][j]])][j] = True
    return pat


def random_skeleton(rng: random.Random, max_levels: int = 4, max_cycles: int = 3,
                    max_length: int = 4, max_mult: int = 3, min_levels: int = 1) -> GbdSkeleton:
    """A valid gbd assembled from random ``F``-orbits.

    In a block between a cycle of length ``v`` (range) and one of length
    ``w`` (source) an ``F``-orbit has length ``m * lcm(v, w)`` and adds
    ``m lcm/v`` edges into every range vertex and ``m lcm/w`` out of every
    source vertex.  Orbits are added with random multipliers and offsets
    until the in- or out-count would exceed ``max_mult``.
    """
    while True:
        nlev = rng.randint(min_levels, max_levels)
        levels = [[rng.randint(1, max_length) for _ in range(rng.randint(1, max_cycles))] for _ in range(nlev)]
        edges: list[BlueEdge] = []
        succ: dict[str, str] = {}
        failed = False
        for n in range(nlev - 1):
            lo, hi = levels[n], levels[n + 1]

            def fits(i, j):
                step = lcm(lo[j], hi[i])
                return step // lo[j] <= max_mult and step // hi[i] <= max_mult

            pat = _proper_pattern(rng, len(hi), len(lo), fits)
            if pat is None:
                failed = True
                break
            for i in range(len(hi)):
                for j in range(len(lo)):
                    if not pat[i][j]:
                        continue
                    v, w = lo[j], hi[i]
                    step = lcm(v, w)
                    a_unit, b_unit = step // v, step // w
                    count, a, b = 0, 0, 0
                    while True:
                        m = rng.randint(1, 2)
                        if a + m * a_unit > max_mult or b + m * b_unit > max_mult:
                            if a:
                                break
                            m = 1
                        q0 = rng.randrange(w)
                        ids = [f"e{n}.{j + 1}.{i + 1}.{count + t}" for t in range(m * step)]
                        for t, eid in enumerate(ids):
                            edges.append(BlueEdge(eid, Vertex(n, j + 1, t % v), Vertex(n + 1, i + 1, (q0 + t) % w)))
                            succ[eid] = ids[(t + 1) % len(ids)]
                        count += len(ids)
                        a, b = a + m * a_unit, b + m * b_unit
                        if rng.random() < 0.5:
                            break
        if not failed:
            rng.shuffle(edges)
            return GbdSkeleton(levels, edges, succ)


def random_level_data(rng: random.Random, max_levels: int = 4, max_cycles: int = 3,
                      max_length: int = 4, max_mult: int = 3, min_levels: int = 2) -> LevelData:
    """Compatible data: ``A(i, j)`` is a multiple of ``T_i / gcd(T_i, T_j)`` and ``B`` follows."""
    while True:
        nlev = rng.randint(min_levels, max_levels)
        T = [[rng.randint(1, max_length) for _ in range(rng.randint(1, max_cycles))] for _ in range(nlev)]
        A, B, failed = [], [], False
        for n in range(nlev - 1):
            lo, hi = T[n], T[n + 1]

            def unit(i, j):
                step = lcm(lo[j], hi[i])
                return step // lo[j], step // hi[i]

            pat = _proper_pattern(rng, len(hi), len(lo), lambda i, j: max(unit(i, j)) <= max_mult)
            if pat is None:
                failed = True
                break
            a = [[0] * len(lo) for _ in hi]
            b = [[0] * len(lo) for _ in hi]
            for i in range(len(hi)):
                for j in range(len(lo)):
                    if pat[i][j]:
                        ua, ub = unit(i, j)
                        m = rng.randint(1, max_mult // max(ua, ub))
                        a[i][j], b[i][j] = m * ua, m * ub
            A.append(a)
            B.append(b)
        if not failed:
            return LevelData([len(t) for t in T], A, B, T)


def random_permutation(rng: random.Random, m: int) -> tuple[int, ...]:
    p = list(range(m))
    rng.shuffle(p)
    return tuple(p)


def random_permutation_system(rng: random.Random, levels: int = 4, max_cycles: int = 2,
                              max_size: int = 4) -> PermutationSystem:
    counts = [rng.randint(1, max_cycles) for _ in range(levels)]
    blocks = []
    for n in range(levels - 1):
        pat = _proper_pattern(rng, counts[n + 1], counts[n], lambda i, j: True)
        blocks.append({(i + 1, j + 1): random_permutation(rng, rng.randint(1, max_size))
                       for i in range(counts[n + 1]) for j in range(counts[n]) if pat[i][j]})
    return PermutationSystem(tuple(counts), tuple(blocks))


def random_measure(rng: random.Random, max_atoms: int = 4, max_denominator: int = 12,
                   lebesgue: bool = True) -> CircleMeasure:
    """A probability measure with rational atoms and possibly a Lebesgue part."""
    k = rng.randint(1, max_atoms)
    raw = [rng.randint(1, 5) for _ in range(k + (1 if lebesgue and rng.random() < 0.3 else 0))]
    total = sum(raw)
    atoms = {}
    for w in raw[:k]:
        q = rng.randint(1, max_denominator)
        a = Fraction(rng.randrange(q), q)
        atoms[a] = atoms.get(a, Fraction(0)) + Fraction(w, total)
    leb = Fraction(raw[k], total) if len(raw) > k else Fraction(0)
    return CircleMeasure(leb, atoms)
