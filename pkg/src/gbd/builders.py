"""Constructions of gbd skeletons from data, permutations and the standard families."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

from .leveldata import IncompatibleDataError, LevelData, Telescope, check_compatibility
from .skeleton import BlueEdge, GbdSkeleton, Vertex


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    return all(n % d for d in range(3, math.isqrt(n) + 1, 2))


@dataclass(frozen=True)
class SupernaturalNumber:
    """A formal product of prime powers, realised as a sequence of primes.

    ``primes`` is the realisation pattern.  When ``infinite`` is true the
    pattern repeats forever, so every listed prime has infinite exponent;
    otherwise the realisation is exactly ``primes``.
    """

    primes: tuple[int, ...]
    infinite: bool = True

    def __post_init__(self):
        object.__setattr__(self, "primes", tuple(int(p) for p in self.primes))
        if not self.primes:
            raise ValueError("a supernatural number needs at least one prime")
        bad = [p for p in self.primes if not is_prime(p)]
        if bad:
            raise ValueError(f"not prime: {bad}")

    @classmethod
    def finite(cls, primes: Iterable[int]) -> "SupernaturalNumber":
        return cls(tuple(primes), infinite=False)

    @property
    def exponents(self) -> dict[int, float]:
        out: dict[int, float] = {}
        for p in self.primes:
            out[p] = math.inf if self.infinite else out.get(p, 0) + 1
        return out

    def realisation(self, count: int) -> list[int]:
        if not self.infinite and count > len(self.primes):
            raise ValueError(f"only {len(self.primes)} primes available, {count} requested")
        return [self.primes[k % len(self.primes)] for k in range(count)]


@dataclass(frozen=True)
class ContinuedFraction:
    """Terms ``a_1, a_2, ...`` of a simple continued fraction; ``periodic`` repeats them forever."""

    terms: tuple[int, ...]
    periodic: bool = False

    def __post_init__(self):
        object.__setattr__(self, "terms", tuple(int(a) for a in self.terms))
        if not self.terms or any(a < 1 for a in self.terms):
            raise ValueError("continued fraction terms must be positive integers")

    @classmethod
    def golden(cls) -> "ContinuedFraction":
        return cls((1,), periodic=True)

    def take(self, count: int) -> list[int]:
        if not self.periodic and count > len(self.terms):
            raise ValueError(f"only {len(self.terms)} terms available, {count} requested")
        return [self.terms[k % len(self.terms)] for k in range(count)]


def _check_perm(p: Sequence[int]) -> tuple[int, ...]:
    p = tuple(int(x) for x in p)
    if sorted(p) != list(range(len(p))) or not p:
        raise ValueError(f"{p} is not a permutation of 0..{len(p) - 1}")
    return p


class NonUnitalSystemError(ValueError):
    pass


@dataclass(frozen=True)
class PermutationSystem:
    """Standard permutation data between direct sums of circle algebras.

    ``counts[n]`` is the number of summands at level ``n``.  ``blocks[n]``
    maps ``(i, j)`` (1-based; ``i`` at level ``n+1``, ``j`` at level ``n``)
    to a permutation of ``0..m-1`` given by its images.  ``sizes[n][j-1]`` is
    the matrix size of summand ``j``; by default level 0 has size 1 and the
    unital recursion fixes the rest.
    """

    counts: tuple[int, ...]
    blocks: tuple[Mapping[tuple[int, int], tuple[int, ...]], ...]
    sizes: tuple[tuple[int, ...], ...] = field(default=None)  # type: ignore[assignment]

    def __post_init__(self):
        counts = tuple(int(c) for c in self.counts)
        if not counts or any(c < 1 for c in counts):
            raise ValueError("every level needs at least one summand")
        if len(self.blocks) != len(counts) - 1:
            raise ValueError("need one block table per pair of adjacent levels")
        blocks = []
        for n, table in enumerate(self.blocks):
            clean = {}
            for (i, j), perm in table.items():
                if not (1 <= i <= counts[n + 1] and 1 <= j <= counts[n]):
                    raise ValueError(f"block {(i, j)} out of range at level {n}")
                clean[(int(i), int(j))] = _check_perm(perm)
            for j in range(1, counts[n] + 1):
                if not any(jj == j for _, jj in clean):
                    raise ValueError(f"summand {j} at level {n} has no outgoing block")
            for i in range(1, counts[n + 1] + 1):
                if not any(ii == i for ii, _ in clean):
                    raise ValueError(f"summand {i} at level {n + 1} has no incoming block")
            blocks.append(dict(sorted(clean.items())))
        object.__setattr__(self, "counts", counts)
        object.__setattr__(self, "blocks", tuple(blocks))
        implied = [tuple([1] * counts[0])]
        for n, table in enumerate(blocks):
            implied.append(tuple(sum(len(p) * implied[n][j - 1] for (ii, j), p in table.items() if ii == i)
                                 for i in range(1, counts[n + 1] + 1)))
        if self.sizes is None:
            object.__setattr__(self, "sizes", tuple(implied))
        else:
            sizes = tuple(tuple(int(x) for x in s) for s in self.sizes)
            if len(sizes) != len(counts) or any(len(s) != c for s, c in zip(sizes, counts)):
                raise NonUnitalSystemError("summand sizes do not match the summand counts")
            for n, table in enumerate(blocks):
                for i in range(1, counts[n + 1] + 1):
                    total = sum(len(p) * sizes[n][j - 1] for (ii, j), p in table.items() if ii == i)
                    if total != sizes[n + 1][i - 1]:
                        raise NonUnitalSystemError(
                            f"level {n + 1} summand {i}: sum of m*n is {total}, size is {sizes[n + 1][i - 1]}")
            object.__setattr__(self, "sizes", sizes)

    @property
    def levels(self) -> int:
        return len(self.counts)

    def multiplicity(self, n: int, i: int, j: int) -> int:
        return len(self.blocks[n].get((i, j), ()))

    def data(self) -> LevelData:
        mats = [[[self.multiplicity(n, i, j) for j in range(1, self.counts[n] + 1)]
                 for i in range(1, self.counts[n + 1] + 1)] for n in range(len(self.blocks))]
        return LevelData(self.counts, mats, mats, [[1] * c for c in self.counts])

    def truncate(self, levels: int) -> "PermutationSystem":
        return PermutationSystem(self.counts[:levels], self.blocks[:levels - 1], self.sizes[:levels])


# -- build from data


def _maximal_block(a: int, b: int, v: int, w: int) -> tuple[list[tuple[int, int]], list[int]]:
    """Edges of one bipartite block with every order equal to ``a*v``.

    Returns the (range position, source position) of each edge and the
    successor index of each edge under ``F``.
    """
    d1 = math.gcd(a, b)
    a1, b1 = a // d1, b // d1
    d2 = math.gcd(v, w)
    v1, w1 = v // d2, w // d2
    if a1 * v1 != b1 * w1:
        raise ValueError(f"block counts a={a}, b={b} do not match cycle lengths {v}, {w}")
    assert (a1, b1) == (w1, v1)
    # base case: complete bipartite graph, labels (p, q) in row-major order
    place = [(p, q) for p in range(v1) for q in range(w1)]
    where = {pq: k for k, pq in enumerate(place)}
    succ = [where[((p + 1) % v1, (q + 1) % w1)] for p, q in place]
    # subdivide each square into d2 squares
    if d2 > 1:
        place = [(p * d2 + r, q * d2 + r) for p, q in place for r in range(d2)]
        succ = [k * d2 + r + 1 if r < d2 - 1 else succ[k] * d2
                for k in range(len(succ)) for r in range(d2)]
    # d1 parallel copies, threading the single F-orbit through all copies
    if d1 > 1:
        size = len(place)
        place = [pq for _ in range(d1) for pq in place]
        succ = [c * size + succ[k] if succ[k] != 0 else ((c + 1) % d1) * size
                for c in range(d1) for k in range(size)]
    return place, succ


def build_from_data(data: LevelData) -> GbdSkeleton:
    """A skeleton realising ``data`` in which every edge has order ``A_n(i,j) * |V_{n,j}|``."""
    report = check_compatibility(data)
    if not report.ok:
        raise IncompatibleDataError(report)
    edges: list[BlueEdge] = []
    successor: dict[str, str] = {}
    for n in range(data.depth):
        for j in range(data.c[n]):
            for i in range(data.c[n + 1]):
                a = data.A[n][i][j]
                if a == 0:
                    continue
                place, succ = _maximal_block(a, data.B[n][i][j], data.T[n][j], data.T[n + 1][i])
                ids = [f"e{n}.{j + 1}.{i + 1}.{k}" for k in range(len(place))]
                for k, (p, q) in enumerate(place):
                    edges.append(BlueEdge(ids[k], Vertex(n, j + 1, p), Vertex(n + 1, i + 1, q)))
                    successor[ids[k]] = ids[succ[k]]
    return GbdSkeleton(data.T, edges, successor)


# -- the standard families


def bunce_deddens_data(m: SupernaturalNumber, levels: int) -> LevelData:
    """``c_n = 1``, ``A_n = [a_n]``, ``B_n = [1]``, ``T_n = [a_0 ... a_{n-1}]``."""
    if levels < 1:
        raise ValueError("levels must be at least 1")
    primes = m.realisation(levels - 1)
    T = [1]
    for p in primes:
        T.append(T[-1] * p)
    return LevelData([1] * levels, [[[p]] for p in primes], [[[1]]] * (levels - 1), [[t] for t in T])


def build_bunce_deddens(m: SupernaturalNumber, levels: int) -> GbdSkeleton:
    return build_from_data(bunce_deddens_data(m, levels))


def irrational_rotation_data(cf: ContinuedFraction, levels: int) -> LevelData:
    """Untelescoped data ``A_n = B_n = [[a, 1], [1, 0]]`` with ``a`` the ``(n+1)``-th term, ``T_n = id``."""
    terms = cf.take(levels - 1)
    mats = [[[a, 1], [1, 0]] for a in terms]
    return LevelData([2] * levels, mats, mats, [[1, 1]] * levels)


def triangular_indices(levels: int) -> list[int]:
    """Level indices ``k(k+1)/2 - 1`` for ``k = 1..levels`` (0-based triangular telescoping)."""
    return [k * (k + 1) // 2 - 1 for k in range(1, levels + 1)]


def build_irrational_rotation(cf: ContinuedFraction, levels: int) -> tuple[GbdSkeleton, Telescope]:
    """Skeleton with ``levels`` levels from the triangularly telescoped rotation data.

    The map between telescoped levels ``k`` and ``k+1`` is the product of
    ``k + 2`` consecutive rotation matrices, so every entry is positive.
    """
    if levels < 1:
        raise ValueError("levels must be at least 1")
    idx = triangular_indices(levels)
    base = irrational_rotation_data(cf, idx[-1] + 1)
    tel = Telescope(base, tuple(idx))
    return build_from_data(tel.data), tel


def build_from_permutations(system: PermutationSystem) -> GbdSkeleton:
    """Skeleton with all red cycles of length 1 whose squares realise ``system``.

    For a block ``(i, j)`` at level ``n`` with permutation ``s`` the edges
    are ``a(0..m-1)`` and the squares read ``λ a(s(l)) = a(l) λ``, that is
    ``F(a(s(l))) = a(l)``.
    """
    edges: list[BlueEdge] = []
    successor: dict[str, str] = {}
    for n, table in enumerate(system.blocks):
        for (i, j), perm in table.items():
            ids = [f"e{n}.{j}.{i}.{l}" for l in range(len(perm))]
            for l in range(len(perm)):
                edges.append(BlueEdge(ids[l], Vertex(n, j, 0), Vertex(n + 1, i, 0)))
            for l, s in enumerate(perm):
                successor[ids[s]] = ids[l]
    return GbdSkeleton([[1] * c for c in system.counts], edges, successor)


def block_permutation(skel: GbdSkeleton, level: int, range_cycle: int, source_cycle: int) -> tuple[int, ...]:
    """``F`` restricted to a block, as a permutation of the block's edge positions."""
    ids = skel.block(level, range_cycle, source_cycle)
    where = {e: k for k, e in enumerate(ids)}
    return tuple(where[skel.step(e)] for e in ids)


def system_from_skeleton(skel: GbdSkeleton) -> PermutationSystem:
    """Permutation system ``F^{-1}`` per block of a skeleton whose cycles all have length 1."""
    if any(length != 1 for lv in skel.levels for length in lv):
        raise ValueError("every red cycle must have length 1")
    blocks = []
    for n in range(skel.depth):
        table = {}
        for j in range(1, skel.cycle_count(n) + 1):
            for i in range(1, skel.cycle_count(n + 1) + 1):
                if skel.block(n, j, i):
                    f = block_permutation(skel, n, j, i)
                    inv = [0] * len(f)
                    for k, x in enumerate(f):
                        inv[x] = k
                    table[(i, j)] = tuple(inv)
        blocks.append(table)
    return PermutationSystem(tuple(skel.cycle_count(n) for n in range(skel.depth + 1)), tuple(blocks))


def cycle_permutation(m: int) -> tuple[int, ...]:
    """The ``m``-cycle ``l -> l + 1 mod m``."""
    return tuple((l + 1) % m for l in range(m))

