"""K-groups as direct limits of integer lattices.

``K0`` is the limit of ``(Z^{c_n}, A_n)`` with the simplicial order and
``K1`` the limit of ``(Z^{c_n}, B_n)``.  Elements are pairs (level, vector)
and are never normalised; equality and positivity are explicit searches
that return :class:`Verdict` values.
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from math import lcm
from typing import NamedTuple, Sequence

from .families import Family
from .leveldata import LevelData, determinant, matmul, matvec
from .results import Status, Verdict
from .skeleton import GbdSkeleton, count_blue_paths


class LimitElement(NamedTuple):
    level: int
    vector: tuple[int, ...]

    @classmethod
    def of(cls, level: int, vector: Sequence[int]) -> "LimitElement":
        return cls(int(level), tuple(int(x) for x in vector))


class LimitGroup:
    """``lim (Z^{c_n}, M_n)`` with ``M = A`` for ``K0`` and ``M = B`` for ``K1``.

    ``injective_tail`` asserts that every map beyond the stored data is
    injective; it is what lets a finite computation prove two elements
    unequal.
    """

    def __init__(self, data: LevelData, which: str = "K0", injective_tail: bool = False):
        if which not in ("K0", "K1"):
            raise ValueError("which must be 'K0' or 'K1'")
        self.data, self.which, self.injective_tail = data, which, injective_tail
        self.maps = data.A if which == "K0" else data.B

    @classmethod
    def of_family(cls, family: Family, levels: int, which: str = "K0") -> "LimitGroup":
        return cls(family.data(levels), which, family.injective_maps("A" if which == "K0" else "B"))

    def element(self, level: int, vector: Sequence[int]) -> LimitElement:
        g = LimitElement.of(level, vector)
        self._check(g)
        return g

    def _check(self, g: LimitElement) -> None:
        if not 0 <= g.level <= self.data.depth:
            raise IndexError(f"level {g.level} outside the data 0..{self.data.depth}")
        if len(g.vector) != self.data.c[g.level]:
            raise ValueError(f"vector of length {len(g.vector)} at a level with {self.data.c[g.level]} cycles")

    def push(self, g: LimitElement, to_level: int) -> LimitElement:
        self._check(g)
        if to_level < g.level:
            raise ValueError("cannot push to an earlier level")
        if to_level > self.data.depth:
            raise IndexError(f"level {to_level} beyond the data (depth {self.data.depth})")
        v = g.vector
        for n in range(g.level, to_level):
            v = matvec(self.maps[n], v)
        return LimitElement(to_level, tuple(v))

    def add(self, g: LimitElement, h: LimitElement) -> LimitElement:
        m = max(g.level, h.level)
        a, b = self.push(g, m), self.push(h, m)
        return LimitElement(m, tuple(x + y for x, y in zip(a.vector, b.vector)))

    def scale(self, k: int, g: LimitElement) -> LimitElement:
        return LimitElement(g.level, tuple(k * x for x in g.vector))

    def neg(self, g: LimitElement) -> LimitElement:
        return self.scale(-1, g)

    def injective_from(self, level: int) -> bool:
        """Every map from ``level`` on is square with nonzero determinant (beyond the data: ``injective_tail``)."""
        return self.injective_tail and all(
            len(m) == len(m[0]) and determinant(m) != 0 for m in self.maps[level:])

    def equal(self, g: LimitElement, h: LimitElement, horizon: int = 16) -> Verdict:
        """Proven means equal in the limit, Refuted means provably different."""
        start = max(g.level, h.level)
        stop = min(self.data.depth, start + horizon)
        for n in range(start, stop + 1):
            a, b = self.push(g, n), self.push(h, n)
            if a.vector == b.vector:
                return Verdict(Status.PROVEN, {"level": n, "vector": list(a.vector)}, horizon)
            if self.injective_from(n):
                return Verdict(Status.REFUTED, {"level": n, "left": list(a.vector), "right": list(b.vector),
                                                "reason": "all later maps are injective"}, horizon)
        return Verdict(Status.EVIDENCE, {"checked_levels": [start, stop]}, horizon)

    def positive(self, g: LimitElement, horizon: int = 16) -> Verdict:
        """Proven: some pushforward is entrywise nonnegative.  Refuted: some pushforward is
        nonpositive and nonzero, which proper maps preserve forever."""
        if self.which != "K0":
            raise ValueError("positivity is defined on K0")
        stop = min(self.data.depth, g.level + horizon)
        for n in range(g.level, stop + 1):
            v = self.push(g, n).vector
            if not any(v):
                return Verdict(Status.PROVEN, {"level": n, "vector": list(v), "zero": True}, horizon, value="zero")
            if all(x >= 0 for x in v):
                return Verdict(Status.PROVEN, {"level": n, "vector": list(v)}, horizon, value="positive")
            if all(x <= 0 for x in v):
                return Verdict(Status.REFUTED, {"level": n, "vector": list(v),
                                                "reason": "a nonzero nonpositive vector stays nonzero and nonpositive "
                                                          "under proper nonnegative maps"}, horizon, value="negative")
        return Verdict(Status.EVIDENCE, {"checked_levels": [g.level, stop]}, horizon)

    def to_dict(self) -> dict:
        return {"group": self.which, "ranks": list(self.data.c),
                "maps": [[list(r) for r in m] for m in self.maps], "injective_tail": self.injective_tail}


def unit_class(data: LevelData) -> LimitElement:
    """Class of the full corner projection: the cycle lengths at level 0."""
    return LimitElement.of(0, data.T[0])


def path_space_sizes(skel: GbdSkeleton, level: int) -> list[int]:
    """``|Y_{n,j}|`` for each cycle ``j`` at ``level``."""
    return [sum(count_blue_paths(skel, m, (level, j)) for m in range(level + 1))
            for j in range(1, skel.cycle_count(level) + 1)]


def dimension_range_member(group: LimitGroup, g: LimitElement, skel: GbdSkeleton, horizon: int = 16) -> Verdict:
    """Search for a representative with ``0 <= m_j <= |Y_{n,j}|``."""
    stop = min(group.data.depth, skel.depth, g.level + horizon)
    for n in range(g.level, stop + 1):
        v = group.push(g, n).vector
        bound = path_space_sizes(skel, n)
        if all(0 <= x <= b for x, b in zip(v, bound)):
            return Verdict(Status.PROVEN, {"level": n, "vector": list(v), "bounds": bound}, horizon)
    pos = group.positive(g, horizon)
    if pos.refuted:
        return Verdict(Status.REFUTED, {"reason": "the element is not positive", "positivity": pos.certificate},
                       horizon)
    return Verdict(Status.EVIDENCE, {"checked_levels": [g.level, stop]}, horizon)


@dataclass(frozen=True)
class TorsionWitness:
    """``t g = T_n p`` at level ``n``, so ``t g`` lies in the image of ``K1`` under ``T``."""

    t: int
    p: LimitElement
    chain: tuple[tuple[int, tuple[int, ...], tuple[int, ...]], ...]

    def to_dict(self) -> dict:
        return {"t": self.t, "p": {"level": self.p.level, "vector": list(self.p.vector)},
                "chain": [{"level": n, "A_T_p": list(x), "T_B_p": list(y)} for n, x, y in self.chain]}


def torsion_quotient_witness(data: LevelData, g: LimitElement, steps: int = 2) -> TorsionWitness:
    """Witness that a multiple of ``g`` comes from ``K1``, plus ``steps`` checks of ``A T p = T B p`` upward."""
    n = g.level
    T = data.T[n]
    t = lcm(*T)
    p = []
    for x, d in zip(g.vector, T):
        assert (t * x) % d == 0, "cycle lengths do not divide their lcm"
        p.append(t * x // d)
    assert tuple(d * y for d, y in zip(T, p)) == tuple(t * x for x in g.vector)
    chain = []
    cur = tuple(p)
    for m in range(n, min(data.depth, n + steps)):
        lhs = matvec(matmul(data.A[m], data.T_matrix(m)), cur)
        rhs = matvec(matmul(data.T_matrix(m + 1), data.B[m]), cur)
        assert lhs == rhs, f"A T != T B at level {m}: the data are corrupted"
        chain.append((m, lhs, rhs))
        cur = matvec(data.B[m], cur)
    return TorsionWitness(t, LimitElement(n, tuple(p)), tuple(chain))


# -- order ideals


@dataclass(frozen=True)
class OrderIdeal:
    """A saturated hereditary set of cycle markers ``(level, cycle)`` of the collapsed diagram."""

    nodes: frozenset
    generators: tuple[LimitElement, ...]

    def to_dict(self) -> dict:
        return {"nodes": [list(x) for x in sorted(self.nodes)],
                "generators": [{"level": g.level, "vector": list(g.vector)} for g in self.generators]}


class SubsetBoundExceeded(ValueError):
    pass


class IdealLattice:
    def __init__(self, data: LevelData, ideals: Sequence[OrderIdeal]):
        self.data = data
        self.ideals = tuple(sorted(ideals, key=lambda h: (len(h.nodes), sorted(h.nodes))))
        self._by_nodes = {h.nodes: h for h in self.ideals}

    def __len__(self) -> int:
        return len(self.ideals)

    def __iter__(self):
        return iter(self.ideals)

    def meet(self, a: OrderIdeal, b: OrderIdeal) -> OrderIdeal:
        return self._lookup(a.nodes & b.nodes)

    def join(self, a: OrderIdeal, b: OrderIdeal) -> OrderIdeal:
        return self._lookup(_closure(self.data, a.nodes | b.nodes, self.data.depth))

    def _lookup(self, nodes: frozenset) -> OrderIdeal:
        if nodes not in self._by_nodes:
            raise KeyError("the result is not among the persistent ideals")
        return self._by_nodes[nodes]

    def is_distributive(self) -> bool:
        for a in self.ideals:
            for b in self.ideals:
                for c in self.ideals:
                    if self.meet(a, self.join(b, c)) != self.join(self.meet(a, b), self.meet(a, c)):
                        return False
        return True

    def to_dict(self) -> dict:
        return {"size": len(self.ideals), "ideals": [h.to_dict() for h in self.ideals]}


def _successors(data: LevelData, n: int, j: int) -> list[tuple[int, int]]:
    return [(n + 1, i) for i in range(data.c[n + 1]) if data.A[n][i][j] > 0]


def _closure(data: LevelData, seed, top: int) -> frozenset:
    """Smallest hereditary saturated set (on levels ``0..top``) containing ``seed``."""
    h = set(seed)
    changed = True
    while changed:
        changed = False
        for n, j in list(h):
            if n < top:
                for s in _successors(data, n, j):
                    if s not in h:
                        h.add(s)
                        changed = True
        for n in range(top):
            for j in range(data.c[n]):
                if (n, j) not in h and all(s in h for s in _successors(data, n, j)):
                    h.add((n, j))
                    changed = True
    return frozenset(h)


def _generators(data: LevelData, nodes: frozenset) -> tuple[LimitElement, ...]:
    """Classes ``e_j`` of the nodes of ``nodes`` that no other node of ``nodes`` reaches."""
    reached = {s for n, j in nodes if n < data.depth for s in _successors(data, n, j)}
    out = []
    for n, j in sorted(nodes):
        if (n, j) not in reached:
            out.append(LimitElement(n, tuple(int(k == j) for k in range(data.c[n]))))
    return tuple(out)


def order_ideal_lattice(data: LevelData, up_to_level: int | None = None, margin: int | None = None,
                        max_subsets: int = 4096) -> IdealLattice:
    """Saturated hereditary sets of the truncation that are generated below its last ``margin`` levels.

    Every subset ``S`` of top-level markers gives exactly one saturated
    hereditary set (a lower marker belongs to it when all of its successors
    do).  Sets that are not the closure of their part at levels
    ``<= top - margin`` are artefacts of cutting the diagram off and are
    dropped.  ``margin`` defaults to half the depth, rounded up.  Cycle
    indices in the markers are 0-based.
    """
    top = data.depth if up_to_level is None else up_to_level
    margin = (top + 1) // 2 if margin is None else margin
    data = data.truncate(top + 1)
    if 2 ** data.c[top] > max_subsets:
        raise SubsetBoundExceeded(f"2^{data.c[top]} candidate sets exceed the bound {max_subsets}")
    low = max(top - margin, 0)
    found: dict[frozenset, OrderIdeal] = {}
    for r in range(data.c[top] + 1):
        for subset in combinations(range(data.c[top]), r):
            h = set((top, i) for i in subset)
            for n in range(top - 1, -1, -1):
                for j in range(data.c[n]):
                    if all(s in h for s in _successors(data, n, j)):
                        h.add((n, j))
            nodes = frozenset(h)
            if _closure(data, {x for x in nodes if x[0] <= low}, top) != nodes:
                continue
            found[nodes] = OrderIdeal(nodes, _generators(data, nodes))
    return IdealLattice(data, list(found.values()))
