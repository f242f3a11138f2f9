"""Finite gbd skeletons.

A skeleton has levels ``0..depth``; level ``n`` is a list of red cycle
lengths.  Red edges are implicit: the red edge with source at position ``p``
of a cycle of length ``L`` has range at position ``(p + 1) % L``.  Blue edges
carry explicit range and source vertices, and the factorisation squares are
stored as the successor map ``F`` on blue edge ids: for a blue edge ``e`` and
the red edge ``f`` leaving its range, ``f e = F(e) f'``.
"""
from __future__ import annotations

from functools import cached_property
from math import lcm
from typing import Iterable, Mapping, NamedTuple, Union

from .results import ValidationReport, Violation


class StructuralError(ValueError):
    """The skeleton refers to vertices or edge ids that do not exist."""


class Vertex(NamedTuple):
    level: int
    cycle: int  # 1-based
    position: int  # 0-based


class BlueEdge(NamedTuple):
    id: str
    range: Vertex
    source: Vertex


class BluePath(NamedTuple):
    """A blue path listed from its range end; the empty path is a vertex."""

    range: Vertex
    source: Vertex
    edges: tuple[str, ...] = ()

    @property
    def length(self) -> int:
        return len(self.edges)

    @classmethod
    def trivial(cls, v: Vertex) -> "BluePath":
        return cls(v, v, ())


EdgeRef = Union[str, BlueEdge]


def _eid(e: EdgeRef) -> str:
    return e.id if isinstance(e, BlueEdge) else e


class GbdSkeleton:
    """Immutable finite truncation of a gbd.

    ``levels[n]`` lists the red cycle lengths at level ``n``; ``edges`` is a
    sequence of :class:`BlueEdge`; ``successor`` maps every edge id to the id
    of ``F(e)``.  Only structural well-formedness is checked here;
    :func:`validate_gbd` checks the axioms.
    """

    def __init__(self, levels: Iterable[Iterable[int]], edges: Iterable[BlueEdge],
                 successor: Mapping[str, str]):
        self.levels = tuple(tuple(int(x) for x in lv) for lv in levels)
        if not self.levels:
            raise StructuralError("a skeleton needs at least one level")
        for n, lv in enumerate(self.levels):
            if not lv:
                raise StructuralError(f"level {n} has no cycles")
            for j, length in enumerate(lv, start=1):
                if length < 1:
                    raise StructuralError(f"cycle ({n},{j}) has length {length}")
        self.edges = tuple(BlueEdge(e[0], Vertex(*e[1]), Vertex(*e[2])) for e in edges)
        self._index = {}
        for k, e in enumerate(self.edges):
            if e.id in self._index:
                raise StructuralError(f"duplicate edge id {e.id!r}")
            self._index[e.id] = k
            for v in (e.range, e.source):
                if not self.has_vertex(v):
                    raise StructuralError(f"edge {e.id!r} refers to missing vertex {tuple(v)}")
        self.successor = dict(successor)
        for e in self.edges:
            if e.id not in self.successor:
                raise StructuralError(f"edge {e.id!r} has no square entry")
        for key, val in self.successor.items():
            if key not in self._index:
                raise StructuralError(f"square entry for unknown edge {key!r}")
            if val not in self._index:
                raise StructuralError(f"square entry {key!r} -> unknown edge {val!r}")

    def __repr__(self) -> str:
        return f"GbdSkeleton(levels={self.levels!r}, edges={len(self.edges)})"

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, GbdSkeleton):
            return NotImplemented
        return (self.levels == other.levels and self.edges == other.edges
                and self.successor == other.successor)

    __hash__ = None  # type: ignore[assignment]

    # -- vertices and red structure

    @property
    def depth(self) -> int:
        return len(self.levels) - 1

    def cycle_count(self, level: int) -> int:
        return len(self.levels[level])

    def cycle_length(self, level: int, cycle: int) -> int:
        return self.levels[level][cycle - 1]

    def has_vertex(self, v: Vertex) -> bool:
        level, cycle, pos = v
        return (0 <= level < len(self.levels) and 1 <= cycle <= len(self.levels[level])
                and 0 <= pos < self.levels[level][cycle - 1])

    def cycle_vertices(self, level: int, cycle: int) -> list[Vertex]:
        return [Vertex(level, cycle, p) for p in range(self.cycle_length(level, cycle))]

    def vertices(self, level: int | None = None) -> list[Vertex]:
        levels = range(len(self.levels)) if level is None else [level]
        return [v for n in levels for j in range(1, len(self.levels[n]) + 1)
                for v in self.cycle_vertices(n, j)]

    def red_step(self, v: Vertex, k: int = 1) -> Vertex:
        """Range of the red path of length ``k`` with source ``v`` (``k`` may be negative)."""
        length = self.levels[v.level][v.cycle - 1]
        return Vertex(v.level, v.cycle, (v.position + k) % length)

    # -- blue structure

    def edge(self, e: EdgeRef) -> BlueEdge:
        try:
            return self.edges[self._index[_eid(e)]]
        except KeyError:
            raise StructuralError(f"unknown edge id {_eid(e)!r}") from None

    def edge_position(self, e: EdgeRef) -> int:
        return self._index[_eid(e)]

    @cached_property
    def _into(self) -> dict[Vertex, list[str]]:
        out: dict[Vertex, list[str]] = {}
        for e in self.edges:
            out.setdefault(e.range, []).append(e.id)
        return out

    @cached_property
    def _out_of(self) -> dict[Vertex, list[str]]:
        out: dict[Vertex, list[str]] = {}
        for e in self.edges:
            out.setdefault(e.source, []).append(e.id)
        return out

    def edges_into(self, v: Vertex) -> list[str]:
        """Blue edges with range ``v`` (they come from the next level)."""
        return list(self._into.get(v, ()))

    def edges_out_of(self, v: Vertex) -> list[str]:
        """Blue edges with source ``v`` (they go to the previous level)."""
        return list(self._out_of.get(v, ()))

    def block(self, level: int, range_cycle: int, source_cycle: int) -> list[str]:
        """Edge ids of the bipartite set ``V_{n,j} Λ^{e1} V_{n+1,i}``."""
        return [e.id for e in self.edges
                if e.range.level == level and e.range.cycle == range_cycle
                and e.source.level == level + 1 and e.source.cycle == source_cycle]

    # -- the factorisation permutation

    def step(self, e: EdgeRef, k: int = 1) -> str:
        """``F^k(e)``; negative ``k`` uses the inverse permutation."""
        eid = _eid(e)
        self.edge(eid)
        if k == 0:
            return eid
        orbit = self.orbit(eid)
        return orbit[k % len(orbit)]

    @cached_property
    def _orbits(self) -> dict[str, tuple[str, ...]]:
        seen: dict[str, tuple[str, ...]] = {}
        for e in self.edges:
            if e.id in seen:
                continue
            orbit = [e.id]
            cur = self.successor[e.id]
            while cur != e.id:
                if len(orbit) > len(self.edges) or cur in seen:
                    raise ValueError(f"square map is not a permutation near edge {e.id!r}")
                orbit.append(cur)
                cur = self.successor[cur]
            t = tuple(orbit)
            for k, x in enumerate(orbit):
                seen[x] = t[k:] + t[:k]
        return seen

    def orbit(self, e: EdgeRef) -> tuple[str, ...]:
        """The ``F``-orbit of ``e`` starting at ``e``."""
        return self._orbits[_eid(e)]

    def path_step(self, path: BluePath, k: int = 1) -> BluePath:
        """``F^k`` applied to a blue path edgewise, endpoints moved by ``k`` red steps."""
        return BluePath(self.red_step(path.range, k), self.red_step(path.source, k),
                        tuple(self.step(e, k) for e in path.edges))

    def is_path(self, path: BluePath) -> bool:
        """Whether the listed edges really compose from ``range`` to ``source``."""
        cur = path.range
        for eid in path.edges:
            if eid not in self._index:
                return False
            e = self.edge(eid)
            if e.range != cur:
                return False
            cur = e.source
        return cur == path.source

    def make_path(self, edges: Iterable[EdgeRef], start: Vertex | None = None) -> BluePath:
        ids = tuple(_eid(e) for e in edges)
        if not ids:
            if start is None:
                raise ValueError("an empty path needs its vertex")
            return BluePath.trivial(Vertex(*start))
        first, last = self.edge(ids[0]), self.edge(ids[-1])
        path = BluePath(first.range, last.source, ids)
        if not self.is_path(path):
            raise ValueError(f"edges {ids} do not form a blue path")
        return path


# -- validation


def validate_gbd(skel: GbdSkeleton) -> ValidationReport:
    """Check the gbd axioms on a finite truncation.

    Violation kinds: ``level`` (blue edge not crossing exactly one level),
    ``sink`` and ``source`` (degree conditions), ``square-coherence`` and
    ``square-bijection`` (the factorisation map), ``edge-count`` (non-constant
    edge counts along a cycle).
    """
    out: list[Violation] = []
    for e in skel.edges:
        if e.source.level != e.range.level + 1:
            out.append(Violation("level", f"edge {e.id} joins levels {e.range.level} and {e.source.level}", (e.id,)))
    for v in skel.vertices():
        if v.level > 0 and not skel.edges_out_of(v):
            out.append(Violation("sink", f"vertex {tuple(v)} emits no blue edge", (v,)))
        if v.level < skel.depth and not skel.edges_into(v):
            out.append(Violation("source", f"vertex {tuple(v)} receives no blue edge", (v,)))
    targets: dict[str, list[str]] = {}
    for e in skel.edges:
        f = skel.edge(skel.successor[e.id])
        targets.setdefault(f.id, []).append(e.id)
        if f.range != skel.red_step(e.range) or f.source != skel.red_step(e.source):
            out.append(Violation("square-coherence",
                                 f"F({e.id}) = {f.id} does not follow the red edges at both ends",
                                 (e.id, f.id)))
    for f_id, pre in targets.items():
        if len(pre) > 1:
            out.append(Violation("square-bijection", f"edges {pre} all map to {f_id}", tuple(pre)))
    missed = [e.id for e in skel.edges if e.id not in targets]
    if missed:
        out.append(Violation("square-bijection", f"edges {missed} are not in the image of F", tuple(missed)))
    for n in range(skel.depth):
        for j in range(1, skel.cycle_count(n) + 1):
            for i in range(1, skel.cycle_count(n + 1) + 1):
                ins = {v: sum(1 for x in skel.edges_into(v)
                              if skel.edge(x).source[:2] == (n + 1, i))
                       for v in skel.cycle_vertices(n, j)}
                if len(set(ins.values())) > 1:
                    out.append(Violation("edge-count",
                                         f"vertices of cycle ({n},{j}) receive different numbers of edges from cycle ({n + 1},{i})",
                                         tuple(ins.items())))
                outs = {w: sum(1 for x in skel.edges_out_of(w)
                               if skel.edge(x).range[:2] == (n, j))
                        for w in skel.cycle_vertices(n + 1, i)}
                if len(set(outs.values())) > 1:
                    out.append(Violation("edge-count",
                                         f"vertices of cycle ({n + 1},{i}) emit different numbers of edges to cycle ({n},{j})",
                                         tuple(outs.items())))
    return ValidationReport(tuple(out))


# -- orders


def factorisation_step(skel: GbdSkeleton, e: EdgeRef, k: int) -> str:
    """``F^k(e)`` for ``k >= 0``."""
    if k < 0:
        raise ValueError("k must be nonnegative")
    return skel.step(e, k)


def order_of_edge(skel: GbdSkeleton, e: EdgeRef) -> int:
    """Least ``k > 0`` with ``F^k(e) = e``."""
    return len(skel.orbit(e))


def order_of_path(skel: GbdSkeleton, path: BluePath) -> int:
    """Order of a blue path as the lcm of its edge orders (1 for a vertex)."""
    return lcm(1, *(order_of_edge(skel, e) for e in path.edges))


def path_order_by_iteration(skel: GbdSkeleton, path: BluePath) -> int:
    """Order of a blue path found by iterating ``F`` on the whole path."""
    if not path.edges:
        return 1
    cur = skel.path_step(path)
    k = 1
    while cur != path:
        cur = skel.path_step(cur)
        k += 1
    return k


# -- path enumeration


def enumerate_blue_paths(skel: GbdSkeleton, from_level: int, to_cycle: tuple[int, int]) -> list[BluePath]:
    """Blue paths with range at ``from_level`` and source in cycle ``to_cycle = (n, j)``.

    Paths are listed by range vertex, then lexicographically by the
    skeleton's edge order.
    """
    n, j = to_cycle
    if n > skel.depth or not 1 <= j <= skel.cycle_count(n):
        raise ValueError(f"cycle {to_cycle} is beyond the truncation")
    if from_level > n or from_level < 0:
        return []
    result: list[BluePath] = []

    def extend(start: Vertex, cur: Vertex, edges: tuple[str, ...]) -> None:
        if cur.level == n:
            if cur.cycle == j:
                result.append(BluePath(start, cur, edges))
            return
        for eid in skel.edges_into(cur):
            extend(start, skel.edge(eid).source, edges + (eid,))

    for v in skel.vertices(from_level):
        extend(v, v, ())
    return result


def anchored_paths(skel: GbdSkeleton, level: int, cycle: int) -> list[BluePath]:
    """``X_{n,j}``: blue paths from level 0 with source in cycle ``(level, cycle)``."""
    return enumerate_blue_paths(skel, 0, (level, cycle))


def all_paths_into(skel: GbdSkeleton, level: int, cycle: int) -> list[BluePath]:
    """``Y_{n,j}``: all blue paths (trivial ones included) with source in cycle ``(level, cycle)``."""
    return [p for m in range(level + 1) for p in enumerate_blue_paths(skel, m, (level, cycle))]


def count_blue_paths(skel: GbdSkeleton, from_level: int, to_cycle: tuple[int, int]) -> int:
    """Number of paths that :func:`enumerate_blue_paths` would list, by dynamic programming."""
    n, j = to_cycle
    if n > skel.depth or not 1 <= j <= skel.cycle_count(n):
        raise ValueError(f"cycle {to_cycle} is beyond the truncation")
    if from_level > n or from_level < 0:
        return 0
    ways = {v: 1 for v in skel.cycle_vertices(n, j)}
    for level in range(n - 1, from_level - 1, -1):
        ways = {u: sum(ways.get(skel.edge(e).source, 0) for e in skel.edges_into(u))
                for u in skel.vertices(level)}
    return sum(ways.values())
