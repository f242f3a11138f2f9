"""Block-matrix model of a finite gbd truncation over Laurent polynomials.

At depth ``N`` the algebra of the truncation is a direct sum over the
cycles ``j`` at level ``N`` of matrix algebras over ``C(T)``, indexed by the
blue paths whose source lies on cycle ``j``.  A word ``s_α s_μ s_β*`` with
``μ`` red of length ``k`` is sent to

    sum over γ in s(β)Y of  z^{<μ', e*>} Θ(α F^k(γ), β γ)

where ``μ'`` is the red walk of length ``k`` at level ``N`` starting at
``s(γ)`` and ``<μ', e*>`` counts how often it uses the marked red edge of its
cycle.  Matrix keys are :class:`BluePath` values.

The full model indexes by every path into level ``N``; the corner model
(``corner=True``) keeps only paths starting at level 0 and is the one used
for K-theory.
"""
from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Callable, Iterable, Mapping, NamedTuple

from .laurent import LaurentMatrix, LaurentPoly, standard_permutation_mapping, winding
from .results import ValidationReport, Violation
from .skeleton import (BluePath, GbdSkeleton, Vertex, all_paths_into, anchored_paths)


class NonComposableError(ValueError):
    pass


class MismatchedTruncationError(ValueError):
    pass


def concat(p: BluePath, q: BluePath) -> BluePath:
    """``p`` followed by ``q``; no check that ``s(p) = r(q)``."""
    return BluePath(p.range, q.source, p.edges + q.edges)


def crossings(position: int, k: int, marked: int, length: int) -> int:
    """Uses of the marked edge (leaving position ``marked``) by a walk of ``k`` red steps from ``position``."""
    return (position + k - 1 - marked) // length - (position - 1 - marked) // length


class CkGenerator(NamedTuple):
    """A spanning element of the truncated algebra.

    ``kind`` is ``"vertex"`` (``data = (v,)``), ``"blue"`` (``(edge_id,)``),
    ``"red-cycle"`` (``(v, power)``, the red cycle at ``v`` to a nonnegative
    power) or ``"word"`` (``(α, k, β)`` or ``(α, k, β, True)`` for the adjoint).
    """

    kind: str
    data: tuple


class CircleModel:
    def __init__(self, skel: GbdSkeleton, depth: int | None = None,
                 marked: Mapping[int, int] | None = None, corner: bool = False):
        N = skel.depth if depth is None else depth
        if not 0 <= N <= skel.depth:
            raise ValueError(f"depth {N} outside the truncation 0..{skel.depth}")
        self.skel, self.depth, self.corner = skel, N, corner
        self.marked = {j: 0 for j in range(1, skel.cycle_count(N) + 1)}
        for j, p in (marked or {}).items():
            if j not in self.marked or not 0 <= p < skel.cycle_length(N, j):
                raise ValueError(f"marked edge position {p} invalid for cycle {j}")
            self.marked[j] = p
        pick = anchored_paths if corner else all_paths_into
        self.index = {j: pick(skel, N, j) for j in self.marked}
        self._below: dict[Vertex, list[BluePath]] = {}

    # -- bookkeeping

    def summands(self) -> list[int]:
        return list(self.index)

    def keys(self, j: int | None = None) -> list[BluePath]:
        if j is not None:
            return self.index[j]
        return [p for j in self.index for p in self.index[j]]

    def summand_of(self, path: BluePath) -> int:
        return path.source.cycle

    def exponent(self, v: Vertex, k: int) -> int:
        """``<μ, e*>`` for the red walk of length ``k`` from the level-``N`` vertex ``v``."""
        return crossings(v.position, k, self.marked[v.cycle], self.skel.cycle_length(self.depth, v.cycle))

    def below(self, v: Vertex) -> list[BluePath]:
        """Blue paths from ``v`` down to level ``N``."""
        if v not in self._below:
            if v.level == self.depth:
                out = [BluePath.trivial(v)]
            else:
                out = []
                for eid in self.skel.edges_into(v):
                    e = self.skel.edge(eid)
                    out.extend(BluePath(v, p.source, (eid,) + p.edges) for p in self.below(e.source))
            self._below[v] = out
        return self._below[v]

    # -- images of generators

    def word(self, alpha: BluePath, k: int, beta: BluePath) -> LaurentMatrix:
        """Image of ``s_α s_μ s_β*`` with ``μ`` red of length ``k >= 0`` from ``s(β)`` to ``s(α)``."""
        if k < 0:
            raise NonComposableError("red length must be nonnegative")
        if alpha.source.level != beta.source.level or \
                self.skel.red_step(beta.source, k) != alpha.source:
            raise NonComposableError(f"no red path of length {k} from {tuple(beta.source)} to {tuple(alpha.source)}")
        if alpha.source.level > self.depth:
            raise NonComposableError("word reaches below the truncation")
        out = {}
        for g in self.below(beta.source):
            img = self.skel.path_step(g, k)
            out[(concat(alpha, img), concat(beta, g))] = LaurentPoly.monomial(self.exponent(g.source, k))
        return LaurentMatrix(out)

    def vertex(self, v: Vertex) -> LaurentMatrix:
        t = BluePath.trivial(v)
        return self.word(t, 0, t)

    def blue_edge(self, eid: str) -> LaurentMatrix:
        e = self.skel.edge(eid)
        return self.word(BluePath(e.range, e.source, (e.id,)), 0, BluePath.trivial(e.source))

    def red_edge(self, u: Vertex) -> LaurentMatrix:
        """The red edge with source ``u``."""
        return self.word(BluePath.trivial(self.skel.red_step(u)), 1, BluePath.trivial(u))

    def path(self, alpha: BluePath, k: int) -> LaurentMatrix:
        """``s_λ`` for ``λ = α μ`` with ``μ`` red of length ``k`` ending at ``s(α)``."""
        start = self.skel.red_step(alpha.source, -k)
        return self.word(alpha, k, BluePath.trivial(start))

    def identity(self) -> LaurentMatrix:
        return LaurentMatrix.diagonal(self.keys())

    def unitary(self) -> LaurentMatrix:
        """``U = sum s_α s_{λ(α)} s_α*`` over the index paths, ``λ(α)`` the red cycle at ``s(α)``."""
        out = LaurentMatrix()
        for a in self.keys():
            out = out + self.word(a, self.skel.cycle_length(self.depth, a.source.cycle), a)
        return out

    def generator_unitary(self, j: int, alpha: BluePath | None = None) -> LaurentMatrix:
        """Identity with ``s_α s_{λ(α)} s_α*`` in place of ``Θ(α, α)``; ``α`` defaults to the first key of ``j``."""
        alpha = self.index[j][0] if alpha is None else alpha
        full = self.word(alpha, self.skel.cycle_length(self.depth, j), alpha)
        return self.identity() - LaurentMatrix.unit(alpha, alpha) + full

    def represent(self, gen: CkGenerator) -> LaurentMatrix:
        if gen.kind == "vertex":
            return self.vertex(Vertex(*gen.data[0]))
        if gen.kind == "blue":
            return self.blue_edge(gen.data[0])
        if gen.kind == "red-cycle":
            v, power = Vertex(*gen.data[0]), gen.data[1]
            if power < 0:
                raise NonComposableError("red cycle powers must be nonnegative; use the adjoint")
            t = BluePath.trivial(v)
            return self.word(t, power * self.skel.cycle_length(v.level, v.cycle), t)
        if gen.kind == "word":
            alpha, k, beta = gen.data[:3]
            img = self.word(alpha, k, beta)
            return img.adjoint() if len(gen.data) > 3 and gen.data[3] else img
        raise ValueError(f"unknown generator kind {gen.kind!r}")

    def red_word(self, alpha: BluePath, beta: BluePath, k: int) -> tuple[bool, int]:
        """Write ``z^k Θ(α, β)`` as a single word.

        Returns ``(True, d)`` when it equals ``s_α s_μ s_β*`` with ``|μ| = d``
        and ``(False, d)`` when it is the adjoint of ``s_β s_μ s_α*``.
        """
        if alpha.source.level != self.depth or alpha.source.cycle != beta.source.cycle:
            raise NonComposableError("Θ(α, β) needs sources on one level-N cycle")
        L = self.skel.cycle_length(self.depth, alpha.source.cycle)
        pa, pb = alpha.source.position, beta.source.position
        d0 = (pa - pb) % L
        c0 = self.exponent(beta.source, d0)
        if k >= c0:
            return True, d0 + (k - c0) * L
        d1 = (pb - pa) % L
        c1 = self.exponent(alpha.source, d1)
        return False, d1 + (-k - c1) * L

    def monomial_element(self, alpha: BluePath, beta: BluePath, k: int) -> LaurentMatrix:
        forward, d = self.red_word(alpha, beta, k)
        return self.word(alpha, d, beta) if forward else self.word(beta, d, alpha).adjoint()

    def dump(self, x: LaurentMatrix) -> str:
        """Text table of nonzero entries by summand and key index, for debugging."""
        pos = {p: (j, n) for j in self.index for n, p in enumerate(self.index[j])}
        lines = []
        for (r, c), v in sorted(x.entries.items(), key=lambda kv: (pos.get(kv[0][0], (0, -1)), pos.get(kv[0][1], (0, -1)))):
            (j, a), (_, b) = pos.get(r, (0, -1)), pos.get(c, (0, -1))
            lines.append(f"summand {j} [{a},{b}] = {v!r}")
        return "\n".join(lines)


# -- relation checks


def _sample_path(model: CircleModel, rng: random.Random, top: Vertex | None = None) -> tuple[BluePath, int]:
    """A random 2-graph path ``(α, k)``; ``top`` fixes its range."""
    skel = model.skel
    if top is None:
        verts = [v for n in range(model.depth + 1) for v in skel.vertices(n)]
        top = rng.choice(verts)
    cur, edges = top, []
    stop = rng.randint(top.level, model.depth)
    while cur.level < stop:
        eid = rng.choice(skel.edges_into(cur))
        edges.append(eid)
        cur = skel.edge(eid).source
    L = skel.cycle_length(cur.level, cur.cycle)
    return BluePath(top, cur, tuple(edges)), rng.randint(0, 2 * L + 1)


def _start(model: CircleModel, lam: tuple[BluePath, int]) -> Vertex:
    alpha, k = lam
    return model.skel.red_step(alpha.source, -k)


def verify_ck(skel: GbdSkeleton, depth: int | None = None, samples: int = 60, seed: int = 0,
              marked: Mapping[int, int] | None = None) -> ValidationReport:
    """Check the Cuntz-Krieger relations and unitarity as exact matrix identities.

    Kinds: ``CK1`` (vertex projections), ``CK2`` (multiplicativity on sampled
    composable pairs), ``CK3`` (``s_λ* s_λ = s_{s(λ)}``), ``CK4`` (blue and
    red edge sums) and ``unitary``.
    """
    model = CircleModel(skel, depth, marked)
    rng = random.Random(seed)
    out: list[Violation] = []
    N = model.depth
    verts = [v for n in range(N + 1) for v in skel.vertices(n)]
    proj = {v: model.vertex(v) for v in verts}

    for v in verts:
        p = proj[v]
        if p @ p != p or p.adjoint() != p:
            out.append(Violation("CK1", f"s_v is not a projection at {tuple(v)}", (v,)))
    for a in range(len(verts)):
        for b in range(a + 1, len(verts)):
            if proj[verts[a]] @ proj[verts[b]]:
                out.append(Violation("CK1", "vertex projections are not orthogonal", (verts[a], verts[b])))
    total = LaurentMatrix()
    for v in verts:
        total = total + proj[v]
    if total != model.identity():
        out.append(Violation("CK1", "vertex projections do not sum to the identity", ()))

    for v in verts:
        if v.level < N:
            s = LaurentMatrix()
            for eid in skel.edges_into(v):
                e = model.blue_edge(eid)
                s = s + e @ e.adjoint()
            if s != proj[v]:
                out.append(Violation("CK4", f"blue edge sum differs from s_v at {tuple(v)}", (v,)))
        f = model.red_edge(skel.red_step(v, -1))
        if f @ f.adjoint() != proj[v]:
            out.append(Violation("CK4", f"red edge sum differs from s_v at {tuple(v)}", (v,)))

    for eid in (e.id for e in skel.edges if e.range.level < N):
        e = model.blue_edge(eid)
        if e.adjoint() @ e != proj[skel.edge(eid).source]:
            out.append(Violation("CK3", f"s_e* s_e != s_(s(e)) for {eid}", (eid,)))
    for v in verts:
        f = model.red_edge(v)
        if f.adjoint() @ f != proj[v]:
            out.append(Violation("CK3", f"s_f* s_f != s_(s(f)) for the red edge at {tuple(v)}", (v,)))

    for _ in range(samples):
        lam1 = _sample_path(model, rng)
        lam2 = _sample_path(model, rng, top=_start(model, lam1))
        (a1, k1), (a2, k2) = lam1, lam2
        x1, x2 = model.path(a1, k1), model.path(a2, k2)
        if x1.adjoint() @ x1 != proj[_start(model, lam1)]:
            out.append(Violation("CK3", "s_λ* s_λ != s_(s(λ))", (lam1,)))
        joined = concat(a1, skel.path_step(a2, k1))
        if not skel.is_path(joined):
            out.append(Violation("CK2", "the factorisation of the concatenation is not a blue path",
                                 (lam1, lam2)))
            continue
        if x1 @ x2 != model.path(joined, k1 + k2):
            out.append(Violation("CK2", "s_λ1 s_λ2 != s_(λ1 λ2)", (lam1, lam2)))

    u = model.unitary()
    one = model.identity()
    if u @ u.adjoint() != one or u.adjoint() @ u != one:
        out.append(Violation("unitary", "U is not unitary", ()))
    return ValidationReport(tuple(out))


# -- inclusions and K-theory multiplicities


def _same_prefix(a: GbdSkeleton, b: GbdSkeleton, depth: int) -> bool:
    if a is b:
        return True
    if a.levels[:depth + 1] != b.levels[:depth + 1]:
        return False
    ea = {e.id: e for e in a.edges if e.range.level < depth}
    eb = {e.id: e for e in b.edges if e.range.level < depth}
    return ea == eb and all(a.successor[x] == b.successor[x] for x in ea)


def corner_inclusion(src: CircleModel, dst: CircleModel) -> Callable[[LaurentMatrix], LaurentMatrix]:
    """The inclusion of the depth-``N`` algebra into the depth-``N+1`` algebra.

    Each entry ``z^k Θ(α, β)`` of the argument is rewritten as a word (or the
    adjoint of one) using the marked edges of ``src`` and then represented
    in ``dst``.
    """
    if dst.depth != src.depth + 1:
        raise MismatchedTruncationError(f"depths {src.depth} and {dst.depth} are not consecutive")
    if not _same_prefix(src.skel, dst.skel, dst.depth):
        raise MismatchedTruncationError("the two models come from different truncations")

    def include(x: LaurentMatrix) -> LaurentMatrix:
        acc: dict = {}
        for (a, b), poly in x.entries.items():
            for k, c in poly.terms.items():
                forward, d = src.red_word(a, b, k)
                img = dst.word(a, d, b) if forward else dst.word(b, d, a).adjoint()
                for key, v in img.entries.items():
                    term = v * c
                    acc[key] = acc[key] + term if key in acc else term
        return LaurentMatrix(acc)

    return include


def k1_winding(u: LaurentMatrix, keys: Iterable) -> int:
    """Winding number of ``det`` of the block of ``u`` on ``keys``."""
    return winding(u.dense(list(keys)))


@dataclass(frozen=True)
class Multiplicities:
    """Observed K0 ranks and K1 windings of the inclusion from depth ``N`` to ``N+1``."""

    N: int
    k0: tuple[tuple[int, ...], ...]
    k1: tuple[tuple[int, ...], ...]

    def to_dict(self) -> dict:
        return {"N": self.N, "k0": [list(r) for r in self.k0], "k1": [list(r) for r in self.k1]}


def inclusion_multiplicities(skel: GbdSkeleton, N: int, marked: Mapping[int, int] | None = None,
                             marked_next: Mapping[int, int] | None = None) -> Multiplicities:
    """Entry ``(i, j)``: constant-part rank of the image of a rank-1 projection of summand ``j``
    in summand ``i`` (``k0``), and winding of the image of the summand-``j`` generator unitary
    on summand ``i`` (``k1``)."""
    src = CircleModel(skel, N, marked, corner=True)
    dst = CircleModel(skel, N + 1, marked_next, corner=True)
    inc = corner_inclusion(src, dst)
    rows0 = [[0] * len(src.index) for _ in dst.index]
    rows1 = [[0] * len(src.index) for _ in dst.index]
    for j in src.index:
        a0 = src.index[j][0]
        p = inc(LaurentMatrix.unit(a0, a0))
        u = inc(src.generator_unitary(j))
        for i in dst.index:
            keys = dst.index[i]
            rows0[i - 1][j - 1] = int(p.restrict(keys).trace_constant())
            rows1[i - 1][j - 1] = k1_winding(u, keys)
    return Multiplicities(N, tuple(map(tuple, rows0)), tuple(map(tuple, rows1)))


def permutation_form_image(skel: GbdSkeleton, N: int, x: LaurentMatrix) -> LaurentMatrix:
    """Image of ``x`` (corner model at ``N``, all cycles of length 1) under the direct sum over
    blocks ``(i, j)`` of ``ψ_σ`` with ``σ`` the inverse of ``F`` on the block."""
    if any(t != 1 for n in (N, N + 1) for t in skel.levels[n]):
        raise ValueError("the permutation form needs cycles of length 1 at both levels")
    out = LaurentMatrix()
    for j in range(1, skel.cycle_count(N) + 1):
        part = LaurentMatrix({key: v for key, v in x.entries.items() if key[0].source.cycle == j})
        if not part:
            continue
        for i in range(1, skel.cycle_count(N + 1) + 1):
            ids = skel.block(N, j, i)
            if not ids:
                continue
            where = {e: n for n, e in enumerate(ids)}
            sigma = [where[skel.step(e, -1)] for e in ids]
            psi = standard_permutation_mapping(sigma, part)
            mapped = {}
            for ((r, a), (c, b)), v in psi.entries.items():
                ea, eb = skel.edge(ids[a]), skel.edge(ids[b])
                mapped[(concat(r, BluePath(ea.range, ea.source, (ea.id,))),
                        concat(c, BluePath(eb.range, eb.source, (eb.id,))))] = v
            out = out + LaurentMatrix(mapped)
    return out


def random_element(model: CircleModel, rng: random.Random, terms: int = 3, max_power: int = 3) -> LaurentMatrix:
    """Sum of a few ``c z^k Θ(α, β)`` with ``α, β`` in one summand."""
    acc: dict = {}
    js = [j for j in model.index if model.index[j]]
    for _ in range(terms):
        j = rng.choice(js)
        a, b = rng.choice(model.index[j]), rng.choice(model.index[j])
        k = rng.randint(-max_power, max_power)
        term = LaurentPoly.monomial(k, rng.randint(1, 3))
        acc[(a, b)] = acc[(a, b)] + term if (a, b) in acc else term
    return LaurentMatrix(acc)


__all__ = ["CircleModel", "CkGenerator", "NonComposableError", "MismatchedTruncationError", "Multiplicities",
           "concat", "corner_inclusion", "crossings", "inclusion_multiplicities", "k1_winding",
           "permutation_form_image", "random_element", "verify_ck"]
