"""Three-valued decisions for cofinality, simplicity, large-permutation factorisations and real rank.

Finite inputs (a :class:`GbdSkeleton` or :class:`LevelData`) say nothing
about the levels beyond the truncation, so they only ever produce
``EvidenceUpToHorizon``.  A :class:`Family` carries closed-form
certificates; those are checked against the truncations built here before
a verdict of ``Proven`` or ``Refuted`` is returned.
"""
from __future__ import annotations

from math import lcm
from typing import Union

from .builders import build_from_data
from .families import Family
from .leveldata import LevelData, extract_data, is_positive
from .results import Status, Verdict
from .skeleton import GbdSkeleton, Vertex, order_of_edge
from .tracesim import alpha_series

Source = Union[Family, GbdSkeleton, LevelData]

# levels of data and of skeleton used to check family certificates
DATA_LEVELS = 10
SKELETON_LEVELS = 5


class CertificateError(AssertionError):
    """A family certificate disagrees with the truncation it describes."""


def _data_of(source: Source, horizon: int) -> LevelData:
    if isinstance(source, Family):
        return source.data(min(horizon, DATA_LEVELS) + 1)
    if isinstance(source, GbdSkeleton):
        return extract_data(source)
    return source


def _skeleton_of(source: Source, levels: int | None = None) -> GbdSkeleton:
    if isinstance(source, Family):
        return source.skeleton(levels or SKELETON_LEVELS)
    if isinstance(source, GbdSkeleton):
        return source
    return build_from_data(source)


def _positivity_table(data: LevelData, horizon: int) -> dict[int, int | None]:
    """For each level ``n`` the least ``m`` within ``horizon`` with ``A_{m,n}`` positive."""
    out = {}
    for n in range(min(data.depth, horizon) + 1):
        out[n] = next((m for m in range(n, min(data.depth, n + horizon) + 1)
                       if is_positive(data.between(m, n))), None)
    return out


# -- cofinality


def cofinality(source: Source, horizon: int = 16) -> Verdict:
    data = _data_of(source, horizon)
    table = _positivity_table(data, horizon)
    if not isinstance(source, Family):
        return Verdict(Status.EVIDENCE, {
            "positive_from": {str(n): m for n, m in table.items()},
            "note": "a finite truncation does not determine cofinality of the infinite graph"}, horizon)
    cert = source.cofinality_certificate()
    if cert is None:
        return Verdict(Status.EVIDENCE, {"positive_from": {str(n): m for n, m in table.items()},
                                         "note": "the family has no cofinality certificate"}, horizon)
    if cert.cofinal:
        for n in range(data.depth - cert.gap + 1):
            if not is_positive(data.between(n + cert.gap, n)):
                raise CertificateError(f"{source.name}: A_({n + cert.gap},{n}) is not positive")
        return Verdict(Status.PROVEN, {"reason": cert.reason, "gap": cert.gap,
                                       "checked_levels": data.depth,
                                       "example": [list(r) for r in data.between(cert.gap, 0)]}, horizon)
    for m in range(data.depth + 1):
        if is_positive(data.between(m, 0)):
            raise CertificateError(f"{source.name}: A_({m},0) is positive")
    zero = next((i, j) for i, row in enumerate(data.between(data.depth, 0)) for j, x in enumerate(row) if x == 0)
    return Verdict(Status.REFUTED, {"reason": cert.reason, "witness": cert.witness,
                                    "zero_entry_of_A_(m,0)": [zero[0] + 1, zero[1] + 1],
                                    "checked_levels": data.depth}, horizon)


# -- orders


def edge_orders_by_level(skel: GbdSkeleton, levels: int | None = None) -> list[list[int]]:
    """Orders of the blue edges with range at each level, by iterating ``F``."""
    top = skel.depth if levels is None else min(levels, skel.depth)
    out: list[list[int]] = [[] for _ in range(top)]
    for e in skel.edges:
        if e.range.level < top:
            out[e.range.level].append(order_of_edge(skel, e))
    return out


def orders_from_data(data: LevelData) -> list[list[int]]:
    """Edge orders of the skeleton built from ``data``: ``A_n(i, j) |V_{n,j}|`` per nonzero block."""
    return [[data.A[n][i][j] * data.T[n][j] for i in range(data.c[n + 1]) for j in range(data.c[n])
             if data.A[n][i][j]] for n in range(data.depth)]


def _order_verdict(source: Source, horizon: int) -> Verdict:
    """Are the blue edge orders unbounded?  Proven means unbounded, Refuted means bounded."""
    skel = _skeleton_of(source)
    brute = edge_orders_by_level(skel, SKELETON_LEVELS)
    observed = {"min_order_by_level": [min(x) for x in brute if x],
                "max_order_by_level": [max(x) for x in brute if x]}
    if not isinstance(source, GbdSkeleton):
        # orders predicted from data must match brute force on the built skeleton
        data = _data_of(source, horizon)
        if isinstance(source, LevelData) or _built_from_data(source):
            predicted = orders_from_data(data.truncate(min(data.levels, len(brute) + 1)))
            if [sorted(set(x)) for x in predicted] != [sorted(set(x)) for x in brute]:
                raise CertificateError("orders predicted from the data disagree with F iteration")
            observed["data_formula_agrees"] = True
    if not isinstance(source, Family) or source.order_certificate() is None:
        return Verdict(Status.EVIDENCE, observed, horizon)
    cert = source.order_certificate()
    if cert.bounded:
        if any(o > cert.bound for x in brute for o in x):
            raise CertificateError(f"{source.name}: an edge order exceeds the bound {cert.bound}")
        return Verdict(Status.REFUTED, {"reason": cert.reason, "bound": cert.bound, **observed}, horizon)
    for n, x in enumerate(brute):
        if x and min(x) < cert.min_order(n):
            raise CertificateError(f"{source.name}: an order at level {n} is below {cert.min_order(n)}")
    lows = [cert.min_order(n) for n in range(horizon + 1)]
    return Verdict(Status.PROVEN, {"reason": cert.reason, "lower_bounds": lows, **observed}, horizon)


def _built_from_data(family: Family) -> bool:
    return type(family).skeleton is Family.skeleton


def simplicity(source: Source, horizon: int = 16) -> Verdict:
    """Simple exactly when cofinal with unbounded edge orders."""
    cof = cofinality(source, horizon)
    orders = _order_verdict(source, horizon)
    cert = {"cofinality": cof.to_dict(), "orders_unbounded": orders.to_dict()}
    if cof.proven and orders.proven:
        return Verdict(Status.PROVEN, cert, horizon)
    if cof.refuted or orders.refuted:
        return Verdict(Status.REFUTED, cert, horizon)
    return Verdict(Status.EVIDENCE, cert, horizon)


# -- large-permutation factorisations


def path_order_states(skel: GbdSkeleton, v: Vertex) -> list[set[tuple[Vertex, int]]]:
    """For each depth ``k`` the set of (endpoint, path order) over blue paths of length ``k`` from ``v``.

    Uses the lcm law, so the work is bounded by the number of distinct
    states instead of the number of paths.
    """
    states = [{(v, 1)}]
    while states[-1] and next(iter(states[-1]))[0].level < skel.depth:
        nxt = set()
        for u, o in states[-1]:
            for eid in skel.edges_into(u):
                nxt.add((skel.edge(eid).source, lcm(o, order_of_edge(skel, eid))))
        states.append(nxt)
    return states


def lpf_table(skel: GbdSkeleton, horizon: int) -> dict[str, dict[str, int | None]]:
    """For each vertex and each ``l <= horizon``, the least length ``N`` with every path order above ``l``."""
    out = {}
    for v in skel.vertices():
        states = path_order_states(skel, v)
        mins = [min(o for _, o in s) for s in states]
        out[str(tuple(v))] = {str(l): next((N for N, m in enumerate(mins) if m > l), None)
                              for l in range(1, horizon + 1)}
    return out


def lpf(source: Source, horizon: int = 16) -> Verdict:
    if isinstance(source, Family) and source.order_certificate() is not None:
        orders = _order_verdict(source, horizon)
        cert = source.order_certificate()
        if orders.proven:
            return Verdict(Status.PROVEN, {
                "reason": "a path's order is a multiple of the order of its last edge, and the minimum "
                          "edge order at level n tends to infinity",
                "orders": orders.certificate}, horizon)
        limit = lcm(*range(1, cert.bound + 1))
        return Verdict(Status.REFUTED, {
            "reason": f"every path order divides lcm(1..{cert.bound}) = {limit}, so l = {limit} is never exceeded",
            "orders": orders.certificate}, horizon)
    skel = _skeleton_of(source)
    table = lpf_table(skel, horizon)
    return Verdict(Status.EVIDENCE, {"least_length": table,
                                     "note": "computed on a finite truncation only"}, horizon)


# -- real rank


def real_rank(source: Source, horizon: int = 16) -> Verdict:
    """Real rank zero from LPF and cofinality; real rank one from a finite upper alpha series."""
    l = lpf(source, horizon)
    cof = cofinality(source, horizon)
    cert: dict = {"lpf": l.status.value, "cofinality": cof.status.value}
    if l.proven and cof.proven:
        cert["reason"] = "large-permutation factorisations and cofinality"
        return Verdict(Status.PROVEN, cert, horizon, value="zero")
    unit = isinstance(source, Family) and source.unit_cycles or \
        not isinstance(source, Family) and all(t == 1 for row in _data_of(source, horizon).T for t in row)
    if unit:
        sums = {}
        for N in range(1, horizon + 1):
            series = alpha_series(source, N, DATA_LEVELS if isinstance(source, Family) else None)
            sums[str(N)] = {"lower": str(series.lower[-1]) if series.lower else "0",
                            "upper": str(series.upper[-1]) if series.upper else "0"}
            sc = series.certificate
            if sc is not None and sc.upper_finite:
                start = sc.tail_zero_from or 0
                if any(b != 1 for b in series.beta_min[start:]):
                    raise CertificateError(f"beta_{N} is not 1 from level {start} on")
                cert.update({"reason": sc.reason, "N": N, "upper_partial_sums": [str(x) for x in series.upper]})
                return Verdict(Status.PROVEN, cert, horizon, value="one")
        cert["alpha_partial_sums"] = sums
    return Verdict(Status.EVIDENCE, cert, horizon)
