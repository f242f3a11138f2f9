"""Circle measures, rotation-averaging operators, permutation statistics and traces.

Angles are rational fractions of a full turn in ``[0, 1)``.  A measure is a
Lebesgue component plus finitely many atoms, so every operation used here
stays inside the class and is exact.  Fourier coefficients use the
convention ``mu_hat(k) = integral of z^k d(mu)``.
"""
from __future__ import annotations

import cmath
import math
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Sequence, Union

from .builders import PermutationSystem, system_from_skeleton
from .families import Family, SeriesCertificate
from .laurent import LaurentMatrix
from .skeleton import GbdSkeleton

TOLERANCE = 1e-9


@dataclass(frozen=True)
class CircleMeasure:
    lebesgue: Fraction
    atoms: tuple[tuple[Fraction, Fraction], ...]

    def __init__(self, lebesgue=0, atoms: Mapping | Iterable = (), *, check: bool = True):
        items = atoms.items() if isinstance(atoms, Mapping) else atoms
        merged: dict[Fraction, Fraction] = {}
        for angle, weight in items:
            a = Fraction(angle) % 1
            merged[a] = merged.get(a, Fraction(0)) + Fraction(weight)
        leb = Fraction(lebesgue)
        if leb < 0 or any(w < 0 for w in merged.values()):
            raise ValueError("measure weights must be nonnegative")
        object.__setattr__(self, "lebesgue", leb)
        object.__setattr__(self, "atoms", tuple(sorted((a, w) for a, w in merged.items() if w)))
        if check and self.total != 1:
            raise ValueError(f"total mass is {self.total}, expected 1")

    @classmethod
    def lebesgue_measure(cls) -> "CircleMeasure":
        return cls(1)

    @classmethod
    def dirac(cls, angle=0) -> "CircleMeasure":
        return cls(0, {angle: 1})

    @classmethod
    def roots_of_unity(cls, n: int, phase=0) -> "CircleMeasure":
        return cls(0, {Fraction(phase) + Fraction(j, n): Fraction(1, n) for j in range(n)})

    @property
    def total(self) -> Fraction:
        return self.lebesgue + sum((w for _, w in self.atoms), Fraction(0))

    def atom_map(self) -> dict[Fraction, Fraction]:
        return dict(self.atoms)

    def fourier(self, k: int) -> complex:
        value = complex(self.lebesgue) if k == 0 else 0j
        for angle, weight in self.atoms:
            value += float(weight) * cmath.exp(2j * math.pi * float(k * angle % 1))
        return value

    def to_dict(self) -> dict:
        return {"lebesgue": str(self.lebesgue),
                "atoms": [{"angle": str(a), "weight": str(w)} for a, w in self.atoms]}


def mixture(terms: Iterable[tuple[Fraction, CircleMeasure]], *, check: bool = True) -> CircleMeasure:
    """Convex combination ``sum w * mu``."""
    leb = Fraction(0)
    atoms: dict[Fraction, Fraction] = {}
    for w, mu in terms:
        w = Fraction(w)
        leb += w * mu.lebesgue
        for a, x in mu.atoms:
            atoms[a] = atoms.get(a, Fraction(0)) + w * x
    return CircleMeasure(leb, atoms, check=check)


def markov_apply(k: int, mu: CircleMeasure) -> CircleMeasure:
    """Push ``mu`` through the average of the rotations by multiples of ``1/k``."""
    if k < 1:
        raise ValueError("k must be a positive integer")
    atoms: dict[Fraction, Fraction] = {}
    for a, w in mu.atoms:
        for j in range(k):
            b = (a + Fraction(j, k)) % 1
            atoms[b] = atoms.get(b, Fraction(0)) + w / k
    return CircleMeasure(mu.lebesgue, atoms, check=False)


def variation_norm(mu: CircleMeasure, nu: CircleMeasure) -> Fraction:
    """Total variation norm of ``mu - nu`` (at most 2 for probability measures)."""
    a, b = mu.atom_map(), nu.atom_map()
    return abs(mu.lebesgue - nu.lebesgue) + sum(
        (abs(a.get(x, Fraction(0)) - b.get(x, Fraction(0))) for x in set(a) | set(b)), Fraction(0))


def tv_distance(mu: CircleMeasure, nu: CircleMeasure) -> Fraction:
    """Total variation distance ``sup_E |mu(E) - nu(E)|``, half the variation norm."""
    return variation_norm(mu, nu) / 2


def is_fixed(mu: CircleMeasure, k: int) -> bool:
    return markov_apply(k, mu) == mu


# -- permutation statistics


@dataclass(frozen=True)
class PermStats:
    permutation: tuple[int, ...]
    cycle_type: Mapping[int, int] = field(compare=False)
    kappa: int = field(compare=False)

    def __init__(self, permutation: Sequence[int]):
        perm = tuple(int(x) for x in permutation)
        if sorted(perm) != list(range(len(perm))):
            raise ValueError(f"{perm} is not a permutation")
        seen = [False] * len(perm)
        lengths = Counter()
        for start in range(len(perm)):
            if seen[start]:
                continue
            size, cur = 0, start
            while not seen[cur]:
                seen[cur] = True
                cur = perm[cur]
                size += 1
            lengths[size] += 1
        object.__setattr__(self, "permutation", perm)
        object.__setattr__(self, "cycle_type", dict(sorted(lengths.items())))
        object.__setattr__(self, "kappa", max(lengths, default=0))

    @property
    def size(self) -> int:
        return len(self.permutation)


PermLike = Union[PermStats, Sequence[int]]


def _stats(sigma: PermLike) -> PermStats:
    return sigma if isinstance(sigma, PermStats) else PermStats(sigma)


def beta(sigma: PermLike, N: int) -> Fraction:
    """Fraction of points whose orbit size divides ``N``."""
    s = _stats(sigma)
    return Fraction(sum(l * c for l, c in s.cycle_type.items() if N % l == 0), s.size)


def kappa(sigma: PermLike) -> int:
    return _stats(sigma).kappa


def averaged(sigma: PermLike, mu: CircleMeasure) -> CircleMeasure:
    """``sum_l (l c_l / m) R_l(mu)``: the measure a standard permutation mapping pulls ``mu`` back to."""
    s = _stats(sigma)
    return mixture((Fraction(l * c, s.size), markov_apply(l, mu)) for l, c in s.cycle_type.items())


# -- alpha series


@dataclass(frozen=True)
class AlphaSeries:
    N: int
    beta_min: tuple[Fraction, ...]
    beta_max: tuple[Fraction, ...]
    lower: tuple[Fraction, ...]
    upper: tuple[Fraction, ...]
    certificate: SeriesCertificate | None = None


def _system_of(source, levels: int | None) -> tuple[PermutationSystem, Family | None]:
    if isinstance(source, Family):
        if not source.unit_cycles:
            raise ValueError(f"{source.name} does not have cycles of length 1")
        return source.permutation_system(levels if levels is not None else 8), source
    if isinstance(source, GbdSkeleton):
        system = system_from_skeleton(source)
    else:
        system = source
    if levels is not None:
        system = system.truncate(min(levels, system.levels))
    return system, None


def alpha_series(source, N: int, levels: int | None = None) -> AlphaSeries:
    """Partial sums of the lower and upper alpha series over the maps of a length-1 system."""
    system, family = _system_of(source, levels)
    bmin, bmax = [], []
    for table in system.blocks:
        values = [beta(p, N) for p in table.values()]
        bmin.append(min(values))
        bmax.append(max(values))
    lower, upper, lo, up = [], [], Fraction(0), Fraction(0)
    for lo_b, hi_b in zip(bmin, bmax):
        lo += 1 - hi_b
        up += 1 - lo_b
        lower.append(lo)
        upper.append(up)
    cert = family.series_certificate(N) if family is not None else None
    return AlphaSeries(N, tuple(bmin), tuple(bmax), tuple(lower), tuple(upper), cert)


# -- traces


@dataclass(frozen=True)
class TraceState:
    """Weights ``a_t`` and measures ``mu_t`` on the summands of one level."""

    level: int
    weights: tuple[Fraction, ...]
    measures: tuple[CircleMeasure, ...]
    degenerate: tuple[int, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "weights", tuple(Fraction(w) for w in self.weights))
        if len(self.weights) != len(self.measures):
            raise ValueError("one measure per weight")
        if any(w < 0 for w in self.weights) or sum(self.weights) != 1:
            raise ValueError("weights must be a probability vector")


def pullback_weights(system: PermutationSystem, level: int, upper: Sequence[Fraction]) -> list[Fraction]:
    """``a_{j,t} = sum_s a_{j+1,s} m n_{j,t} / n_{j+1,s}``."""
    sizes, nxt = system.sizes[level], system.sizes[level + 1]
    out = [Fraction(0)] * system.counts[level]
    for (s, t), perm in system.blocks[level].items():
        out[t - 1] += Fraction(upper[s - 1]) * len(perm) * sizes[t - 1] / nxt[s - 1]
    return out


def trace_pullback(state: TraceState, system: PermutationSystem) -> TraceState:
    """Compose the trace at level ``j + 1`` with the connecting map to level ``j``."""
    j = state.level - 1
    if not 0 <= j < len(system.blocks):
        raise ValueError(f"no connecting map below level {state.level}")
    weights = pullback_weights(system, j, state.weights)
    sizes, nxt = system.sizes[j], system.sizes[j + 1]
    measures, degenerate = [], []
    for t in range(1, system.counts[j] + 1):
        a = weights[t - 1]
        if a == 0:
            measures.append(CircleMeasure.lebesgue_measure())
            degenerate.append(t)
            continue
        terms = [(state.weights[s - 1] / a * len(perm) * sizes[t - 1] / nxt[s - 1],
                  averaged(perm, state.measures[s - 1]))
                 for (s, tt), perm in system.blocks[j].items() if tt == t]
        measures.append(mixture(terms))
    return TraceState(j, tuple(weights), tuple(measures), tuple(degenerate))


def boundary_weights(system: PermutationSystem, top: Sequence[Fraction]) -> list[list[Fraction]]:
    """Weights on every level induced by a probability vector on the top level."""
    out = [list(map(Fraction, top))]
    for level in range(system.levels - 2, -1, -1):
        out.insert(0, pullback_weights(system, level, out[0]))
    return out


@dataclass(frozen=True)
class LiftStep:
    level: int
    distance: Fraction
    norm: Fraction
    bound: Fraction
    tail: Fraction


def trace_lift(system: PermutationSystem, top_weights: Sequence[Fraction], mu: CircleMeasure,
               N: int) -> tuple[list[TraceState], list[LiftStep]]:
    """States with constant measure ``mu`` on every level and the distance to their pullbacks.

    For each level ``i`` the state at ``i + 1`` is pulled back through the
    connecting map and compared with the state at ``i``: ``distance`` is the
    weighted total variation distance, ``norm`` the weighted variation norm,
    ``bound`` is ``1 - beta_min(N, i)`` and ``tail`` the remaining sum of
    bounds over the available levels.
    """
    if not is_fixed(mu, N):
        raise ValueError(f"the measure is not fixed by the averaging operator of order {N}")
    weights = boundary_weights(system, top_weights)
    states = [TraceState(n, tuple(w), tuple(mu for _ in w)) for n, w in enumerate(weights)]
    series = alpha_series(system, N)
    bounds = [1 - b for b in series.beta_min]
    steps = []
    for i in range(system.levels - 1):
        pulled = trace_pullback(states[i + 1], system)
        assert pulled.weights == states[i].weights
        dist = sum((a * tv_distance(m, mu) for a, m in zip(pulled.weights, pulled.measures)), Fraction(0))
        norm = sum((a * variation_norm(m, mu) for a, m in zip(pulled.weights, pulled.measures)), Fraction(0))
        steps.append(LiftStep(i, dist, norm, bounds[i], sum(bounds[i:], Fraction(0))))
    return states, steps


def _trace_of(f: LaurentMatrix, n: int, mu: CircleMeasure) -> complex:
    total = 0j
    for (r, c), poly in f.entries.items():
        if r == c:
            for k, coeff in poly.terms.items():
                total += float(coeff) * mu.fourier(k)
    return total / n


def evaluate_trace(state, f, sizes: Sequence[int] | None = None) -> complex:
    """``tr_{n,mu}(f)`` for a pair ``(n, mu)`` and one matrix ``f``.

    For a :class:`TraceState`, ``f`` lists one matrix per summand and
    ``sizes`` gives the summand dimensions; the result is
    ``sum_t a_t tr_{n_t, mu_t}(f_t)``.
    """
    if isinstance(state, TraceState):
        if sizes is None:
            raise ValueError("summand sizes are needed to evaluate a state")
        return sum((float(a) * _trace_of(ft, n, m)
                    for a, m, ft, n in zip(state.weights, state.measures, f, sizes)), 0j)
    n, mu = state
    return _trace_of(f, n, mu)


@dataclass(frozen=True)
class AttractorReport:
    fixed_by: tuple[int, ...]
    not_fixed_by: tuple[int, ...]
    coefficients: dict
    max_coefficient: float

    @property
    def lebesgue_like(self) -> bool:
        return self.max_coefficient <= TOLERANCE


def lebesgue_attractor_check(mu: CircleMeasure, ks: Iterable[int], M: int) -> AttractorReport:
    """Which ``R_k`` fix ``mu``, and the size of ``mu_hat(m)`` for ``0 < |m| <= M``."""
    ks = list(ks)
    fixed = tuple(k for k in ks if is_fixed(mu, k))
    coeffs = {m: mu.fourier(m) for m in range(-M, M + 1) if m}
    return AttractorReport(fixed, tuple(k for k in ks if k not in fixed), coeffs,
                           max((abs(v) for v in coeffs.values()), default=0.0))
