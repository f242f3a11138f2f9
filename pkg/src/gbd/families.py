"""Infinite gbd families given by a level rule plus closed-form certificates.

A family produces finite truncations on demand (``data(levels)`` and
``skeleton(levels)``, where ``levels`` counts vertex levels).  Certificates
state facts about *every* level that the classifier cannot infer from a
finite truncation; the classifier checks them against the truncations it
builds before relying on them.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

from .builders import (ContinuedFraction, PermutationSystem, SupernaturalNumber, build_from_data,
                       build_from_permutations, bunce_deddens_data, cycle_permutation,
                       irrational_rotation_data, triangular_indices)
from .leveldata import (IncompatibleDataError, LevelData, Matrix, as_matrix, check_compatibility, determinant,
                        identity, is_positive, matmul, telescope)
from .skeleton import GbdSkeleton


@dataclass(frozen=True)
class CofinalityCertificate:
    """Either ``A_{n+gap,n}`` is entrywise positive for every ``n``, or cofinality fails."""

    cofinal: bool
    reason: str
    gap: int | None = None
    witness: dict | None = None


@dataclass(frozen=True)
class OrderCertificate:
    """Bounds on blue edge orders valid at every level.

    For unbounded families ``min_order(n)`` is a lower bound for the order of
    every edge with range at level ``n``; it is nondecreasing and unbounded.
    For bounded families every order is at most ``bound``.
    """

    bounded: bool
    reason: str
    bound: int | None = None
    min_order: Callable[[int], int] | None = None


@dataclass(frozen=True)
class SeriesCertificate:
    """Closed-form behaviour of the alpha series at a fixed ``N``."""

    N: int
    lower_diverges: bool
    upper_finite: bool
    reason: str
    tail_zero_from: int | None = None


class Family:
    name = "family"
    unit_cycles = False

    def data(self, levels: int) -> LevelData:
        raise NotImplementedError

    def skeleton(self, levels: int) -> GbdSkeleton:
        return build_from_data(self.data(levels))

    def cofinality_certificate(self) -> CofinalityCertificate | None:
        return None

    def order_certificate(self) -> OrderCertificate | None:
        return None

    def injective_maps(self, which: str) -> bool:
        """Whether every connecting map (A for K0, B for K1) is square and invertible over Q."""
        return False

    def permutation_system(self, levels: int) -> PermutationSystem:
        raise TypeError(f"{self.name} is not a length-1 family")

    def series_certificate(self, N: int) -> SeriesCertificate | None:
        return None

    def describe(self) -> dict:
        return {"family": self.name}


def _fib(n: int) -> int:
    a, b = 0, 1
    for _ in range(n):
        a, b = b, a + b
    return a


class BunceDeddensFamily(Family):
    """``c_n = 1``, ``A_n = [a_n]``, ``B_n = [1]`` with cumulative cycle lengths."""

    name = "bunce-deddens"

    def __init__(self, m: SupernaturalNumber):
        if not m.infinite:
            raise ValueError("a family needs an infinite supernatural number")
        self.m = m

    def data(self, levels: int) -> LevelData:
        return bunce_deddens_data(self.m, levels)

    def cofinality_certificate(self) -> CofinalityCertificate:
        return CofinalityCertificate(True, "one cycle per level and proper maps, so every A_{n+1,n} is a positive 1x1 matrix", gap=1)

    def order_certificate(self) -> OrderCertificate:
        return OrderCertificate(False, "edges at level n have order a_0...a_n >= 2^(n+1)",
                                min_order=lambda n: 2 ** (n + 1))

    def injective_maps(self, which: str) -> bool:
        return True

    def describe(self) -> dict:
        return {"family": self.name, "primes": list(self.m.primes)}


class IrrationalRotationFamily(Family):
    """Rotation data ``[[a, 1], [1, 0]]`` telescoped along triangular numbers.

    The telescoped map at level ``k`` is a product of ``k + 2`` rotation
    matrices; entrywise it dominates the golden product, whose smallest
    entry is the Fibonacci number ``F_{k+1}``.
    """

    name = "irrational-rotation"

    def __init__(self, cf: ContinuedFraction):
        if not cf.periodic:
            raise ValueError("a family needs an infinite (periodic) term sequence")
        self.cf = cf

    def data(self, levels: int) -> LevelData:
        idx = triangular_indices(levels)
        return telescope(irrational_rotation_data(self.cf, idx[-1] + 1), idx)

    def cofinality_certificate(self) -> CofinalityCertificate:
        return CofinalityCertificate(
            True, "a product of two rotation matrices [[a,1],[1,0]][[b,1],[1,0]] = [[ab+1,a],[b,1]] is positive",
            gap=1)

    def order_certificate(self) -> OrderCertificate:
        return OrderCertificate(False, "cycles have length 1, so orders are entries of the telescoped map, at least F_(n+1)",
                                min_order=lambda n: _fib(n + 1))

    def injective_maps(self, which: str) -> bool:
        return True

    def describe(self) -> dict:
        return {"family": self.name, "terms": list(self.cf.terms), "periodic": True}


def _boolean_power_positive(a: Matrix) -> tuple[bool, int]:
    """Primitivity test: is some power of ``a`` positive?  Wielandt's bound ``(c-1)^2 + 1`` suffices."""
    c = len(a)
    pattern = tuple(tuple(int(x > 0) for x in row) for row in a)
    power = pattern
    for k in range(1, (c - 1) ** 2 + 2):
        if is_positive(power):
            return True, k
        power = tuple(tuple(int(x > 0) for x in row) for row in matmul(pattern, power))
    return False, (c - 1) ** 2 + 1


class StationaryFamily(Family):
    """The same ``A``, ``B`` and cycle lengths ``T`` at every level."""

    name = "stationary"

    def __init__(self, A: Sequence[Sequence[int]], B: Sequence[Sequence[int]], T: Sequence[int]):
        self.A, self.B, self.T = as_matrix(A), as_matrix(B), tuple(int(t) for t in T)
        if len(self.A) != len(self.T) or any(len(r) != len(self.T) for r in self.A):
            raise ValueError("a stationary family needs square maps")
        self.data(2)

    def data(self, levels: int) -> LevelData:
        c = len(self.T)
        data = LevelData([c] * levels, [self.A] * (levels - 1), [self.B] * (levels - 1), [self.T] * levels)
        report = check_compatibility(data)
        if not report.ok:
            raise IncompatibleDataError(report)
        return data

    def cofinality_certificate(self) -> CofinalityCertificate:
        ok, k = _boolean_power_positive(self.A)
        if ok:
            return CofinalityCertificate(True, f"A^{k} is positive", gap=k)
        return CofinalityCertificate(
            False, f"no power of A up to the Wielandt bound {k} is positive, so a cycle index is "
                   "never reached from some level onwards", witness={"power": k})

    def order_certificate(self) -> OrderCertificate:
        orders = [self.A[i][j] * self.T[j] for i in range(len(self.T)) for j in range(len(self.T)) if self.A[i][j]]
        return OrderCertificate(True, "orders are A(i,j)*T(j), the same at every level", bound=max(orders))

    def injective_maps(self, which: str) -> bool:
        return determinant(self.A if which == "A" else self.B) != 0

    def describe(self) -> dict:
        return {"family": self.name, "A": [list(r) for r in self.A], "B": [list(r) for r in self.B], "T": list(self.T)}


def product_cycle_family(c: int) -> StationaryFamily:
    """``A_n = B_n = [1]`` with every cycle of length ``c``; all orders equal ``c``."""
    return StationaryFamily([[1]], [[1]], [c])


def disjoint_chains_family(k: int = 2) -> StationaryFamily:
    return StationaryFamily(identity(k), identity(k), [1] * k)


class PermutationFamily(Family):
    """Single-summand length-1 families given by a closed-form permutation rule.

    ``kind`` is ``"growing"`` (the map between levels ``n`` and ``n+1`` is an
    ``(n+1)``-cycle), ``"constant"`` (every map is the same ``size``-cycle)
    or ``"identity"`` (every map is the identity on ``size`` letters).
    """

    unit_cycles = True

    def __init__(self, kind: str, size: int = 1):
        if kind not in ("growing", "constant", "identity"):
            raise ValueError(f"unknown permutation family {kind!r}")
        if size < 1:
            raise ValueError("size must be positive")
        self.kind, self.size = kind, size
        self.name = f"permutation-{kind}"

    def perm(self, n: int) -> tuple[int, ...]:
        if self.kind == "growing":
            return cycle_permutation(n + 1)
        if self.kind == "constant":
            return cycle_permutation(self.size)
        return tuple(range(self.size))

    def permutation_system(self, levels: int) -> PermutationSystem:
        return PermutationSystem((1,) * levels, tuple({(1, 1): self.perm(n)} for n in range(levels - 1)))

    def data(self, levels: int) -> LevelData:
        return self.permutation_system(levels).data()

    def skeleton(self, levels: int) -> GbdSkeleton:
        return build_from_permutations(self.permutation_system(levels))

    def cofinality_certificate(self) -> CofinalityCertificate:
        return CofinalityCertificate(True, "one summand per level", gap=1)

    def order_certificate(self) -> OrderCertificate:
        if self.kind == "growing":
            return OrderCertificate(False, "edges at level n lie in one (n+1)-cycle of F", min_order=lambda n: n + 1)
        bound = self.size if self.kind == "constant" else 1
        return OrderCertificate(True, f"every block permutation has all orbits of size {bound}", bound=bound)

    def injective_maps(self, which: str) -> bool:
        return True

    def series_certificate(self, N: int) -> SeriesCertificate:
        if self.kind == "growing":
            return SeriesCertificate(N, True, False,
                                     f"beta_{N} of an (n+1)-cycle is 0 whenever n+1 does not divide {N}, which holds for all n >= {N}")
        length = self.size if self.kind == "constant" else 1
        if N % length == 0:
            return SeriesCertificate(N, False, True, f"every orbit has size {length}, which divides {N}, so beta_{N} = 1",
                                     tail_zero_from=0)
        return SeriesCertificate(N, True, False, f"every orbit has size {length}, which does not divide {N}, so beta_{N} = 0")

    def describe(self) -> dict:
        return {"family": self.name, "size": self.size}


class ExplicitPermutationFamily(Family):
    """A finite permutation system with no closed form; only evidence is possible."""

    unit_cycles = True
    name = "permutation-explicit"

    def __init__(self, system: PermutationSystem):
        self.system = system

    def permutation_system(self, levels: int) -> PermutationSystem:
        if levels > self.system.levels:
            raise ValueError(f"only {self.system.levels} levels are known")
        return self.system.truncate(levels)

    def data(self, levels: int) -> LevelData:
        return self.permutation_system(levels).data()

    def skeleton(self, levels: int) -> GbdSkeleton:
        return build_from_permutations(self.permutation_system(levels))

    @property
    def max_levels(self) -> int:
        return self.system.levels

