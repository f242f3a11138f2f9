"""Level data ``(c_n, A_n, B_n, T_n)`` of a gbd, compatibility checks and telescoping.

Matrices are tuples of integer rows.  ``A[n]`` and ``B[n]`` have shape
``c[n+1] x c[n]``; entry ``(i, j)`` (0-based here, 1-based in the cycle
labels) counts blue edges between cycle ``j`` at level ``n`` and cycle ``i``
at level ``n + 1``.  ``T[n]`` is stored as the tuple of diagonal entries,
the cycle lengths at level ``n``.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .results import ValidationReport, Violation
from .skeleton import GbdSkeleton

Matrix = tuple[tuple[int, ...], ...]


# -- small exact matrix helpers


def as_matrix(rows: Sequence[Sequence[int]]) -> Matrix:
    return tuple(tuple(int(x) for x in row) for row in rows)


def identity(n: int) -> Matrix:
    return tuple(tuple(int(i == j) for j in range(n)) for i in range(n))


def matmul(a: Matrix, b: Matrix) -> Matrix:
    cols = list(zip(*b))
    return tuple(tuple(sum(x * y for x, y in zip(row, col)) for col in cols) for row in a)


def matvec(a: Matrix, v: Sequence[int]) -> tuple[int, ...]:
    return tuple(sum(x * y for x, y in zip(row, v)) for row in a)


def shape(a: Matrix) -> tuple[int, int]:
    return len(a), (len(a[0]) if a else 0)


def is_proper(a: Matrix) -> bool:
    """Nonnegative with no zero row and no zero column."""
    if any(x < 0 for row in a for x in row):
        return False
    return all(any(row) for row in a) and all(any(col) for col in zip(*a))


def is_positive(a: Matrix) -> bool:
    return all(x > 0 for row in a for x in row)


def determinant(a: Matrix) -> int:
    """Exact integer determinant by fraction-free elimination."""
    n = len(a)
    if n == 0:
        return 1
    m = [list(row) for row in a]
    sign, prev = 1, 1
    for k in range(n - 1):
        if m[k][k] == 0:
            swap = next((r for r in range(k + 1, n) if m[r][k] != 0), None)
            if swap is None:
                return 0
            m[k], m[swap] = m[swap], m[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
        prev = m[k][k]
    return sign * m[n - 1][n - 1]


# -- level data


class DataExtractionError(ValueError):
    """Edge counts are not constant along a cycle, so the skeleton has no level data."""

    def __init__(self, message: str, witnesses: list):
        super().__init__(message)
        self.witnesses = witnesses


class IncompatibleDataError(ValueError):
    def __init__(self, report: ValidationReport):
        super().__init__("; ".join(v.message for v in report.violations))
        self.report = report


@dataclass(frozen=True)
class LevelData:
    c: tuple[int, ...]
    A: tuple[Matrix, ...]
    B: tuple[Matrix, ...]
    T: tuple[tuple[int, ...], ...]

    def __init__(self, c, A, B, T):
        object.__setattr__(self, "c", tuple(int(x) for x in c))
        object.__setattr__(self, "A", tuple(as_matrix(m) for m in A))
        object.__setattr__(self, "B", tuple(as_matrix(m) for m in B))
        object.__setattr__(self, "T", tuple(tuple(int(x) for x in t) for t in T))
        if not self.c:
            raise ValueError("level data needs at least one level")
        if len(self.A) != len(self.c) - 1 or len(self.B) != len(self.c) - 1:
            raise ValueError("need one A and one B matrix between consecutive levels")
        if len(self.T) != len(self.c):
            raise ValueError("need one T per level")
        for n, t in enumerate(self.T):
            if len(t) != self.c[n]:
                raise ValueError(f"T_{n} has {len(t)} entries, expected {self.c[n]}")
        for n in range(len(self.A)):
            want = (self.c[n + 1], self.c[n])
            if shape(self.A[n]) != want or shape(self.B[n]) != want:
                raise ValueError(f"A_{n} and B_{n} must have shape {want}")

    @property
    def levels(self) -> int:
        return len(self.c)

    @property
    def depth(self) -> int:
        return len(self.c) - 1

    def T_matrix(self, n: int) -> Matrix:
        t = self.T[n]
        return tuple(tuple(t[i] if i == j else 0 for j in range(len(t))) for i in range(len(t)))

    def between(self, m: int, n: int, which: str = "A") -> Matrix:
        """``A_{m,n} = A_{m-1} ... A_n`` (identity when ``m == n``); ``which`` picks A or B."""
        if not 0 <= n <= m <= self.depth:
            raise IndexError(f"levels {n}..{m} outside 0..{self.depth}")
        maps = self.A if which == "A" else self.B
        out = identity(self.c[n])
        for k in range(n, m):
            out = matmul(maps[k], out)
        return out

    def truncate(self, levels: int) -> "LevelData":
        if not 1 <= levels <= self.levels:
            raise IndexError(f"cannot keep {levels} of {self.levels} levels")
        return LevelData(self.c[:levels], self.A[:levels - 1], self.B[:levels - 1], self.T[:levels])

    def to_dict(self) -> dict:
        return {"c": list(self.c), "A": [list(map(list, m)) for m in self.A],
                "B": [list(map(list, m)) for m in self.B], "T": [list(t) for t in self.T]}


def extract_data(skel: GbdSkeleton, up_to_level: int | None = None) -> LevelData:
    """Read ``(c, A, B, T)`` off a skeleton, up to ``up_to_level`` (default: its depth)."""
    top = skel.depth if up_to_level is None else up_to_level
    if not 0 <= top <= skel.depth:
        raise IndexError(f"level {top} beyond depth {skel.depth}")
    c = [skel.cycle_count(n) for n in range(top + 1)]
    T = [list(skel.levels[n]) for n in range(top + 1)]
    A, B, bad = [], [], []
    for n in range(top):
        a = [[0] * c[n] for _ in range(c[n + 1])]
        b = [[0] * c[n] for _ in range(c[n + 1])]
        for i in range(c[n + 1]):
            for j in range(c[n]):
                ins = {sum(1 for e in skel.edges_into(v) if skel.edge(e).source[:2] == (n + 1, i + 1))
                       for v in skel.cycle_vertices(n, j + 1)}
                outs = {sum(1 for e in skel.edges_out_of(w) if skel.edge(e).range[:2] == (n, j + 1))
                        for w in skel.cycle_vertices(n + 1, i + 1)}
                if len(ins) != 1 or len(outs) != 1:
                    bad.append((n, j + 1, i + 1, sorted(ins), sorted(outs)))
                    continue
                a[i][j], b[i][j] = ins.pop(), outs.pop()
        A.append(a)
        B.append(b)
    if bad:
        raise DataExtractionError(
            "edge counts vary along a cycle: " + ", ".join(
                f"block ({n},{j})-({n + 1},{i}) in-counts {ins} out-counts {outs}" for n, j, i, ins, outs in bad),
            bad)
    return LevelData(c, A, B, T)


def check_compatibility(data: LevelData) -> ValidationReport:
    """Properness, equal zero patterns of A and B, and ``A_n T_n = T_{n+1} B_n``."""
    out: list[Violation] = []
    for n in range(data.depth):
        a, b = data.A[n], data.B[n]
        for name, m in (("A", a), ("B", b)):
            if not is_proper(m):
                out.append(Violation("improper", f"{name}_{n} is not proper", (n, name)))
        for i in range(data.c[n + 1]):
            for j in range(data.c[n]):
                if (a[i][j] == 0) != (b[i][j] == 0):
                    out.append(Violation("zero-pattern", f"A_{n} and B_{n} disagree on zero entry ({i + 1},{j + 1})", (n, i + 1, j + 1)))
                if a[i][j] * data.T[n][j] != data.T[n + 1][i] * b[i][j]:
                    out.append(Violation("relation",
                                         f"A_{n}T_{n} != T_{n + 1}B_{n} at ({i + 1},{j + 1}): "
                                         f"{a[i][j]}*{data.T[n][j]} != {data.T[n + 1][i]}*{b[i][j]}",
                                         (n, i + 1, j + 1)))
    for n, t in enumerate(data.T):
        if any(x < 1 for x in t):
            out.append(Violation("cycle-length", f"T_{n} has a nonpositive entry", (n,)))
    return ValidationReport(tuple(out))


def telescope(data: LevelData, indices: Sequence[int]) -> LevelData:
    """Keep levels ``indices`` and compose the maps in between."""
    idx = [int(x) for x in indices]
    if not idx:
        raise IndexError("empty index sequence")
    if any(b <= a for a, b in zip(idx, idx[1:])):
        raise ValueError("indices must be strictly increasing")
    if idx[0] < 0 or idx[-1] > data.depth:
        raise IndexError(f"indices must lie in 0..{data.depth}")
    out = LevelData([data.c[k] for k in idx],
                    [data.between(b, a, "A") for a, b in zip(idx, idx[1:])],
                    [data.between(b, a, "B") for a, b in zip(idx, idx[1:])],
                    [data.T[k] for k in idx])
    for n in range(out.depth):
        assert matmul(out.A[n], out.T_matrix(n)) == matmul(out.T_matrix(n + 1), out.B[n]), \
            "telescoping broke the compatibility relation"
    return out


@dataclass(frozen=True)
class Telescope:
    base: LevelData
    indices: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "indices", tuple(int(x) for x in self.indices))

    @property
    def data(self) -> LevelData:
        return telescope(self.base, self.indices)


@dataclass(frozen=True)
class NotFoundWithinHorizon:
    step: int
    from_level: int
    searched_to: int
    reason: str


def find_lpf_subsequence(data: LevelData, horizon: int = 64,
                         steps: int | None = None) -> Telescope | NotFoundWithinHorizon:
    """Greedy choice of levels ``l(0) = 0 < l(1) < ...`` with every entry of ``A_{l(n), l(n-1)}`` at least ``n``.

    Each step scans at most ``horizon`` levels forward.  With ``steps`` given,
    exactly that many steps are required; otherwise the search runs until the
    data is used up.  Failure is returned as :class:`NotFoundWithinHorizon`.
    """
    chosen = [0]
    step = 1
    while steps is None or step <= steps:
        start = chosen[-1]
        if start == data.depth:
            break
        product = identity(data.c[start])
        found = None
        limit = min(start + horizon, data.depth)
        for m in range(start + 1, limit + 1):
            product = matmul(data.A[m - 1], product)
            if min(x for row in product for x in row) >= step:
                found = m
                break
        if found is None:
            if limit == data.depth and start + horizon > data.depth and steps is None and step > 1:
                break
            reason = "horizon exhausted" if limit == start + horizon else "data exhausted"
            return NotFoundWithinHorizon(step, start, limit, reason)
        chosen.append(found)
        step += 1
    if len(chosen) < 2 or (steps is not None and len(chosen) - 1 < steps):
        return NotFoundWithinHorizon(len(chosen), chosen[-1], data.depth, "data exhausted")
    return Telescope(data, tuple(chosen))
