"""Exact Laurent polynomials in ``z`` and sparse matrices over them."""
from __future__ import annotations

from fractions import Fraction
from typing import Hashable, Iterable, Mapping, Sequence


class LaurentPoly:
    """Finitely supported map exponent -> nonzero rational coefficient."""

    __slots__ = ("terms",)

    def __init__(self, terms: Mapping[int, object] | None = None):
        clean = {}
        for k, c in (terms or {}).items():
            c = Fraction(c)
            if c:
                clean[int(k)] = c
        self.terms: dict[int, Fraction] = clean

    @classmethod
    def monomial(cls, k: int, coeff=1) -> "LaurentPoly":
        return cls({k: coeff})

    @classmethod
    def constant(cls, c) -> "LaurentPoly":
        return cls({0: c})

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = LaurentPoly.constant(other)
        return isinstance(other, LaurentPoly) and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __repr__(self) -> str:
        if not self.terms:
            return "0"
        return " + ".join(f"{c}*z^{k}" for k, c in sorted(self.terms.items()))

    def __add__(self, other: "LaurentPoly") -> "LaurentPoly":
        out = dict(self.terms)
        for k, c in other.terms.items():
            out[k] = out.get(k, 0) + c
        return LaurentPoly(out)

    def __neg__(self) -> "LaurentPoly":
        return LaurentPoly({k: -c for k, c in self.terms.items()})

    def __sub__(self, other: "LaurentPoly") -> "LaurentPoly":
        return self + (-other)

    def __mul__(self, other) -> "LaurentPoly":
        if not isinstance(other, LaurentPoly):
            return LaurentPoly({k: c * other for k, c in self.terms.items()})
        out: dict[int, Fraction] = {}
        for k1, c1 in self.terms.items():
            for k2, c2 in other.terms.items():
                out[k1 + k2] = out.get(k1 + k2, 0) + c1 * c2
        return LaurentPoly(out)

    __rmul__ = __mul__

    def adjoint(self) -> "LaurentPoly":
        """``z -> z^{-1}``; coefficients are real so conjugation leaves them alone."""
        return LaurentPoly({-k: c for k, c in self.terms.items()})

    def is_monomial(self) -> bool:
        return len(self.terms) == 1

    def lowest(self) -> int:
        return min(self.terms)

    def highest(self) -> int:
        return max(self.terms)

    def shift(self, k: int) -> "LaurentPoly":
        return LaurentPoly({e + k: c for e, c in self.terms.items()})

    def divexact(self, other: "LaurentPoly") -> "LaurentPoly":
        """Exact quotient; raises if ``other`` does not divide ``self``."""
        if not other:
            raise ZeroDivisionError("division by the zero polynomial")
        if not self:
            return LaurentPoly()
        rem = dict(self.terms)
        top, lead = other.highest(), other.terms[other.highest()]
        quot: dict[int, Fraction] = {}
        while rem:
            k = max(rem)
            if k - top < self.lowest() - other.lowest():
                raise ArithmeticError("polynomial division is not exact")
            q = rem[k] / lead
            e = k - top
            quot[e] = q
            for j, c in other.terms.items():
                val = rem.get(j + e, 0) - q * c
                if val:
                    rem[j + e] = val
                else:
                    rem.pop(j + e, None)
        return LaurentPoly(quot)

    def __call__(self, z: complex) -> complex:
        return sum(float(c) * z ** k for k, c in self.terms.items())


ONE = LaurentPoly.constant(1)
Z = LaurentPoly.monomial(1)


class LaurentMatrix:
    """Sparse matrix over Laurent polynomials, indexed by arbitrary hashable keys.

    ``entries`` maps ``(row, col)`` to a nonzero :class:`LaurentPoly`.
    """

    __slots__ = ("entries", "_rows")

    def __init__(self, entries: Mapping[tuple[Hashable, Hashable], LaurentPoly] | None = None):
        self.entries = {k: v for k, v in (entries or {}).items() if v}
        self._rows = None

    @classmethod
    def unit(cls, row, col, poly: LaurentPoly = ONE) -> "LaurentMatrix":
        return cls({(row, col): poly})

    @classmethod
    def diagonal(cls, keys: Iterable, poly: LaurentPoly = ONE) -> "LaurentMatrix":
        return cls({(k, k): poly for k in keys})

    def __bool__(self) -> bool:
        return bool(self.entries)

    def __eq__(self, other) -> bool:
        return isinstance(other, LaurentMatrix) and self.entries == other.entries

    __hash__ = None  # type: ignore[assignment]

    def __repr__(self) -> str:
        return f"LaurentMatrix({len(self.entries)} nonzero entries)"

    def __getitem__(self, key) -> LaurentPoly:
        return self.entries.get(key, LaurentPoly())

    def __add__(self, other: "LaurentMatrix") -> "LaurentMatrix":
        out = dict(self.entries)
        for k, v in other.entries.items():
            out[k] = out[k] + v if k in out else v
        return LaurentMatrix(out)

    def __neg__(self) -> "LaurentMatrix":
        return LaurentMatrix({k: -v for k, v in self.entries.items()})

    def __sub__(self, other: "LaurentMatrix") -> "LaurentMatrix":
        return self + (-other)

    def scale(self, poly) -> "LaurentMatrix":
        return LaurentMatrix({k: v * poly for k, v in self.entries.items()})

    def rows(self) -> dict:
        if self._rows is None:
            rows: dict = {}
            for (r, c), v in self.entries.items():
                rows.setdefault(r, []).append((c, v))
            self._rows = rows
        return self._rows

    def __matmul__(self, other: "LaurentMatrix") -> "LaurentMatrix":
        right = other.rows()
        out: dict = {}
        for (r, mid), v in self.entries.items():
            for c, w in right.get(mid, ()):
                key = (r, c)
                out[key] = out[key] + v * w if key in out else v * w
        return LaurentMatrix(out)

    def adjoint(self) -> "LaurentMatrix":
        return LaurentMatrix({(c, r): v.adjoint() for (r, c), v in self.entries.items()})

    def restrict(self, keys: Iterable) -> "LaurentMatrix":
        keep = set(keys)
        return LaurentMatrix({(r, c): v for (r, c), v in self.entries.items() if r in keep and c in keep})

    def trace_constant(self) -> Fraction:
        return sum((v.terms.get(0, Fraction(0)) for (r, c), v in self.entries.items() if r == c), Fraction(0))

    def dense(self, keys: Sequence) -> list[list[LaurentPoly]]:
        pos = {k: i for i, k in enumerate(keys)}
        out = [[LaurentPoly() for _ in keys] for _ in keys]
        for (r, c), v in self.entries.items():
            if r in pos and c in pos:
                out[pos[r]][pos[c]] = v
        return out

    @classmethod
    def from_dense(cls, rows: Sequence[Sequence[LaurentPoly]], keys: Sequence | None = None) -> "LaurentMatrix":
        keys = list(range(len(rows))) if keys is None else list(keys)
        return cls({(keys[i], keys[j]): v for i, row in enumerate(rows) for j, v in enumerate(row)})

    def power(self, k: int, identity_keys: Iterable) -> "LaurentMatrix":
        """``M^k`` with ``M^{-k} = (M^*)^k``; only meaningful for unitaries when ``k < 0``."""
        base = self if k >= 0 else self.adjoint()
        out = LaurentMatrix.diagonal(identity_keys)
        for _ in range(abs(k)):
            out = out @ base
        return out


def _permutation_sign(perm: Sequence[int]) -> int:
    sign, seen = 1, [False] * len(perm)
    for start in range(len(perm)):
        if seen[start]:
            continue
        length, cur = 0, start
        while not seen[cur]:
            seen[cur] = True
            cur = perm[cur]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign


def determinant(rows: Sequence[Sequence[LaurentPoly]]) -> LaurentPoly:
    """Exact determinant; generalised permutation matrices take a fast path."""
    n = len(rows)
    if n == 0:
        return ONE
    support = [[j for j, v in enumerate(row) if v] for row in rows]
    if all(len(s) == 1 for s in support):
        perm = [s[0] for s in support]
        if len(set(perm)) < n:
            return LaurentPoly()
        out = LaurentPoly.constant(_permutation_sign(perm))
        for i, j in enumerate(perm):
            out = out * rows[i][j]
        return out
    # fraction-free elimination over the Laurent ring
    m = [list(row) for row in rows]
    sign, prev = 1, ONE
    for k in range(n - 1):
        if not m[k][k]:
            swap = next((r for r in range(k + 1, n) if m[r][k]), None)
            if swap is None:
                return LaurentPoly()
            m[k], m[swap] = m[swap], m[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]).divexact(prev)
        prev = m[k][k]
    return m[n - 1][n - 1] * sign


class WindingError(ArithmeticError):
    pass


def winding(rows: Sequence[Sequence[LaurentPoly]]) -> int:
    """Exponent ``w`` of a determinant of the form ``+-z^w``."""
    det = determinant(rows)
    if not det.is_monomial():
        raise WindingError(f"determinant {det!r} is not a monomial")
    (w, c), = det.terms.items()
    if abs(c) != 1:
        raise WindingError(f"determinant {det!r} is not a unit monomial")
    return w


def standard_permutation_mapping(sigma: Sequence[int], f: LaurentMatrix) -> LaurentMatrix:
    """``psi_sigma(f)`` for a matrix ``f`` over ``C(T)`` with any index keys.

    ``psi_sigma`` sends ``z`` to ``W = sum_j z e_{j, sigma(j)}``; the image of
    ``f = sum_k C_k z^k`` is ``sum_k C_k (x) W^k`` indexed by pairs ``(row, letter)``.
    """
    m = len(sigma)
    letters = range(m)
    w = LaurentMatrix({(j, sigma[j]): Z for j in letters})
    powers: dict[int, LaurentMatrix] = {}
    out: dict = {}
    for (r, c), poly in f.entries.items():
        for k, coeff in poly.terms.items():
            if k not in powers:
                powers[k] = w.power(k, letters)
            for (a, b), v in powers[k].entries.items():
                key = ((r, a), (c, b))
                term = v * coeff
                out[key] = out[key] + term if key in out else term
    return LaurentMatrix(out)
