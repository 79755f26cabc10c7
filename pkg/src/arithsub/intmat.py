"""Exact arbitrary-precision integer matrices.

Incidence matrices of morphisms, a Wielandt-exponent primitivity test, exact
row-vector powers 1*M^k, and the minimal integer linear recurrence satisfied
by the sequence (1*M^k)_k.  Everything is computed over Python integers and
``fractions.Fraction`` so that no gcd is ever corrupted by overflow.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import DomainError, InvariantError


@dataclass(frozen=True)
class IntMatrix:
    """Square matrix of exact integers, stored row-major."""

    entries: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        d = len(self.entries)
        if d == 0 or any(len(row) != d for row in self.entries):
            raise DomainError("matrix must be square and nonempty")

    @classmethod
    def from_rows(cls, rows) -> "IntMatrix":
        return cls(tuple(tuple(int(x) for x in row) for row in rows))

    @classmethod
    def identity(cls, d: int) -> "IntMatrix":
        return cls(tuple(tuple(1 if i == j else 0 for j in range(d)) for i in range(d)))

    @property
    def dim(self) -> int:
        return len(self.entries)

    @property
    def is_nonnegative(self) -> bool:
        return all(x >= 0 for row in self.entries for x in row)

    def __mul__(self, other: "IntMatrix") -> "IntMatrix":
        if other.dim != self.dim:
            raise DomainError("dimension mismatch")
        d = self.dim
        cols = tuple(zip(*other.entries))
        return IntMatrix(
            tuple(
                tuple(sum(row[k] * col[k] for k in range(d)) for col in cols)
                for row in self.entries
            )
        )

    def power(self, k: int) -> "IntMatrix":
        if k < 0:
            raise DomainError("matrix power needs k >= 0")
        result = IntMatrix.identity(self.dim)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base if k > 1 else base
            k >>= 1
        return result

    def column_sums(self) -> tuple[int, ...]:
        return tuple(sum(col) for col in zip(*self.entries))

    def trace(self) -> int:
        return sum(self.entries[i][i] for i in range(self.dim))

    def determinant(self) -> int:
        # Bareiss fraction-free elimination: exact for integer matrices.
        a = [list(row) for row in self.entries]
        d = self.dim
        sign = 1
        prev = 1
        for k in range(d - 1):
            if a[k][k] == 0:
                for i in range(k + 1, d):
                    if a[i][k] != 0:
                        a[k], a[i] = a[i], a[k]
                        sign = -sign
                        break
                else:
                    return 0
            for i in range(k + 1, d):
                for j in range(k + 1, d):
                    a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
            prev = a[k][k]
        return sign * a[d - 1][d - 1]


@dataclass(frozen=True)
class RecurrenceData:
    """Minimal relation 1*M^(r+1) = sum_i coeffs[i] * 1*M^i with {1*M^i}_{i<=r} free."""

    rank: int
    coeffs: tuple[int, ...]


def incidence(m) -> IntMatrix:
    """Incidence matrix of a morphism: entry (i, j) counts letter i in the image of j."""
    if not m.is_endomorphism:
        raise DomainError("incidence matrix is defined for endomorphisms")
    d = len(m.domain)
    rows = [[0] * d for _ in range(d)]
    for j, img in enumerate(m.images):
        for x in img:
            rows[x][j] += 1
    return IntMatrix.from_rows(rows)


def row_vector_times(v: tuple[int, ...], matrix: IntMatrix) -> tuple[int, ...]:
    d = matrix.dim
    if len(v) != d:
        raise DomainError("dimension mismatch")
    return tuple(sum(v[i] * matrix.entries[i][j] for i in range(d)) for j in range(d))


def row_power(matrix: IntMatrix, k: int) -> tuple[int, ...]:
    """Exact value of (1,...,1) * M^k; entry a is |sigma^k(a)| for an incidence matrix."""
    if k < 0:
        raise DomainError("row power needs k >= 0")
    d = matrix.dim
    if k > 64:
        return row_vector_times((1,) * d, matrix.power(k))
    v = (1,) * d
    for _ in range(k):
        v = row_vector_times(v, matrix)
    return v


def is_primitive(matrix: IntMatrix) -> bool:
    """Some power of M is entrywise positive.

    Checked at the Wielandt exponent (d-1)^2 + 1 on the 0/1 support pattern,
    which is enough: the support of a product of nonnegative matrices is the
    boolean product of the supports.
    """
    if not matrix.is_nonnegative:
        raise DomainError("primitivity is defined for nonnegative matrices")
    d = matrix.dim
    exponent = (d - 1) ** 2 + 1
    support = [[1 if x > 0 else 0 for x in row] for row in matrix.entries]

    def bool_mul(a, b):
        return [
            [1 if any(a[i][k] and b[k][j] for k in range(d)) else 0 for j in range(d)]
            for i in range(d)
        ]

    result = [[1 if i == j else 0 for j in range(d)] for i in range(d)]
    base = support
    k = exponent
    while k:
        if k & 1:
            result = bool_mul(result, base)
        base = bool_mul(base, base) if k > 1 else base
        k >>= 1
    return all(all(row) for row in result)


def _solve_exact(rows, target):
    """Solve sum_i x_i * rows[i] = target exactly over the rationals.

    The system is consistent and has a unique solution by construction
    (the rows are linearly independent and target lies in their span).
    """
    n = len(rows)
    d = len(target)
    aug = [[Fraction(rows[i][c]) for i in range(n)] + [Fraction(target[c])] for c in range(d)]
    pivots = []
    row_at = 0
    for col in range(n):
        pivot = next((r for r in range(row_at, d) if aug[r][col] != 0), None)
        if pivot is None:
            raise InvariantError("recurrence system unexpectedly singular")
        aug[row_at], aug[pivot] = aug[pivot], aug[row_at]
        pv = aug[row_at][col]
        aug[row_at] = [x / pv for x in aug[row_at]]
        for r in range(d):
            if r != row_at and aug[r][col] != 0:
                factor = aug[r][col]
                aug[r] = [x - factor * y for x, y in zip(aug[r], aug[row_at])]
        pivots.append(col)
        row_at += 1
    for r in range(row_at, d):
        if aug[r][n] != 0:
            raise InvariantError("recurrence system inconsistent")
    return [aug[i][n] for i in range(n)]


def minimal_recurrence(matrix: IntMatrix) -> RecurrenceData:
    """Minimal linear recurrence of the row powers 1*M^k.

    r is the largest index with {1, 1M, ..., 1M^r} free over the rationals;
    the returned coefficients give 1M^(r+1) = sum a_i 1M^i.  They are the
    (negated) non-leading coefficients of the characteristic polynomial of M
    restricted to the span, hence exactly integral; non-integrality aborts.
    """
    d = matrix.dim
    powers = [(1,) * d]
    # echelon copy used only for rank decisions
    basis: list[list[Fraction]] = []

    def reduce(vec):
        v = [Fraction(x) for x in vec]
        for b in basis:
            lead = next(i for i, x in enumerate(b) if x != 0)
            if v[lead] != 0:
                factor = v[lead] / b[lead]
                v = [x - factor * y for x, y in zip(v, b)]
        return v

    residual = reduce(powers[0])
    basis.append(residual)
    while True:
        nxt = row_vector_times(powers[-1], matrix)
        residual = reduce(nxt)
        if all(x == 0 for x in residual):
            break
        basis.append(residual)
        powers.append(nxt)
        if len(powers) > d:
            raise InvariantError("rank exceeded the ambient dimension")
    r = len(powers) - 1
    solution = _solve_exact(powers, nxt)
    coeffs = []
    for x in solution:
        if x.denominator != 1:
            raise InvariantError(f"non-integral recurrence coefficient {x}")
        coeffs.append(int(x))
    return RecurrenceData(rank=r, coeffs=tuple(coeffs))
