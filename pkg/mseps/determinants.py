"""Exact evaluation of the Hankel, extended-Hankel and index-bordered determinants.

The three families, for a u-sequence (often a difference sequence Δ^i S):

- ``hankel``:      entry (r, c) = u_(n+r+c)
- ``extended_h``:  row r = (Δ^(rm) u_n, ..., Δ^(rm) u_(n+k-1))
- ``phi``:         first row (n, ..., n+k-1), second row u, then Δ^(rm) u for r = 1..k-2

Conventions: size 0 gives 1 and negative sizes give 0.

Rational determinants use fraction-free (Bareiss) elimination on an integer
matrix obtained by clearing row denominators; float determinants use the mpmath
LU of the mode's private context.
"""

from __future__ import annotations

import logging
import math
from fractions import Fraction
from functools import lru_cache

from .constants import COFACTOR_MAX_SIZE
from .errors import IndexOutOfRange
from .imports import Dict, List, Sequence, Tuple
from .numerics import RATIONAL, Scalar, ScalarMode, SequencePrefix, difference_sequence

logger = logging.getLogger(__name__)

Matrix = List[List[Scalar]]


def _bareiss_integer(rows: List[List[int]]) -> int:
    a = [row[:] for row in rows]
    size = len(a)
    sign = 1
    prev = 1
    for p in range(size - 1):
        if a[p][p] == 0:
            swap = next((r for r in range(p + 1, size) if a[r][p] != 0), None)
            if swap is None:
                return 0
            a[p], a[swap] = a[swap], a[p]
            sign = -sign
        for i in range(p + 1, size):
            for j in range(p + 1, size):
                a[i][j] = (a[i][j] * a[p][p] - a[i][p] * a[p][j]) // prev
        prev = a[p][p]
    return sign * a[-1][-1]


def bareiss_determinant(matrix: Sequence[Sequence[Scalar]]) -> Fraction:
    """Exact determinant of a rational matrix."""
    if not matrix:
        return Fraction(1)
    scale = 1
    int_rows: List[List[int]] = []
    for row in matrix:
        fracs = [Fraction(x) for x in row]
        lcm = 1
        for f in fracs:
            lcm = lcm * f.denominator // math.gcd(lcm, f.denominator)
        int_rows.append([int(f * lcm) for f in fracs])
        scale *= lcm
    return Fraction(_bareiss_integer(int_rows), scale)


def cofactor_determinant(matrix: Sequence[Sequence[Scalar]]) -> Scalar:
    """Laplace expansion along the first row; only for small self-checks."""
    size = len(matrix)
    if size > COFACTOR_MAX_SIZE:
        raise ValueError(f"cofactor expansion limited to size {COFACTOR_MAX_SIZE}, got {size}")
    if size == 0:
        return 1
    if size == 1:
        return matrix[0][0]
    total = 0
    for col in range(size):
        minor = [list(row[:col]) + list(row[col + 1 :]) for row in matrix[1:]]
        term = matrix[0][col] * cofactor_determinant(minor)
        total = total - term if col % 2 else total + term
    return total


def determinant_scale(matrix: Sequence[Sequence[Scalar]], mode: ScalarMode = RATIONAL) -> Scalar:
    """Product of the row 2-norms (Hadamard bound on |det|).

    Exact zero tests need no scale, so rational mode returns 1.
    """
    if mode.is_rational or not matrix:
        return mode.one()
    ctx = mode.context
    return ctx.fprod(ctx.norm([mode.coerce(x) for x in row], 2) for row in matrix)


def determinant(matrix: Sequence[Sequence[Scalar]], mode: ScalarMode = RATIONAL) -> Scalar:
    if not matrix:
        return mode.one()
    if mode.is_rational:
        return bareiss_determinant(matrix)
    ctx = mode.context
    return ctx.det(ctx.matrix([[mode.coerce(x) for x in row] for row in matrix]))


@lru_cache(maxsize=256)
def _difference_rows(u: SequencePrefix) -> Tuple[Tuple[Scalar, ...], ...]:
    """Δ^r u for r = 0..N; row r has N - r + 1 entries."""
    rows = [tuple(u.terms)]
    while len(rows[-1]) > 1:
        prev = rows[-1]
        rows.append(tuple(prev[j + 1] - prev[j] for j in range(len(prev) - 1)))
    logger.debug("difference table filled for %r (%d rows)", u.label, len(rows))
    return tuple(rows)


def _delta(u: SequencePrefix, order: int, start: int) -> Scalar:
    rows = _difference_rows(u)
    if order >= len(rows) or start >= len(rows[order]):
        raise IndexOutOfRange(f"Δ^{order} u_{start} outside prefix u_0..u_{u.N}")
    return rows[order][start]


def hankel_matrix(u: SequencePrefix, n: int, k: int) -> Matrix:
    if n + 2 * k - 2 > u.N:
        raise IndexOutOfRange(f"Hankel k={k} at n={n} needs u_{n + 2 * k - 2}, prefix ends at u_{u.N}")
    return [[u.terms[n + r + c] for c in range(k)] for r in range(k)]


def extended_h_matrix(u: SequencePrefix, n: int, k: int, m: int) -> Matrix:
    if n + (k - 1) * (m + 1) > u.N:
        raise IndexOutOfRange(f"H_{k} (m={m}) at n={n} exceeds prefix u_0..u_{u.N}")
    return [[_delta(u, r * m, n + c) for c in range(k)] for r in range(k)]


def phi_matrix(u: SequencePrefix, n: int, k: int, m: int) -> Matrix:
    if n + (k - 2) * m + (k - 1) > u.N:
        raise IndexOutOfRange(f"Φ_{k} (m={m}) at n={n} exceeds prefix u_0..u_{u.N}")
    rows: Matrix = [[u.mode.coerce(n + c) for c in range(k)]]
    rows.append([u.terms[n + c] for c in range(k)])
    rows.extend([_delta(u, r * m, n + c) for c in range(k)] for r in range(1, k - 1))
    return rows


def hankel(u: SequencePrefix, n: int, k: int) -> Scalar:
    """𝓗_k(u_n).

    Examples
    --------
    >>> hankel(SequencePrefix.from_values([1, "1/2", "5/6"]), 0, 2)
    Fraction(7, 12)
    """
    if k < 0:
        return u.mode.zero()
    if k == 0:
        return u.mode.one()
    return determinant(hankel_matrix(u, n, k), u.mode)


def extended_h(u: SequencePrefix, n: int, k: int, m: int) -> Scalar:
    if k < 0:
        return u.mode.zero()
    if k == 0:
        return u.mode.one()
    return determinant(extended_h_matrix(u, n, k, m), u.mode)


def phi(u: SequencePrefix, n: int, k: int, m: int) -> Scalar:
    if k < 0:
        return u.mode.zero()
    if k == 0:
        return u.mode.one()
    if k == 1:
        return u.mode.coerce(n)
    return determinant(phi_matrix(u, n, k, m), u.mode)


def hankel_difference_forms(u: SequencePrefix, n: int, k: int) -> Tuple[Scalar, Scalar, Scalar]:
    """𝓗_k(u_n) evaluated plain, with rows differenced, and with rows and columns differenced."""
    plain = hankel_matrix(u, n, k)
    if k == 0:
        one = u.mode.one()
        return one, one, one
    rows_diffed = [plain[0]] + [[_delta(u, 1, n + r - 1 + c) for c in range(k)] for r in range(1, k)]
    both: Matrix = []
    for r in range(k):
        base = u.terms[n] if r == 0 else _delta(u, 1, n + r - 1)
        order = 1 if r == 0 else 2
        start = n if r == 0 else n + r - 1
        both.append([base] + [_delta(u, order, start + c - 1) for c in range(1, k)])
    return (
        determinant(plain, u.mode),
        determinant(rows_diffed, u.mode),
        determinant(both, u.mode),
    )


def lattice_position(kappa: int, m: int) -> Tuple[int, int]:
    """Split a lattice index κ into (k, i) with κ = (m+1)(k-1) + i and 1 <= i <= m+1."""
    k = (kappa - 1) // (m + 1) + 1
    return k, kappa - (m + 1) * (k - 1)


class DeterminantOracle:
    """Determinants of one sequence S and its difference sequences, with caching.

    ``H(k, i, n)`` is H_k(Δ^i S_n) at the oracle's step ``m``; ``F``/``G`` are the
    bilinear variables whose ratio G/F is the ε entry at a lattice index. Every
    cached determinant keeps its Hadamard bound, read back through the ``*_scale``
    accessors when a denominator is tested for zero.
    """

    def __init__(self, seq: SequencePrefix, m: int = 1) -> None:
        if m < 1:
            raise ValueError(f"m must be >= 1, got {m}")
        self.seq = seq
        self.m = m
        self.mode = seq.mode
        self._diffs: Dict[int, SequencePrefix] = {0: seq}
        self._values: Dict[Tuple[str, int, int, int], Tuple[Scalar, Scalar]] = {}

    def diff(self, i: int) -> SequencePrefix:
        if i not in self._diffs:
            self._diffs[i] = difference_sequence(self.seq, i)
        return self._diffs[i]

    def _matrix(self, family: str, k: int, i: int, n: int) -> Matrix:
        u = self.diff(i)
        if family == "H":
            return extended_h_matrix(u, n, k, self.m)
        if family == "Phi":
            return [[self.mode.coerce(n)]] if k == 1 else phi_matrix(u, n, k, self.m)
        return hankel_matrix(u, n, k)

    def _cached(self, family: str, k: int, i: int, n: int) -> Tuple[Scalar, Scalar]:
        key = (family, k, i, n)
        if key not in self._values:
            if k <= 0:
                value = self.mode.zero() if k < 0 else self.mode.one()
                self._values[key] = (value, self.mode.one())
            else:
                matrix = self._matrix(family, k, i, n)
                self._values[key] = (determinant(matrix, self.mode), determinant_scale(matrix, self.mode))
        return self._values[key]

    def H(self, k: int, i: int, n: int) -> Scalar:
        return self._cached("H", k, i, n)[0]

    def Phi(self, k: int, i: int, n: int) -> Scalar:
        return self._cached("Phi", k, i, n)[0]

    def hankel(self, k: int, i: int, n: int) -> Scalar:
        return self._cached("hankel", k, i, n)[0]

    def H_scale(self, k: int, i: int, n: int) -> Scalar:
        return self._cached("H", k, i, n)[1]

    def F(self, kappa: int, n: int) -> Scalar:
        k, i = lattice_position(kappa, self.m)
        return self.H(k, i, n)

    def F_scale(self, kappa: int, n: int) -> Scalar:
        k, i = lattice_position(kappa, self.m)
        return self.H_scale(k, i, n)

    def G(self, kappa: int, n: int) -> Scalar:
        k, i = lattice_position(kappa, self.m)
        if i == 1:
            return self.H(k - 1, self.m + 2, n)
        if i == self.m + 1:
            return self.H(k + 1, 0, n)
        return self.Phi(k + 1, i - 1, n)
