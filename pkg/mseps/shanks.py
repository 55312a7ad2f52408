"""Transformations defined as ratios of determinants.

- `shanks`: e_k(S_n) = 𝓗_(k+1)(S_n) / 𝓗_k(Δ²S_n)
- `multistep_shanks`: e_(k,m)(S_n) = H_(k+1)(S_n) / H_k(Δ^(m+1) S_n)
- `epsilon_entry_det`: any multistep ε entry as G/F
- `multistep_shanks_linear`: the same limit from a dense solve of the kernel system

Computing e_(k,m)(S_n) consumes S_n..S_(n+(m+1)k).
"""

from __future__ import annotations

import logging
from fractions import Fraction

import sympy

from .determinants import (
    DeterminantOracle,
    bareiss_determinant,
    determinant,
    determinant_scale,
    hankel,
    hankel_matrix,
)
from .epsilon import CellState, EpsilonTable, seed_row
from .errors import Breakdown, IndexOutOfRange, SingularSystem
from .imports import Any, Dict, List, Optional, Tuple
from .numerics import (
    Scalar,
    ScalarMode,
    SequencePrefix,
    default_zero_policy,
    difference_sequence,
    forward_difference,
    is_effectively_zero,
    max_magnitude,
)

logger = logging.getLogger(__name__)


def checked_ratio(
    num: Scalar,
    den: Scalar,
    mode: ScalarMode,
    cell: Optional[Tuple[int, int]] = None,
    scale: Optional[Scalar] = None,
) -> Scalar:
    """num / den, raising Breakdown when den is effectively zero.

    ``scale`` is the size the denominator's own inputs give it (the Hadamard
    bound of its matrix); 1 when omitted.
    """
    if is_effectively_zero(den, mode.one() if scale is None else scale, default_zero_policy(mode)):
        raise Breakdown(f"zero denominator at {cell}" if cell else "zero denominator", cell)
    return num / den


def _require(condition: bool, message: str) -> None:
    if not condition:
        raise IndexOutOfRange(message)


def shanks(seq: SequencePrefix, k: int, n: int) -> Scalar:
    """Shanks' e_k(S_n).

    Examples
    --------
    >>> shanks(SequencePrefix.from_values([1, "1/2", "5/6"]), 1, 0)
    Fraction(7, 10)
    """
    _require(k >= 0 and n >= 0 and n + 2 * k <= seq.N, f"e_{k}(S_{n}) needs S_{n + 2 * k}, prefix ends at S_{seq.N}")
    if k == 0:
        return seq.terms[n]
    num = hankel(seq, n, k + 1)
    den_matrix = hankel_matrix(difference_sequence(seq, 2), n, k)
    den = determinant(den_matrix, seq.mode)
    return checked_ratio(num, den, seq.mode, (2 * k, n), determinant_scale(den_matrix, seq.mode))


def aitken(seq: SequencePrefix, n: int) -> Scalar:
    """Aitken's Δ² process, i.e. e_1(S_n)."""
    return shanks(seq, 1, n)


def multistep_shanks(
    seq: SequencePrefix, m: int, k: int, n: int, oracle: Optional[DeterminantOracle] = None
) -> Scalar:
    _require(
        k >= 0 and n >= 0 and n + (m + 1) * k <= seq.N,
        f"e_({k},{m})(S_{n}) needs S_{n + (m + 1) * k}, prefix ends at S_{seq.N}",
    )
    oracle = oracle if oracle is not None and oracle.m == m else DeterminantOracle(seq, m)
    return checked_ratio(
        oracle.H(k + 1, 0, n), oracle.H(k, m + 1, n), seq.mode, ((m + 1) * k, n), oracle.H_scale(k, m + 1, n)
    )


def epsilon_entry_det(
    seq: SequencePrefix, m: int, kappa: int, n: int, oracle: Optional[DeterminantOracle] = None
) -> Scalar:
    """ε_(κ,m)^(n) from determinants.

    κ = (m+1)k gives H_(k+1)(S_n)/H_k(Δ^(m+1)S_n); κ = (m+1)(k-1)+1 gives
    H_(k-1)(Δ^(m+2)S_n)/H_k(ΔS_n); κ = (m+1)(k-1)+i with 2 <= i <= m gives
    Φ_(k+1)(Δ^(i-1)S_n)/H_k(Δ^i S_n).
    """
    _require(kappa >= 0 and n >= 0 and n + kappa <= seq.N, f"ε_{kappa}^({n}) needs S_{n + kappa}, prefix ends at S_{seq.N}")
    oracle = oracle if oracle is not None and oracle.m == m else DeterminantOracle(seq, m)
    return checked_ratio(oracle.G(kappa, n), oracle.F(kappa, n), seq.mode, (kappa, n), oracle.F_scale(kappa, n))


def odd_column_entry(seq: SequencePrefix, m: int, k: int, n: int) -> Scalar:
    """ε_((m+1)k+1)^(n) as 1 / e_(k,m)(ΔS_n)."""
    inner = multistep_shanks(difference_sequence(seq, 1), m, k, n)
    return checked_ratio(seq.mode.one(), inner, seq.mode, ((m + 1) * k + 1, n))


def _kernel_system(seq: SequencePrefix, m: int, k: int, n: int) -> Tuple[List[List[Scalar]], List[Scalar]]:
    rows = []
    rhs = []
    for j in range(k + 1):
        rows.append([seq.mode.one()] + [forward_difference(seq, i * m, n + j) for i in range(1, k + 1)])
        rhs.append(seq.terms[n + j])
    return rows, rhs


def multistep_shanks_linear(seq: SequencePrefix, m: int, k: int, n: int) -> Scalar:
    """Solve S_(n+j) = c + Σ_i a_i Δ^(im) S_(n+j), j = 0..k, and return c."""
    _require(
        k >= 0 and n >= 0 and n + (m + 1) * k <= seq.N,
        f"kernel system (m={m}, k={k}) at n={n} exceeds prefix S_0..S_{seq.N}",
    )
    if k == 0:
        return seq.terms[n]
    rows, rhs = _kernel_system(seq, m, k, n)
    if seq.mode.is_rational:
        matrix = sympy.Matrix([[sympy.Rational(x.numerator, x.denominator) for x in row] for row in rows])
        vector = sympy.Matrix([sympy.Rational(x.numerator, x.denominator) for x in rhs])
        if bareiss_determinant(rows) == 0:
            raise SingularSystem(f"kernel system (m={m}, k={k}) at n={n} is singular")
        c = sympy.Rational(matrix.LUsolve(vector)[0])
        return Fraction(int(c.p), int(c.q))
    ctx = seq.mode.context
    matrix = ctx.matrix(rows)
    scale = max_magnitude([x for row in rows for x in row], seq.mode) ** (k + 1)
    if is_effectively_zero(ctx.det(matrix), scale, default_zero_policy(seq.mode)):
        raise SingularSystem(f"kernel system (m={m}, k={k}) at n={n} is singular")
    try:
        solution = ctx.lu_solve(matrix, ctx.matrix(rhs))
    except ZeroDivisionError as exc:
        raise SingularSystem(f"kernel system (m={m}, k={k}) at n={n} is singular") from exc
    return solution[0]


def quasilinearity_check(seq: SequencePrefix, m: int, k: int, n: int, a: Any, b: Any) -> bool:
    """Whether e_(k,m)(aS_n + b) = a e_(k,m)(S_n) + b."""
    mode = seq.mode
    a, b = mode.coerce(a), mode.coerce(b)
    if a == 0:
        raise ValueError("quasilinearity needs a != 0")
    lhs = multistep_shanks(seq.affine(a, b), m, k, n)
    rhs = a * multistep_shanks(seq, m, k, n) + b
    if mode.is_rational:
        return lhs == rhs
    return is_effectively_zero(lhs - rhs, rhs, default_zero_policy(mode))


def kernel_containment_check(seq: SequencePrefix, m: int, k: int, n: int) -> bool:
    """Classic e_(km)(S_n) against the multistep e_(k,m)(S_n)."""
    classic = shanks(seq, k * m, n)
    multistep = multistep_shanks(seq, m, k, n)
    if seq.mode.is_rational:
        return classic == multistep
    return is_effectively_zero(classic - multistep, multistep, default_zero_policy(seq.mode))


def determinant_table(seq: SequencePrefix, m: int, max_k: Optional[int] = None) -> EpsilonTable:
    """An ε table whose entries all come from `epsilon_entry_det`."""
    oracle = DeterminantOracle(seq, m)
    cells: Dict[Tuple[int, int], CellState] = {}
    for n, term in enumerate(seq.terms):
        seed_row(cells, m, n, term, seq.mode)
    top = seq.N if max_k is None else min(seq.N, max_k)
    for kappa in range(1, top + 1):
        for n in range(seq.N - kappa + 1):
            try:
                cells[(kappa, n)] = CellState.valid(epsilon_entry_det(seq, m, kappa, n, oracle))
            except Breakdown as exc:
                cells[(kappa, n)] = CellState.breakdown(exc.cell)
    return EpsilonTable(m, seq, cells, max_k=max_k)


def linear_table(seq: SequencePrefix, m: int, max_k: Optional[int] = None) -> EpsilonTable:
    """Even multistep columns κ = (m+1)k from the kernel linear solve; other columns unset."""
    cells: Dict[Tuple[int, int], CellState] = {(0, n): CellState.valid(t) for n, t in enumerate(seq.terms)}
    top = seq.N if max_k is None else min(seq.N, max_k)
    for kappa in range(m + 1, top + 1, m + 1):
        k = kappa // (m + 1)
        for n in range(seq.N - kappa + 1):
            try:
                cells[(kappa, n)] = CellState.valid(multistep_shanks_linear(seq, m, k, n))
            except SingularSystem:
                logger.debug("singular kernel system at κ=%d n=%d", kappa, n)
                cells[(kappa, n)] = CellState.breakdown((kappa, n))
    return EpsilonTable(m, seq, cells, max_k=max_k)
