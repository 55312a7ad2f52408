"""Residuals of the determinantal and bilinear identities behind the multistep ε rule.

Every identity is a polynomial statement in determinants of one sequence, so in
Rational mode each residual must be exactly zero. Residuals are returned as
scalars (LHS - RHS); deciding what counts as zero in Float mode is left to the
caller.

Notation: ``H(k, i, n)`` is H_k(Δ^i S_n) at step m, ``Phi`` likewise, and
F_κ^n / G_κ^n are the bilinear variables with ε_κ^(n) = G_κ^n / F_κ^n.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from enum import Enum

from .constants import (
    DEFAULT_SEED,
    DEFAULT_SWEEP_SEQUENCES,
    SWEEP_LENGTH_RANGE,
    SWEEP_M_VALUES,
    SWEEP_MAX_SHIFT,
)
from .determinants import DeterminantOracle, determinant
from .errors import DimensionTooSmall, IndexOutOfRange
from .imports import Dict, List, Optional, Sequence, Tuple, np, pd
from .numerics import (
    RATIONAL,
    Scalar,
    ScalarMode,
    SequencePrefix,
    default_zero_policy,
    is_effectively_zero,
)
from .sequences import random_rational, random_rational_sequence

logger = logging.getLogger(__name__)


class IdentityId(str, Enum):
    L1_EQ10 = "L1_eq10"
    L2_EQ11 = "L2_eq11"
    L3_EQ12 = "L3_eq12"
    L3A_EQ13 = "L3a_eq13"
    L3B_EQ14 = "L3b_eq14"
    L4_EQ15 = "L4_eq15"
    L4A_EQ16 = "L4a_eq16"
    L5_EQ17 = "L5_eq17"
    BIL_EQ19 = "BIL_eq19"
    BIL_EQ21 = "BIL_eq21"
    BIL_EQ22 = "BIL_eq22"
    BIL_EQ23 = "BIL_eq23"
    BIL_EQ24 = "BIL_eq24"
    COR2 = "COR2"
    SYLVESTER = "SYLVESTER"


LEMMA_IDS = (
    IdentityId.L1_EQ10,
    IdentityId.L2_EQ11,
    IdentityId.L3_EQ12,
    IdentityId.L3A_EQ13,
    IdentityId.L3B_EQ14,
    IdentityId.L4_EQ15,
    IdentityId.L4A_EQ16,
    IdentityId.L5_EQ17,
)
BILINEAR_IDS = (
    IdentityId.BIL_EQ19,
    IdentityId.BIL_EQ21,
    IdentityId.BIL_EQ22,
    IdentityId.BIL_EQ23,
    IdentityId.BIL_EQ24,
)

# identities that take a shift i; the others ignore it
SHIFTED_IDS = {
    IdentityId.L1_EQ10,
    IdentityId.L2_EQ11,
    IdentityId.L3B_EQ14,
    IdentityId.L4_EQ15,
    IdentityId.L4A_EQ16,
}
# smallest k for which each identity holds with H_(-1) = Φ_(-1) = 0
MIN_K = {
    IdentityId.L1_EQ10: 0,
    IdentityId.L2_EQ11: 1,
    IdentityId.L3_EQ12: 0,
    IdentityId.L3A_EQ13: 1,
    IdentityId.L3B_EQ14: 0,
    IdentityId.L4_EQ15: 1,
    IdentityId.L4A_EQ16: 0,
    IdentityId.L5_EQ17: 1,
}


@dataclass(frozen=True)
class IdentityCase:
    identity_id: IdentityId
    seq: SequencePrefix
    m: int
    k: int
    n: int
    i: int = 0


def _lemma_sides(case: IdentityCase, oracle: DeterminantOracle) -> Tuple[Scalar, Scalar]:
    ident, m, k, n, i = IdentityId(case.identity_id), case.m, case.k, case.n, case.i
    if k < MIN_K[ident] or n < 0 or i < 0:
        raise IndexOutOfRange(f"{ident.value} is not stated for k={k}, n={n}, i={i}")
    H, Phi = oracle.H, oracle.Phi
    if ident is IdentityId.L1_EQ10:
        lhs = H(k + 1, i + 1, n) * H(k, i + m, n + 1)
        rhs = H(k, i + m + 1, n) * H(k + 1, i, n + 1) - H(k, i + m + 1, n + 1) * H(k + 1, i, n)
    elif ident in (IdentityId.L2_EQ11, IdentityId.L3A_EQ13):
        j = m if ident is IdentityId.L3A_EQ13 else i
        lhs = H(k, j + 1, n) * H(k - 1, j, n + 1)
        rhs = H(k - 1, j + 1, n) * H(k, j, n + 1) - H(k - 1, j + 1, n + 1) * H(k, j, n)
    elif ident is IdentityId.L3_EQ12:
        lhs = H(k, 1, n) * H(k, m, n + 1)
        rhs = H(k, m + 1, n) * H(k, 0, n + 1) - H(k + 1, 0, n) * H(k - 1, m + 1, n + 1)
    elif ident is IdentityId.L3B_EQ14:
        lhs = H(k + 1, i, n) * H(k - 1, i + m, n + 1)
        rhs = H(k, i, n) * H(k, i + m, n + 1) - H(k, i, n + 1) * H(k, i + m, n)
    elif ident is IdentityId.L4_EQ15:
        lhs = H(k, i, n + 1) * H(k - 1, i + 2, n)
        rhs = H(k, i + 1, n) * Phi(k, i, n + 1) - H(k - 1, i + 1, n + 1) * Phi(k + 1, i, n)
    elif ident is IdentityId.L4A_EQ16:
        lhs = H(k, i + 2, n) * H(k, i, n + 1)
        rhs = H(k, i + 1, n) * Phi(k + 1, i, n + 1) - H(k, i + 1, n + 1) * Phi(k + 1, i, n)
    elif ident is IdentityId.L5_EQ17:
        lhs = H(k, 1, n) * H(k - 2, m + 1, n + 1)
        rhs = H(k - 1, m + 1, n + 1) * H(k - 1, 1, n) - H(k - 1, m + 1, n) * H(k - 1, 1, n + 1)
    else:
        raise ValueError(f"{ident.value} is not a lemma identity")
    return lhs, rhs


def _oracle_for(seq: SequencePrefix, m: int, oracle: Optional[DeterminantOracle]) -> DeterminantOracle:
    if oracle is not None and oracle.m == m and oracle.seq is seq:
        return oracle
    return DeterminantOracle(seq, m)


def check_identity(case: IdentityCase, oracle: Optional[DeterminantOracle] = None) -> Scalar:
    """LHS - RHS of one of the determinant lemma identities."""
    lhs, rhs = _lemma_sides(case, _oracle_for(case.seq, case.m, oracle))
    return lhs - rhs


def _cross(oracle: DeterminantOracle, a: int, b: int, n: int) -> Scalar:
    """F_a^n G_b^(n+1) - F_b^(n+1) G_a^n."""
    return oracle.F(a, n) * oracle.G(b, n + 1) - oracle.F(b, n + 1) * oracle.G(a, n)


def bilinear_sides(
    oracle: DeterminantOracle, identity_id: IdentityId, k: int, n: int, i: int = 2, kappa: Optional[int] = None
) -> Tuple[Scalar, Scalar]:
    """Both sides of one bilinear relation; ``kappa`` is only used by the assembled rule."""
    m = oracle.m
    F = oracle.F
    ident = IdentityId(identity_id)
    if ident in (IdentityId.BIL_EQ23, IdentityId.BIL_EQ24) and not 2 <= i <= m + 1:
        raise IndexOutOfRange(f"{ident.value} needs 2 <= i <= {m + 1}, got {i}")
    a = (m + 1) * k + 1
    b = (m + 1) * k + i
    if ident is IdentityId.BIL_EQ21:
        return _cross(oracle, a, a, n), -F(a + 1, n) * F(a - 1, n + 1)
    if ident is IdentityId.BIL_EQ22:
        return _cross(oracle, a, a - (m + 1), n), -F(a - m, n) * F(a - 1, n + 1)
    if ident is IdentityId.BIL_EQ23:
        return _cross(oracle, b, b, n), F(b + 1, n) * F(b - 1, n + 1)
    if ident is IdentityId.BIL_EQ24:
        return _cross(oracle, b, b - (m + 1), n), F(b - m, n) * F(b - 1, n + 1)
    if ident is IdentityId.BIL_EQ19:
        kappa = (m + 1) * k if kappa is None else kappa
        lhs = _cross(oracle, kappa + m + 1, kappa, n)
        rhs = -F(kappa + m + 1, n) * F(kappa, n + 1)
        for j in range(1, m + 1):
            lhs *= _cross(oracle, kappa + j, kappa + j, n)
            rhs *= F(kappa + j, n) * F(kappa + j, n + 1)
        return lhs, rhs
    raise ValueError(f"{ident.value} is not a bilinear relation")


def check_bilinear(
    seq: SequencePrefix, m: int, k: int, n: int, i: int, oracle: Optional[DeterminantOracle] = None
) -> List[Tuple[str, Scalar]]:
    """Residuals of the four bilinear relations at (k, n, i) and of the assembled rule at every κ of block k."""
    oracle = _oracle_for(seq, m, oracle)
    results: List[Tuple[str, Scalar]] = []
    for ident in (IdentityId.BIL_EQ21, IdentityId.BIL_EQ22, IdentityId.BIL_EQ23, IdentityId.BIL_EQ24):
        lhs, rhs = bilinear_sides(oracle, ident, k, n, i)
        results.append((ident.value, lhs - rhs))
    for kappa in range((m + 1) * k, (m + 1) * (k + 1)):
        lhs, rhs = bilinear_sides(oracle, IdentityId.BIL_EQ19, k, n, kappa=kappa)
        results.append((IdentityId.BIL_EQ19.value, lhs - rhs))
    return results


def corollary2_sides(oracle: DeterminantOracle, k: int, n: int) -> Tuple[Scalar, Scalar]:
    m, F = oracle.m, oracle.F
    lhs = F(k + m + 1, n) * F(k - 1, n + 1)
    rhs = F(k, n) * F(k + m, n + 1) - F(k + m, n) * F(k, n + 1)
    return lhs, rhs


def check_corollary2(seq: SequencePrefix, m: int, k: int, n: int, oracle: Optional[DeterminantOracle] = None) -> Scalar:
    """F_(k+m+1)^n F_(k-1)^(n+1) - (F_k^n F_(k+m)^(n+1) - F_(k+m)^n F_k^(n+1))."""
    lhs, rhs = corollary2_sides(_oracle_for(seq, m, oracle), k, n)
    return lhs - rhs


def _minor(matrix: Sequence[Sequence[Scalar]], rows: range, cols: range) -> List[List[Scalar]]:
    return [[matrix[r][c] for c in cols] for r in rows]


def sylvester_sides(matrix: Sequence[Sequence[Scalar]], mode: ScalarMode = RATIONAL) -> Tuple[Scalar, Scalar]:
    size = len(matrix)
    if size < 3 or any(len(row) != size for row in matrix):
        raise DimensionTooSmall(f"Sylvester identity needs a square matrix of size >= 3, got {size}")
    head, tail, inner = range(0, size - 1), range(1, size), range(1, size - 1)
    lhs = determinant(matrix, mode) * determinant(_minor(matrix, inner, inner), mode)
    nw = determinant(_minor(matrix, head, head), mode)
    se = determinant(_minor(matrix, tail, tail), mode)
    ne = determinant(_minor(matrix, head, tail), mode)
    sw = determinant(_minor(matrix, tail, head), mode)
    return lhs, nw * se - ne * sw


def check_sylvester(matrix: Sequence[Sequence[Scalar]], mode: ScalarMode = RATIONAL) -> Scalar:
    """|M||A| - (NW·SE - NE·SW) for the bordered split of M around its core A."""
    lhs, rhs = sylvester_sides(matrix, mode)
    return lhs - rhs


def random_matrix(rng: np.random.Generator, size: int, singular_core: bool = False) -> List[List[Scalar]]:
    rows = [[random_rational(rng) for _ in range(size)] for _ in range(size)]
    if singular_core and size >= 4:
        # make the core's second row a copy of its first
        for c in range(1, size - 1):
            rows[2][c] = rows[1][c]
    return rows


@dataclass
class IdentityStats:
    identity_id: str
    cases: int = 0
    failures: int = 0
    max_abs_residual: Scalar = 0


@dataclass
class SweepSummary:
    seed: int
    sequences: int
    stats: Dict[str, IdentityStats] = field(default_factory=dict)

    def record(self, identity_id: str, lhs: Scalar, rhs: Scalar, mode: ScalarMode) -> None:
        entry = self.stats.setdefault(identity_id, IdentityStats(identity_id))
        residual = abs(lhs - rhs)
        entry.cases += 1
        if residual > entry.max_abs_residual:
            entry.max_abs_residual = residual
        if not is_effectively_zero(lhs - rhs, max(abs(lhs), abs(rhs)), default_zero_policy(mode)):
            entry.failures += 1
            logger.debug("%s residual %s", identity_id, residual)

    @property
    def all_zero(self) -> bool:
        return all(s.failures == 0 for s in self.stats.values())

    @property
    def total_cases(self) -> int:
        return sum(s.cases for s in self.stats.values())

    def to_frame(self) -> pd.DataFrame:
        rows = [
            {
                "identity": s.identity_id,
                "cases": s.cases,
                "failures": s.failures,
                "max_abs_residual": str(s.max_abs_residual),
            }
            for s in self.stats.values()
        ]
        return pd.DataFrame(rows, columns=["identity", "cases", "failures", "max_abs_residual"])


def _sweep_sequence(summary: SweepSummary, seq: SequencePrefix, m: int, max_shift: int) -> None:
    oracle = DeterminantOracle(seq, m)
    mode = seq.mode
    k_top = seq.N // (m + 1) + 2
    for n in range(seq.N + 1):
        for k in range(k_top + 1):
            for ident in LEMMA_IDS:
                shifts = range(max_shift + 1) if ident in SHIFTED_IDS else (0,)
                for i in shifts:
                    try:
                        lhs, rhs = _lemma_sides(IdentityCase(ident, seq, m, k, n, i), oracle)
                    except IndexOutOfRange:
                        continue
                    summary.record(ident.value, lhs, rhs, mode)
            if k >= 1:
                for ident in (IdentityId.BIL_EQ21, IdentityId.BIL_EQ22):
                    try:
                        lhs, rhs = bilinear_sides(oracle, ident, k, n)
                    except IndexOutOfRange:
                        continue
                    summary.record(ident.value, lhs, rhs, mode)
                for ident in (IdentityId.BIL_EQ23, IdentityId.BIL_EQ24):
                    for i in range(2, m + 2):
                        try:
                            lhs, rhs = bilinear_sides(oracle, ident, k, n, i)
                        except IndexOutOfRange:
                            continue
                        summary.record(ident.value, lhs, rhs, mode)
        for kappa in range(seq.N + 1):
            try:
                lhs, rhs = bilinear_sides(oracle, IdentityId.BIL_EQ19, 0, n, kappa=kappa)
            except IndexOutOfRange:
                continue
            summary.record(IdentityId.BIL_EQ19.value, lhs, rhs, mode)
        for kappa in range(1, seq.N + 1):
            try:
                lhs, rhs = corollary2_sides(oracle, kappa, n)
            except IndexOutOfRange:
                continue
            summary.record(IdentityId.COR2.value, lhs, rhs, mode)


def run_sweep(
    seed: int = DEFAULT_SEED,
    sequences: int = DEFAULT_SWEEP_SEQUENCES,
    ms: Sequence[int] = SWEEP_M_VALUES,
    lengths: Tuple[int, int] = SWEEP_LENGTH_RANGE,
    max_shift: int = SWEEP_MAX_SHIFT,
    sylvester_matrices: int = 0,
    mode: ScalarMode = RATIONAL,
) -> SweepSummary:
    """Evaluate every identity on random rational sequences at all admissible indices."""
    rng = np.random.default_rng(seed)
    summary = SweepSummary(seed, sequences)
    for index in range(sequences):
        length = int(rng.integers(lengths[0], lengths[1] + 1))
        seq = random_rational_sequence(rng, length, label=f"random#{index}").with_mode(mode)
        for m in ms:
            _sweep_sequence(summary, seq, m, max_shift)
    for index in range(sylvester_matrices):
        size = 3 + index % 4
        matrix = random_matrix(rng, size, singular_core=index % 5 == 4)
        if not mode.is_rational:
            matrix = [[mode.coerce(x) for x in row] for row in matrix]
        lhs, rhs = sylvester_sides(matrix, mode)
        summary.record(IdentityId.SYLVESTER.value, lhs, rhs, mode)
    logger.debug("identity sweep seed=%d: %d cases", seed, summary.total_cases)
    return summary
