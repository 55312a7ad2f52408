"""Recursive ε engines: Wynn's rule, the cross rule and the multistep rule.

The multistep table with step ``m`` is initialized with

    ε_(-m)^(n) = 0,   ε_(-m+i)^(n) = n  (i = 1..m-1),   ε_0^(n) = S_n

and filled by

    ε_(k+1)^(n) = ε_(k-m)^(n+1) + 1 / Π_{i=1}^{m} (ε_(k-m+i)^(n+1) - ε_(k-m+i)^(n))

for k + 1 + n <= N. ``m = 1`` is Wynn's ε-algorithm. A zero factor marks the
cell as a breakdown and every descendant inherits it.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from enum import Enum

from .constants import STATUS_BREAKDOWN, STATUS_INFINITY, STATUS_UNSET, STATUS_VALID
from .errors import Breakdown, IndexOutOfRange
from .imports import Callable, Dict, Iterator, List, Optional, Tuple
from .numerics import (
    RATIONAL,
    Scalar,
    ScalarMode,
    SequencePrefix,
    ZeroPolicy,
    default_zero_policy,
    is_effectively_zero,
)

logger = logging.getLogger(__name__)

Cell = Tuple[int, int]


class CellStatus(str, Enum):
    VALID = STATUS_VALID
    BREAKDOWN = STATUS_BREAKDOWN
    UNSET = STATUS_UNSET
    INFINITY = STATUS_INFINITY


@dataclass(frozen=True)
class CellState:
    status: CellStatus
    value: Optional[Scalar] = None
    origin: Optional[Cell] = None

    @classmethod
    def valid(cls, value: Scalar) -> "CellState":
        return cls(CellStatus.VALID, value)

    @classmethod
    def breakdown(cls, origin: Optional[Cell]) -> "CellState":
        return cls(CellStatus.BREAKDOWN, None, origin)

    @property
    def is_valid(self) -> bool:
        return self.status is CellStatus.VALID


UNSET = CellState(CellStatus.UNSET)
INFINITY = CellState(CellStatus.INFINITY)


@dataclass(frozen=True)
class EpsilonTable:
    """ε_(k,m)^(n) for k >= ``min_k`` with a status per cell."""

    m: int
    source: SequencePrefix
    cells: Dict[Cell, CellState] = field(default_factory=dict)
    min_k: Optional[int] = None
    max_k: Optional[int] = None
    policy: Optional[ZeroPolicy] = None

    def __post_init__(self) -> None:
        if self.min_k is None:
            object.__setattr__(self, "min_k", -self.m)
        if self.policy is None:
            object.__setattr__(self, "policy", default_zero_policy(self.source.mode))

    @property
    def N(self) -> int:
        return self.source.N

    @property
    def mode(self) -> ScalarMode:
        return self.source.mode

    def state(self, k: int, n: int) -> CellState:
        return self.cells.get((k, n), UNSET)

    def status(self, k: int, n: int) -> str:
        return self.state(k, n).status.value

    def value(self, k: int, n: int) -> Scalar:
        cell = self.state(k, n)
        if cell.status is CellStatus.VALID:
            return cell.value
        if cell.status is CellStatus.BREAKDOWN:
            raise Breakdown(f"ε_{k}^({n}) broke down at {cell.origin}", cell.origin)
        if cell.status is CellStatus.INFINITY:
            raise Breakdown(f"ε_{k}^({n}) is infinite", (k, n))
        raise IndexOutOfRange(f"ε_{k}^({n}) is not in the table")

    def columns(self) -> List[int]:
        return sorted({k for k, _ in self.cells})

    def iter_cells(self) -> Iterator[Tuple[Cell, CellState]]:
        for key in sorted(self.cells):
            yield key, self.cells[key]

    def breakdowns(self, max_k: Optional[int] = None) -> List[Cell]:
        return [
            key
            for key, cell in self.iter_cells()
            if cell.status is CellStatus.BREAKDOWN and (max_k is None or key[0] <= max_k)
        ]

    def same_cells(self, other: "EpsilonTable") -> bool:
        return self.m == other.m and self.cells == other.cells


def empty_table(
    m: int = 1, mode: ScalarMode = RATIONAL, max_k: Optional[int] = None, policy: Optional[ZeroPolicy] = None
) -> EpsilonTable:
    return EpsilonTable(m, SequencePrefix((), "", mode), {}, max_k=max_k, policy=policy)


def seed_row(cells: Dict[Cell, CellState], m: int, n: int, term: Scalar, mode: ScalarMode) -> None:
    cells[(-m, n)] = CellState.valid(mode.zero())
    for i in range(1, m):
        cells[(-m + i, n)] = CellState.valid(mode.coerce(n))
    cells[(0, n)] = CellState.valid(term)


def _multistep_cell(
    lookup: Callable[[int, int], CellState], kappa: int, n: int, m: int, policy: ZeroPolicy
) -> CellState:
    k = kappa - 1
    base = lookup(k - m, n + 1)
    pairs = [(lookup(k - m + i, n + 1), lookup(k - m + i, n)) for i in range(1, m + 1)]
    for parent in [base] + [p for pair in pairs for p in pair]:
        if parent.status is CellStatus.BREAKDOWN:
            return CellState.breakdown(parent.origin)
        if parent.status is not CellStatus.VALID:
            raise IndexOutOfRange(f"parent of ε_{kappa}^({n}) is {parent.status.value}")
    product = policy.mode.one()
    for upper, lower in pairs:
        diff = upper.value - lower.value
        scale = max(abs(upper.value), abs(lower.value))
        if is_effectively_zero(diff, scale, policy):
            logger.debug("breakdown at ε_%d^(%d) (m=%d)", kappa, n, m)
            return CellState.breakdown((kappa, n))
        product *= diff
    return CellState.valid(base.value + 1 / product)


def multistep_epsilon(
    seq: SequencePrefix, m: int = 1, policy: Optional[ZeroPolicy] = None, max_k: Optional[int] = None
) -> EpsilonTable:
    """Batch multistep ε table over the whole prefix (columns up to ``max_k``)."""
    if m < 1:
        raise ValueError(f"m must be >= 1, got {m}")
    policy = policy or default_zero_policy(seq.mode)
    cells: Dict[Cell, CellState] = {}
    for n, term in enumerate(seq.terms):
        seed_row(cells, m, n, term, seq.mode)
    top = seq.N if max_k is None else min(seq.N, max_k)
    for kappa in range(1, top + 1):
        for n in range(seq.N - kappa + 1):
            cells[(kappa, n)] = _multistep_cell(lambda a, b: cells.get((a, b), UNSET), kappa, n, m, policy)
    logger.debug("multistep table m=%d N=%d: %d cells", m, seq.N, len(cells))
    return EpsilonTable(m, seq, cells, max_k=max_k, policy=policy)


def wynn_epsilon(seq: SequencePrefix, policy: Optional[ZeroPolicy] = None, max_k: Optional[int] = None) -> EpsilonTable:
    """Wynn's ε-algorithm: ε_(-1) = 0, ε_0 = S_n, ε_(k+1)^(n) = ε_(k-1)^(n+1) + 1/(ε_k^(n+1) - ε_k^(n)).

    Examples
    --------
    >>> table = wynn_epsilon(SequencePrefix.from_values([1, "1/2", "5/6", "7/12"]))
    >>> table.value(2, 0)
    Fraction(7, 10)
    """
    return multistep_epsilon(seq, 1, policy, max_k)


def cross_rule_table(seq: SequencePrefix, policy: Optional[ZeroPolicy] = None, max_k: Optional[int] = None) -> EpsilonTable:
    """Even columns of Wynn's table from the five-point cross rule.

    With C = ε_(2k+2)^(n+1) the unknown ε_(2k+4)^(n) is
    C + 1 / (1/(ε_(2k+2)^(n+2) - C) + 1/(ε_(2k+2)^(n) - C) - 1/(ε_(2k)^(n+2) - C)),
    starting from ε_(-2) = ∞ (whose reciprocal term vanishes) and ε_0 = S_n.
    """
    if seq.N < 2:
        raise IndexOutOfRange("cross rule needs at least three terms")
    policy = policy or default_zero_policy(seq.mode)
    mode = seq.mode
    cells: Dict[Cell, CellState] = {}
    for n, term in enumerate(seq.terms):
        cells[(-2, n)] = INFINITY
        cells[(0, n)] = CellState.valid(term)
    top = seq.N if max_k is None else min(seq.N, max_k)
    for col in range(2, top + 1, 2):
        for n in range(seq.N - col + 1):
            centre = cells[(col - 2, n + 1)]
            east = cells[(col - 2, n + 2)]
            west = cells[(col - 2, n)]
            north = cells[(col - 4, n + 2)]
            broken = next(
                (c for c in (centre, east, west, north) if c.status is CellStatus.BREAKDOWN), None
            )
            if broken is not None:
                cells[(col, n)] = CellState.breakdown(broken.origin)
                continue
            c = centre.value
            terms: List[Scalar] = []
            failed = False
            for sign, other in ((1, east), (1, west), (-1, north)):
                if other.status is CellStatus.INFINITY:
                    continue
                diff = other.value - c
                if is_effectively_zero(diff, max(abs(other.value), abs(c)), policy):
                    failed = True
                    break
                terms.append(sign / diff)
            total = sum(terms, mode.zero())
            scale = max((abs(t) for t in terms), default=mode.one())
            if failed or is_effectively_zero(total, scale, policy):
                cells[(col, n)] = CellState.breakdown((col, n))
                continue
            cells[(col, n)] = CellState.valid(c + 1 / total)
    return EpsilonTable(1, seq, cells, min_k=-2, max_k=max_k, policy=policy)


def _push_diagonal(
    cells: Dict[Cell, CellState],
    count: int,
    term: Scalar,
    m: int,
    mode: ScalarMode,
    policy: ZeroPolicy,
    max_k: Optional[int],
) -> Dict[int, CellState]:
    """Add S_count and compute the ascending diagonal κ + n = count in place."""
    seed_row(cells, m, count, term, mode)
    diagonal = {0: cells[(0, count)]}
    top = count if max_k is None else min(count, max_k)
    for kappa in range(1, top + 1):
        state = _multistep_cell(lambda a, b: cells.get((a, b), UNSET), kappa, count - kappa, m, policy)
        cells[(kappa, count - kappa)] = state
        diagonal[kappa] = state
    return diagonal


def progressive_append(table: EpsilonTable, next_term: Scalar) -> EpsilonTable:
    """Extend a multistep table by one term, computing only the new ascending diagonal."""
    if table.min_k != -table.m:
        raise ValueError("progressive append applies to multistep tables only")
    source = table.source.extended(next_term)
    cells = dict(table.cells)
    _push_diagonal(cells, source.N, source.terms[-1], table.m, source.mode, table.policy, table.max_k)
    return EpsilonTable(table.m, source, cells, max_k=table.max_k, policy=table.policy)


class ProgressiveEpsilon:
    """Terms arrive one at a time; only the last m + 1 ascending diagonals are kept.

    Examples
    --------
    >>> acc = ProgressiveEpsilon(m=1)
    >>> for s in [1, "1/2", "5/6"]:
    ...     diagonal = acc.push(s)
    >>> diagonal[2]
    CellState(status=<CellStatus.VALID: 'valid'>, value=Fraction(7, 10), origin=None)
    """

    def __init__(self, m: int = 1, mode: ScalarMode = RATIONAL, policy: Optional[ZeroPolicy] = None) -> None:
        self.m = m
        self.mode = mode
        self.policy = policy or default_zero_policy(mode)
        self.count = 0
        self._window: Dict[Cell, CellState] = {}

    def push(self, term: Scalar) -> Dict[int, CellState]:
        diagonal = _push_diagonal(
            self._window, self.count, self.mode.coerce(term), self.m, self.mode, self.policy, None
        )
        self.count += 1
        floor = self.count - self.m
        for key in [key for key in self._window if key[0] + key[1] < floor]:
            del self._window[key]
        return diagonal

    def window_size(self) -> int:
        return len(self._window)

    def best_estimate(self) -> Optional[Scalar]:
        """Deepest valid even-column (κ ≡ 0 mod m+1) value on the last diagonal."""
        last = self.count - 1
        for kappa in range(last, -1, -1):
            if kappa % (self.m + 1):
                continue
            cell = self._window.get((kappa, last - kappa))
            if cell is not None and cell.is_valid:
                return cell.value
        return None
