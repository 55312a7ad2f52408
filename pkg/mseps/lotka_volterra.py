"""Extended discrete Lotka-Volterra lattice attached to the multistep ε table.

Entry (j, n) of an `LVLattice` stores a_(j-(m-1)/2)^(n); the integer ``j`` is the
ε column the variable comes from. For j >= 0

    a_j^(n) = 1 / (ε_j^(n+1) - ε_j^(n))

and the left boundary is j = -m → ∞, j = -m+1..-1 → n (``printed``) or 1
(``substituted``), j = 0 → 1/ΔS_n.

In the integer index the lattice equation reads, for every site (κ, n),

    Π_{i=0}^{m-1} a_(κ+i)^(n+1) - Π_{i=0}^{m-1} a_(κ+i)^(n) = 1/a_(κ+m)^(n) - 1/a_(κ-1)^(n+1)

with 1/∞ = 0.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from fractions import Fraction

from .constants import BOUNDARY_PRINTED, BOUNDARY_SUBSTITUTED
from .determinants import DeterminantOracle
from .epsilon import INFINITY, CellState, CellStatus, EpsilonTable
from .errors import Breakdown, GaugeUnderdetermined
from .imports import Dict, List, Optional, Tuple, pd
from .numerics import (
    Scalar,
    ScalarMode,
    SequencePrefix,
    default_zero_policy,
    format_scalar,
    is_effectively_zero,
)
from .shanks import checked_ratio

logger = logging.getLogger(__name__)

Site = Tuple[int, int]
BRANCHES = ("eq42", "eq43", "eq44")


@dataclass(frozen=True)
class LVLattice:
    m: int
    mode: ScalarMode
    entries: Dict[Site, CellState] = field(default_factory=dict)
    boundary: str = BOUNDARY_PRINTED

    def state(self, j: int, n: int) -> Optional[CellState]:
        return self.entries.get((j, n))

    def value(self, j: int, n: int) -> Scalar:
        cell = self.entries.get((j, n))
        if cell is None or cell.status is not CellStatus.VALID:
            raise Breakdown(f"a at j={j}, n={n} is not finite", (j, n))
        return cell.value

    def physical_index(self, j: int) -> Fraction:
        return Fraction(j) - Fraction(self.m - 1, 2)

    def rows(self) -> int:
        return max((n for _, n in self.entries), default=-1) + 1

    def with_entry(self, j: int, n: int, value: Scalar) -> "LVLattice":
        entries = dict(self.entries)
        entries[(j, n)] = CellState.valid(self.mode.coerce(value))
        return LVLattice(self.m, self.mode, entries, self.boundary)

    def to_frame(self) -> pd.DataFrame:
        rows = []
        for (j, n), cell in sorted(self.entries.items()):
            rows.append(
                {
                    "j": j,
                    "index": str(self.physical_index(j)),
                    "n": n,
                    "status": cell.status.value,
                    "value": format_scalar(cell.value, self.mode) if cell.is_valid else "",
                }
            )
        return pd.DataFrame(rows, columns=["j", "index", "n", "status", "value"])


def _boundary_entries(entries: Dict[Site, CellState], m: int, n: int, mode: ScalarMode, boundary: str) -> None:
    if boundary not in (BOUNDARY_PRINTED, BOUNDARY_SUBSTITUTED):
        raise ValueError(f"unknown boundary {boundary!r}")
    entries[(-m, n)] = INFINITY
    middle = mode.coerce(n) if boundary == BOUNDARY_PRINTED else mode.one()
    for j in range(-m + 1, 0):
        entries[(j, n)] = CellState.valid(middle)


def miura_from_epsilon(table: EpsilonTable, boundary: str = BOUNDARY_PRINTED) -> LVLattice:
    """a_j^(n) = 1/(ε_j^(n+1) - ε_j^(n)) over a multistep table, plus the boundary lines."""
    if table.min_k != -table.m:
        raise ValueError("Miura map needs a multistep ε table")
    m, mode = table.m, table.mode
    policy = default_zero_policy(mode)
    entries: Dict[Site, CellState] = {}
    for n in range(table.N):
        _boundary_entries(entries, m, n, mode, boundary)
        j = 0
        while (j, n + 1) in table.cells:
            upper, lower = table.state(j, n + 1), table.state(j, n)
            if not (upper.is_valid and lower.is_valid):
                origin = upper.origin if upper.status is CellStatus.BREAKDOWN else lower.origin
                entries[(j, n)] = CellState.breakdown(origin)
            else:
                diff = upper.value - lower.value
                if is_effectively_zero(diff, max(abs(upper.value), abs(lower.value)), policy):
                    entries[(j, n)] = CellState.breakdown((j, n))
                else:
                    entries[(j, n)] = CellState.valid(1 / diff)
            j += 1
    return LVLattice(m, mode, entries, boundary)


def site_of(m: int, branch: str, k: int, j: Optional[int] = None) -> int:
    """Lattice column of a closed-form branch."""
    if branch == "eq42":
        return (m + 1) * k
    if branch == "eq43":
        return (m + 1) * k + 1
    if branch == "eq44":
        if j is None or not 2 <= j <= m:
            raise ValueError(f"eq44 needs 2 <= j <= {m}")
        return (m + 1) * k + j
    raise ValueError(f"unknown branch {branch!r}")


def lv_closed_form(
    seq: SequencePrefix,
    m: int,
    branch: str,
    k: int,
    n: int,
    j: Optional[int] = None,
    oracle: Optional[DeterminantOracle] = None,
) -> Scalar:
    """The determinant-ratio solution at the column picked by ``branch`` (and ``j`` for eq44)."""
    oracle = oracle if oracle is not None and oracle.m == m else DeterminantOracle(seq, m)
    H = oracle.H
    cell = (site_of(m, branch, k, j), n)
    if branch == "eq42":
        num = H(k, m + 1, n) * H(k, m + 1, n + 1)
        first, second = (k + 1, 1, n), (k, m, n + 1)
    elif branch == "eq43":
        num = -H(k + 1, 1, n) * H(k + 1, 1, n + 1)
        first, second = (k + 1, 2, n), (k, m + 1, n + 1)
    else:
        num = H(k + 1, j, n) * H(k + 1, j, n + 1)
        first, second = (k + 1, j + 1, n), (k + 1, j - 1, n + 1)
    den = H(*first) * H(*second)
    return checked_ratio(num, den, seq.mode, cell, oracle.H_scale(*first) * oracle.H_scale(*second))


def _branch_at(m: int, column: int) -> Tuple[str, int, Optional[int]]:
    k, r = divmod(column, m + 1)
    if r == 0:
        return "eq42", k, None
    if r == 1:
        return "eq43", k, None
    return "eq44", k, r


def closed_form_lattice(
    seq: SequencePrefix, m: int, boundary: str = BOUNDARY_PRINTED, max_j: Optional[int] = None
) -> LVLattice:
    """Same domain as `miura_from_epsilon` on the full table, filled from determinants."""
    oracle = DeterminantOracle(seq, m)
    entries: Dict[Site, CellState] = {}
    for n in range(seq.N):
        _boundary_entries(entries, m, n, seq.mode, boundary)
        top = seq.N - n - 1 if max_j is None else min(seq.N - n - 1, max_j)
        for column in range(top + 1):
            branch, k, j = _branch_at(m, column)
            try:
                entries[(column, n)] = CellState.valid(lv_closed_form(seq, m, branch, k, n, j, oracle))
            except Breakdown as exc:
                entries[(column, n)] = CellState.breakdown(exc.cell)
    return LVLattice(m, seq.mode, entries, boundary)


@dataclass(frozen=True)
class LVResidual:
    site: Site
    index: Fraction
    residual: Scalar
    edge: bool


@dataclass
class LVResidualReport:
    m: int
    mode: ScalarMode
    residuals: List[LVResidual] = field(default_factory=list)
    skipped: List[Site] = field(default_factory=list)

    @property
    def interior(self) -> List[LVResidual]:
        return [r for r in self.residuals if not r.edge]

    @property
    def edge(self) -> List[LVResidual]:
        return [r for r in self.residuals if r.edge]

    def nonzero(self, include_edge: bool = False) -> List[LVResidual]:
        policy = default_zero_policy(self.mode)
        pool = self.residuals if include_edge else self.interior
        return [r for r in pool if not is_effectively_zero(r.residual, self.mode.one(), policy)]

    def all_zero(self, include_edge: bool = False) -> bool:
        return not self.nonzero(include_edge)

    def to_frame(self) -> pd.DataFrame:
        rows = [
            {
                "k": r.site[0],
                "index": str(r.index),
                "n": r.site[1],
                "edge": r.edge,
                "residual": format_scalar(r.residual, self.mode),
            }
            for r in self.residuals
        ]
        return pd.DataFrame(rows, columns=["k", "index", "n", "edge", "residual"])


def _reciprocal(cell: CellState, mode: ScalarMode) -> Scalar:
    if cell.status is CellStatus.INFINITY:
        return mode.zero()
    return 1 / cell.value


def lv_residuals(lattice: LVLattice) -> LVResidualReport:
    """Residual of the lattice equation at every site whose entries all exist."""
    m, mode = lattice.m, lattice.mode
    report = LVResidualReport(m, mode)
    for n in range(lattice.rows()):
        kappa = -m + 1
        while True:
            referenced = [(kappa + i, n + 1) for i in range(m)] + [(kappa + i, n) for i in range(m)]
            referenced += [(kappa + m, n), (kappa - 1, n + 1)]
            cells = [lattice.state(j, row) for j, row in referenced]
            if any(c is None for c in cells):
                break
            products = cells[: 2 * m]
            if any(c.status is not CellStatus.VALID for c in products) or any(
                c.status is CellStatus.BREAKDOWN for c in cells
            ):
                report.skipped.append((kappa, n))
                kappa += 1
                continue
            upper = mode.one()
            lower = mode.one()
            for i in range(m):
                upper *= cells[i].value
                lower *= cells[m + i].value
            residual = upper - lower - _reciprocal(cells[-2], mode) + _reciprocal(cells[-1], mode)
            edge = any(-m < j < 0 for j, _ in referenced)
            report.residuals.append(LVResidual((kappa, n), lattice.physical_index(kappa), residual, edge))
            kappa += 1
    logger.debug("lattice residuals: %d sites, %d skipped", len(report.residuals), len(report.skipped))
    return report


def lv_m1_reduced_residuals(lattice: LVLattice) -> Dict[Site, Scalar]:
    """a_k^(n+1) - a_k^(n) - (1/a_(k+1)^(n) - 1/a_(k-1)^(n+1)) for m = 1."""
    if lattice.m != 1:
        raise ValueError("the two-term form is the m = 1 lattice")
    mode = lattice.mode
    out: Dict[Site, Scalar] = {}
    for (k, n), cell in sorted(lattice.entries.items()):
        later = lattice.state(k, n + 1)
        right = lattice.state(k + 1, n)
        left = lattice.state(k - 1, n + 1)
        if not cell.is_valid or later is None or right is None or left is None:
            continue
        if not later.is_valid or not right.is_valid or left.status is CellStatus.BREAKDOWN:
            continue
        out[(k, n)] = later.value - cell.value - (1 / right.value - _reciprocal(left, mode))
    return out


@dataclass
class UGaugeReport:
    """u_k^(n) of the m = 1 lattice and the residuals of its evolution equation."""

    u: Dict[Site, Scalar] = field(default_factory=dict)
    residuals: Dict[Site, Scalar] = field(default_factory=dict)
    ratio_residuals: Dict[Site, Scalar] = field(default_factory=dict)
    unseeded: List[int] = field(default_factory=list)

    def all_zero(self, mode: ScalarMode) -> bool:
        policy = default_zero_policy(mode)
        return all(is_effectively_zero(r, mode.one(), policy) for r in self.residuals.values())


def _finite(lattice: LVLattice, j: int, n: int) -> Optional[Scalar]:
    cell = lattice.state(j, n)
    if cell is None or not cell.is_valid:
        return None
    return cell.value


def lv_m1_u_check(lattice: LVLattice, seed_scale: Scalar = 1) -> UGaugeReport:
    """Build u with u_(-1) = 0, u_0^(n) = -1/(a_0^(n+1) a_1^(n)) and
    u_k^(n) = u_(k-1)^(n+1) a_(k-1)^(n+1) / a_(k+1)^(n), then check
    u_k^(n+1)(1 + u_(k-1)^(n+1)) = u_k^(n)(1 + u_(k+1)^(n)).

    ``seed_scale`` multiplies the seed column; any value other than 1 breaks the equation.
    """
    if lattice.m != 1:
        raise ValueError("the u-variables exist for m = 1 only")
    mode = lattice.mode
    policy = default_zero_policy(mode)
    scale = mode.coerce(seed_scale)
    report = UGaugeReport()
    rows = lattice.rows()
    for n in range(rows):
        report.u[(-1, n)] = mode.zero()
        a0 = _finite(lattice, 0, n + 1)
        a1 = _finite(lattice, 1, n)
        if a0 is None or a1 is None:
            if (1, n) in lattice.entries:
                report.unseeded.append(n)
            continue
        report.u[(0, n)] = -scale / (a0 * a1)
    if not any(k == 0 for k, _ in report.u):
        raise GaugeUnderdetermined("no seed u_0 could be formed from the lattice")

    k = 1
    while True:
        added = False
        for n in range(rows):
            prev = report.u.get((k - 1, n + 1))
            left = _finite(lattice, k - 1, n + 1)
            right = _finite(lattice, k + 1, n)
            if prev is None or left is None or right is None:
                continue
            report.u[(k, n)] = prev * left / right
            if not is_effectively_zero(prev, mode.one(), policy):
                report.ratio_residuals[(k, n)] = report.u[(k, n)] / prev - left / right
            added = True
        if not added:
            break
        k += 1

    for (k, n), value in sorted(report.u.items()):
        if k < 0:
            continue
        later = report.u.get((k, n + 1))
        later_left = report.u.get((k - 1, n + 1))
        right = report.u.get((k + 1, n))
        if later is None or later_left is None or right is None:
            continue
        report.residuals[(k, n)] = later * (1 + later_left) - value * (1 + right)
    return report


def u_from_determinants(seq: SequencePrefix, k: int, n: int, oracle: Optional[DeterminantOracle] = None) -> Scalar:
    """u_k^(n) = F_(k+2)^n F_(k-1)^(n+1) / (F_(k+1)^n F_k^(n+1)) for m = 1."""
    oracle = oracle if oracle is not None and oracle.m == 1 else DeterminantOracle(seq, 1)
    F = oracle.F
    scale = oracle.F_scale(k + 1, n) * oracle.F_scale(k, n + 1)
    return checked_ratio(F(k + 2, n) * F(k - 1, n + 1), F(k + 1, n) * F(k, n + 1), seq.mode, (k, n), scale)
