"""Rendering of ε tables as pandas frames, CSV text and JSON documents."""

from __future__ import annotations

import json
from io import StringIO

from .constants import (
    JSON_CELLS_KEY,
    JSON_M_KEY,
    STATUS_VALID,
    TABLE_BREAKDOWN,
    TABLE_INFINITY,
    TABLE_MISSING,
)
from .epsilon import CellState, CellStatus, EpsilonTable
from .errors import ParseError
from .imports import Any, Dict, List, Optional, Tuple, pd
from .numerics import Scalar, ScalarMode, parse_scalar


def _keep(k: int, max_k: Optional[int]) -> bool:
    return max_k is None or k <= max_k


def cell_records(table: EpsilonTable, max_k: Optional[int] = None, limit: Optional[Scalar] = None) -> List[Dict[str, Any]]:
    """One dict per cell: k, n, status, value (and error on limit columns when ``limit`` is given)."""
    mode = table.mode
    records = []
    for (k, n), cell in table.iter_cells():
        if not _keep(k, max_k):
            continue
        record: Dict[str, Any] = {
            "k": k,
            "n": n,
            "status": cell.status.value,
            "value": mode.format(cell.value) if cell.is_valid else "",
        }
        if limit is not None:
            on_limit_column = k > 0 and k % (table.m + 1) == 0
            record["error"] = mode.format(mode.abs(cell.value - limit)) if on_limit_column and cell.is_valid else ""
        records.append(record)
    return records


def table_to_frame(table: EpsilonTable, max_k: Optional[int] = None, limit: Optional[Scalar] = None) -> pd.DataFrame:
    columns = ["k", "n", "status", "value"] + (["error"] if limit is not None else [])
    return pd.DataFrame(cell_records(table, max_k, limit), columns=columns)


def table_to_csv(table: EpsilonTable, max_k: Optional[int] = None, limit: Optional[Scalar] = None) -> str:
    return table_to_frame(table, max_k, limit).to_csv(index=False)


def table_to_json(table: EpsilonTable, max_k: Optional[int] = None, limit: Optional[Scalar] = None) -> Dict[str, Any]:
    return {JSON_M_KEY: table.m, JSON_CELLS_KEY: cell_records(table, max_k, limit)}


def table_to_json_text(table: EpsilonTable, max_k: Optional[int] = None, limit: Optional[Scalar] = None) -> str:
    return json.dumps(table_to_json(table, max_k, limit), indent=2)


def _cell_text(cell: CellState, mode: ScalarMode) -> str:
    if cell.status is CellStatus.VALID:
        return mode.format(cell.value)
    if cell.status is CellStatus.BREAKDOWN:
        return TABLE_BREAKDOWN
    if cell.status is CellStatus.INFINITY:
        return TABLE_INFINITY
    return TABLE_MISSING


def table_to_grid(table: EpsilonTable, max_k: Optional[int] = None) -> pd.DataFrame:
    """Rows n, columns k, cells as text."""
    columns = [k for k in table.columns() if _keep(k, max_k)]
    grid = {k: [_cell_text(table.state(k, n), table.mode) for n in range(table.N + 1)] for k in columns}
    frame = pd.DataFrame(grid, index=pd.RangeIndex(table.N + 1, name="n"))
    frame.columns.name = "k"
    return frame


def parse_table_json(payload: Dict[str, Any], mode: ScalarMode) -> Tuple[int, Dict[Tuple[int, int], Tuple[str, Optional[Scalar]]]]:
    """Inverse of `table_to_json`: (m, {(k, n): (status, value)})."""
    try:
        m = int(payload[JSON_M_KEY])
        cells = {}
        for item in payload[JSON_CELLS_KEY]:
            status = item["status"]
            value = parse_scalar(item["value"], mode) if status == STATUS_VALID else None
            cells[(int(item["k"]), int(item["n"]))] = (status, value)
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"malformed table document: {exc}") from exc
    return m, cells


def parse_table_csv(text: str, mode: ScalarMode) -> Dict[Tuple[int, int], Tuple[str, Optional[Scalar]]]:
    frame = pd.read_csv(StringIO(text), dtype=str, keep_default_na=False)
    return {
        (int(row.k), int(row.n)): (row.status, parse_scalar(row.value, mode) if row.status == STATUS_VALID else None)
        for row in frame.itertuples(index=False)
    }
