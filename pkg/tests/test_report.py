from __future__ import annotations

import json
from fractions import Fraction

from mseps.epsilon import multistep_epsilon, wynn_epsilon
from mseps.numerics import RATIONAL, SequencePrefix
from mseps.report import (
    cell_records,
    parse_table_csv,
    parse_table_json,
    table_to_csv,
    table_to_frame,
    table_to_grid,
    table_to_json,
    table_to_json_text,
)
from mseps.sequences import parse_builtin


def test_frame_columns(ln2):
    frame = table_to_frame(wynn_epsilon(ln2), max_k=4)
    assert list(frame.columns) == ["k", "n", "status", "value"]
    assert frame["k"].max() == 4
    row = frame[(frame["k"] == 2) & (frame["n"] == 0)].iloc[0]
    assert row["value"] == "7/10"


def test_error_column_on_limit_columns():
    seq = parse_builtin("geometric:1,1,1/2", 6)
    table = multistep_epsilon(seq, 1)
    records = cell_records(table, limit=Fraction(1))
    by_cell = {(r["k"], r["n"]): r for r in records}
    assert by_cell[(2, 0)]["value"] == "1"
    assert by_cell[(2, 0)]["error"] == "0"
    assert by_cell[(1, 0)]["error"] == ""
    assert by_cell[(0, 0)]["error"] == ""


def test_csv_round_trip(ln2):
    table = multistep_epsilon(ln2, 2, max_k=4)
    cells = parse_table_csv(table_to_csv(table), RATIONAL)
    for key, cell in table.iter_cells():
        status, value = cells[key]
        assert status == cell.status.value
        assert value == cell.value


def test_json_document(ln2):
    table = multistep_epsilon(ln2, 2)
    payload = json.loads(table_to_json_text(table, max_k=3))
    assert payload["m"] == 2
    m, cells = parse_table_json(payload, RATIONAL)
    assert m == 2
    assert cells[(3, 0)] == ("valid", Fraction(12, 17))
    assert table_to_json(table)["cells"][0]["k"] == -2


def test_grid_marks_breakdowns():
    seq = SequencePrefix.from_values([1, 1, 2, 4, 7])
    grid = table_to_grid(wynn_epsilon(seq))
    assert grid.loc[0, 1] == "BRK"
    assert grid.loc[0, 0] == "1"
    assert grid.loc[4, 1] == "--"
    assert list(grid.columns) == [-1, 0, 1, 2, 3, 4]
