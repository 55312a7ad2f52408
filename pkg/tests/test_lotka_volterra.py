from __future__ import annotations

from fractions import Fraction

import pytest

from mseps.constants import BOUNDARY_PRINTED, BOUNDARY_SUBSTITUTED
from mseps.epsilon import CellStatus, multistep_epsilon, wynn_epsilon
from mseps.errors import Breakdown, IndexOutOfRange
from mseps.lotka_volterra import (
    closed_form_lattice,
    lv_closed_form,
    lv_m1_reduced_residuals,
    lv_m1_u_check,
    lv_residuals,
    miura_from_epsilon,
    site_of,
    u_from_determinants,
)
from mseps.numerics import forward_difference


def test_closed_form_spot_value(ln2):
    assert lv_closed_form(ln2, 1, "eq42", 0, 0) == -2


def test_site_of():
    assert site_of(2, "eq42", 1) == 3
    assert site_of(2, "eq43", 1) == 4
    assert site_of(3, "eq44", 1, 3) == 7
    with pytest.raises(ValueError):
        site_of(1, "eq44", 0, 2)


@pytest.mark.parametrize("m", [1, 2, 3])
def test_boundary_rows(ln2, m):
    lattice = miura_from_epsilon(multistep_epsilon(ln2, m))
    for n in range(ln2.N):
        assert lattice.state(-m, n).status is CellStatus.INFINITY
        for j in range(-m + 1, 0):
            assert lattice.value(j, n) == n
        assert lattice.value(0, n) == 1 / forward_difference(ln2, 1, n)
    substituted = miura_from_epsilon(multistep_epsilon(ln2, m), BOUNDARY_SUBSTITUTED)
    for j in range(-m + 1, 0):
        assert substituted.value(j, 0) == 1


def test_physical_index(ln2):
    lattice = miura_from_epsilon(multistep_epsilon(ln2, 2))
    assert lattice.physical_index(0) == Fraction(-1, 2)
    lattice = miura_from_epsilon(multistep_epsilon(ln2, 3))
    assert lattice.physical_index(4) == 3


@pytest.mark.parametrize("m", [1, 2, 3])
def test_miura_matches_closed_form(sweep, m):
    compared = 0
    for seq in sweep:
        miura = miura_from_epsilon(multistep_epsilon(seq, m))
        closed = closed_form_lattice(seq, m)
        assert set(miura.entries) == set(closed.entries)
        for site, cell in miura.entries.items():
            other = closed.entries[site]
            if cell.is_valid and other.is_valid:
                assert cell.value == other.value, site
                compared += 1
    assert compared > 1000


@pytest.mark.parametrize("m", [1, 2, 3])
def test_lattice_equation_holds(sweep, m):
    interior = 0
    for seq in sweep:
        lattice = miura_from_epsilon(multistep_epsilon(seq, m))
        report = lv_residuals(lattice)
        interior += len(report.interior)
        assert report.all_zero(), report.nonzero()[:3]
        flat = miura_from_epsilon(multistep_epsilon(seq, m), BOUNDARY_SUBSTITUTED)
        assert lv_residuals(flat).all_zero(include_edge=True)
    assert interior > 500


@pytest.mark.parametrize("m", [1, 2])
def test_perturbed_entry_leaves_nonzero_residuals_nearby(ln2_long, m):
    lattice = miura_from_epsilon(multistep_epsilon(ln2_long, m))
    assert lv_residuals(lattice).all_zero()
    j, n = 2, 3
    assert lattice.state(j, n).is_valid
    perturbed = lattice.with_entry(j, n, lattice.value(j, n) + 1)
    broken = [r.site for r in lv_residuals(perturbed).nonzero()]
    assert broken
    for kappa, row in broken:
        assert row in (n - 1, n)
        assert abs(kappa - j) <= m + 1


def test_m1_has_no_edge_sites(ln2):
    report = lv_residuals(miura_from_epsilon(wynn_epsilon(ln2)))
    assert not report.edge
    assert report.all_zero(include_edge=True)
    frame = report.to_frame()
    assert list(frame.columns) == ["k", "index", "n", "edge", "residual"]
    assert set(frame["residual"]) == {"0"}


def test_reduced_m1_form(ln2):
    lattice = miura_from_epsilon(wynn_epsilon(ln2))
    residuals = lv_m1_reduced_residuals(lattice)
    assert residuals
    assert all(r == 0 for r in residuals.values())
    with pytest.raises(ValueError):
        lv_m1_reduced_residuals(miura_from_epsilon(multistep_epsilon(ln2, 2)))


def test_u_variables(ln2_long):
    lattice = miura_from_epsilon(wynn_epsilon(ln2_long))
    report = lv_m1_u_check(lattice)
    assert report.residuals
    assert report.all_zero(lattice.mode)
    assert all(r == 0 for r in report.ratio_residuals.values())
    d1, d2 = forward_difference(ln2_long, 1, 0), forward_difference(ln2_long, 2, 0)
    assert report.u[(0, 0)] == d2 / d1
    for (k, n), value in report.u.items():
        if k < 0:
            continue
        try:
            assert u_from_determinants(ln2_long, k, n) == value
        except (IndexOutOfRange, Breakdown):
            continue


def test_rescaled_seed_breaks_u_equation(ln2_long):
    lattice = miura_from_epsilon(wynn_epsilon(ln2_long))
    report = lv_m1_u_check(lattice, seed_scale=2)
    assert not report.all_zero(lattice.mode)


def test_u_check_needs_m1(ln2):
    with pytest.raises(ValueError):
        lv_m1_u_check(miura_from_epsilon(multistep_epsilon(ln2, 2)))


def test_lattice_frame(ln2):
    lattice = miura_from_epsilon(multistep_epsilon(ln2, 2), BOUNDARY_PRINTED)
    frame = lattice.to_frame()
    assert list(frame.columns) == ["j", "index", "n", "status", "value"]
    row = frame[(frame["j"] == 0) & (frame["n"] == 0)].iloc[0]
    assert row["value"] == "-2"
    assert row["index"] == "-1/2"
