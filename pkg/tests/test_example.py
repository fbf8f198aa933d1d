import csv
import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from mpconc.bounds import theorem1_bound
from mpconc.concurrence import concurrence_full
from mpconc.example import (
    BREAK_1,
    BREAK_2,
    CSV_HEADER,
    DETECTION_THRESHOLD,
    PSI,
    assemble_paper_bound,
    example_point,
    rho_example,
    sweep,
    z_formulas,
    z_piecewise,
)
from mpconc.qstate import DensityMatrix, PureState, purity

from conftest import engine_closed_form


def test_family_endpoints():
    np.testing.assert_allclose(rho_example(0).matrix, np.eye(16) / 16)
    np.testing.assert_allclose(rho_example(1).matrix, np.outer(PSI, PSI))
    assert purity(rho_example(0.5)) == pytest.approx(19 / 64, abs=1e-14)
    with pytest.raises(ValueError):
        rho_example(1.2)
    with pytest.raises(ValueError):
        z_formulas(-0.1)


def test_endpoint_concurrence_is_seven_quarters():
    assert concurrence_full(PureState((2, 2, 2, 2), PSI)).squared == pytest.approx(7 / 4, abs=1e-10)


def test_closed_form_endpoint_values():
    z = z_formulas(1.0)
    assert z.z1 == pytest.approx(0.125, abs=1e-15)
    assert z.z4 == pytest.approx(0.375, abs=1e-15)
    assert z.z4_active
    assert z_formulas(1 / 9).z2 == pytest.approx(0.0, abs=1e-15)
    assert not z_formulas(0.5).z4_active


def test_piecewise_branches():
    assert z_piecewise(0.15) == 2 * z_formulas(0.15).z2
    z = z_formulas(0.25)
    assert z_piecewise(0.25) == 32 * z.z1 + 2 * z.z2
    z = z_formulas(0.6)
    assert z_piecewise(0.6) == 32 * z.z1 + z.z2 + z.z3
    assert z_piecewise(DETECTION_THRESHOLD) == 0.0
    assert z_piecewise(0.05) == 0.0


def test_piecewise_continuity():
    eps = 1e-12
    assert abs(z_piecewise(BREAK_1 + eps) - z_piecewise(BREAK_1)) < 1e-10
    # 0.308051 is a rounded crossing of the two upper branches; the two curves touch there
    jump = abs(z_piecewise(BREAK_2 + eps) - z_piecewise(BREAK_2))
    assert jump < 1e-10


def test_closed_form_bound_values():
    z = z_formulas(1.0)
    expected = (2 * (32 * 0.125 + z.z2 + z.z3) + 0.375) / 12
    assert assemble_paper_bound(1.0) == pytest.approx(expected, rel=1e-15)
    assert 0 < assemble_paper_bound(1.0) <= 7 / 4
    for t in np.linspace(0, DETECTION_THRESHOLD, 20):
        assert assemble_paper_bound(t) == 0.0


def test_closed_form_bound_nondecreasing_near_035():
    grid = np.arange(0.34, 0.35 + 1e-9, 1e-3)
    vals = [assemble_paper_bound(t) for t in grid]
    assert all(b >= a for a, b in zip(vals, vals[1:]))


@given(st.floats(0, 1))
def test_all_values_finite(t):
    z = z_formulas(t)
    assert all(math.isfinite(v) for v in z[:4])
    assert math.isfinite(assemble_paper_bound(t))


@pytest.mark.parametrize("t", [0.1, 0.12, 0.3, 0.7, 1.0])
def test_engine_matches_closed_form(t):
    pt = example_point(t)
    assert pt.bound_sq_engine == pytest.approx(engine_closed_form(t), abs=1e-12)
    assert pt.delta_sq <= pt.bound_sq_engine + 1e-12


def test_engine_at_pure_endpoint():
    pt = example_point(1.0)
    projector = DensityMatrix((2, 2, 2, 2), np.outer(PSI, PSI.conj()))
    assert abs(pt.bound_sq_engine - theorem1_bound(projector).squared) < 1e-9


def test_point_without_engine():
    pt = example_point(0.4, engine=False)
    assert math.isnan(pt.bound_sq_engine) and math.isnan(pt.delta_sq)
    assert pt.bound_sq_paper == assemble_paper_bound(0.4)


# -- sweeps ------------------------------------------------------------------------


def read_csv(path):
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    return rows[0], rows[1:]


def test_sweep_below_threshold_is_zero(tmp_path):
    out = tmp_path / "low.csv"
    pts = sweep(0, 0.1, 11, out, jobs=1)
    header, rows = read_csv(out)
    assert tuple(header) == CSV_HEADER
    assert len(rows) == len(pts) == 11
    for p in pts:
        assert p.z_piecewise == p.bound_sq_paper == p.bound_sq_engine == p.delta_sq == 0.0


def test_sweep_csv_format_round_trips(tmp_path):
    out = tmp_path / "s.csv"
    pts = sweep(0, 1, 101, out, jobs=1)
    _, rows = read_csv(out)
    assert len(rows) == 101
    for p, row in zip(pts, rows):
        assert [float(x) for x in row] == [getattr(p, k) for k in CSV_HEADER]
        assert p.bound_sq_engine >= 0
        assert p.delta_sq <= p.bound_sq_engine + 1e-12
        if p.t <= DETECTION_THRESHOLD:
            assert p.bound_sq_paper == 0.0


def test_sweep_parallel_matches_serial():
    a = sweep(0.1, 0.9, 9, jobs=1)
    b = sweep(0.1, 0.9, 9, jobs=2)
    assert [p.row() for p in a] == [p.row() for p in b]


def test_sweep_errors(tmp_path):
    with pytest.raises(OSError, match="nope"):
        sweep(0, 1, 3, tmp_path / "nope" / "x.csv", jobs=1, engine=False)
    with pytest.raises(ValueError):
        sweep(0.5, 0.5, 3)
    with pytest.raises(ValueError):
        sweep(0, 1, 1)
