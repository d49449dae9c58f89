import numpy as np
import pytest

from resqu.aided_decision import ScenarioParams, responsibility
from resqu.errors import ValidationError
from resqu.sweep import (
    FIG6_PRESETS,
    PRESETS,
    Axis,
    GridSpec,
    beta_mismatch_sweep,
    fig4_spec,
    fig6_beta_axis,
    format_number,
    grid_sweep,
    preset_spec,
    ratio_sweep,
    run_preset,
    scenario_at,
)


def test_format_number():
    assert format_number(0.1) == "0.1"
    assert format_number(2 / 3) == "0.666666666667"
    assert format_number(-0.0) == "0"
    assert format_number(1e-20) == "1e-20"


def test_inclusive_range():
    ax = Axis.from_range("d_human", 0.6, 3.0, 0.15)
    assert len(ax.values) == 17
    assert ax.values[0] == 0.6 and ax.values[-1] == 3.0
    assert Axis.from_range("d_human", 1, 2, 0.3).values == (1.0, 1.3, 1.6, 1.9)


@pytest.mark.parametrize(
    "make",
    [
        lambda: Axis("bogus", [1.0]),
        lambda: Axis("d_human", []),
        lambda: Axis("d_human", [float("nan")]),
        lambda: Axis.from_range("d_human", 1, 2, 0),
        lambda: Axis.from_range("d_human", 2, 1, 0.1),
        lambda: GridSpec([]),
        lambda: GridSpec([Axis("d_human", [1.0])] * 2),
        lambda: GridSpec([Axis("d_human", [1.0])], {"nope": 1.0}),
    ],
)
def test_invalid_specs(make):
    with pytest.raises(ValidationError):
        make()


def test_log_axis():
    ax = fig6_beta_axis()
    assert len(ax.values) == 41
    assert ax.values[0] == 0.01 and ax.values[20] == 1.0 and ax.values[-1] == 100.0


def test_fig4_grid_shape_and_order():
    res = run_preset("fig4")
    assert len(res.rows) == 17 * 17 and not res.errors
    first, second = res.rows[0].values, res.rows[1].values
    assert first == {"d_human": 0.6, "d_automation": 0.6}
    assert second == {"d_human": 0.6, "d_automation": 0.75}
    lines = res.to_csv().split("\n")
    assert lines[0] == "d_human,d_automation,resp,h_x,h_y,h_x_given_y"
    assert len(lines) == 17 * 17 + 2 and lines[-1] == ""


def test_fig4_monotone():
    grid = run_preset("fig4").grid("d_human", "d_automation")
    arr = np.array([[grid[h][a] for a in sorted(grid[h])] for h in sorted(grid)])
    assert np.all(np.diff(arr, axis=1) < -1e-9)
    assert np.all(np.diff(arr, axis=0) > 1e-9)


def test_fig5_has_ratio_column():
    res = run_preset("fig5")
    assert res.columns[-1] == "r"
    high = [r.resp for r in res.rows if r.values["r"] >= 3 - 1e-12]
    assert high and max(high) < 0.1


def test_fig6_presets():
    assert set(FIG6_PRESETS) <= set(PRESETS)
    a = run_preset("fig6a")
    assert all(r.resp > 0.8 for r in a.rows if 0.1 <= r.values["beta_ratio"] <= 10)
    b = {r.values["beta_ratio"]: r.resp for r in run_preset("fig6b").rows}
    assert b[1.0] < 0.1
    assert 0.3 <= b[10.0] <= 0.6


def test_unknown_preset():
    with pytest.raises(ValidationError):
        preset_spec("fig9")


def test_scenario_resolution():
    p = scenario_at({"r": 2.0}, {"d_human": 1.5})
    assert p.d_automation == 3.0
    p = scenario_at({"v_ratio": 1.0}, {"d_human": 1.0, "d_automation": 1.0})
    assert p.v_ratio_human == p.v_ratio_automation == 1.0
    p = scenario_at({"beta_ratio": 2.0}, {"d_human": 1.0, "d_automation": 1.0})
    assert p.beta_human_base == pytest.approx(2.0 * p.beta_automation)
    with pytest.raises(ValidationError):
        scenario_at({"r": 2.0}, {})


def test_bad_points_are_collected():
    spec = GridSpec([Axis("p_t", [0.2, 1.0, 0.5])], {"d_human": 1.0, "d_automation": 1.0})
    res = grid_sweep(spec)
    assert [r.values["p_t"] for r in res.rows] == [0.2, 0.5]
    assert len(res.errors) == 1 and res.errors[0].values == {"p_t": 1.0}
    assert "1 grid point(s) failed" in res.error_summary()


def test_ratio_sweep_anchors():
    res = ratio_sweep([1.0, 3.0], anchor="human", anchor_value=0.6)
    assert [r.values["d_automation"] for r in res.rows] == pytest.approx([0.6, 1.8])
    assert 0.6 <= res.rows[0].resp <= 0.8
    assert res.rows[1].resp < 0.1
    res = ratio_sweep([2.0], anchor="automation", anchor_value=3.0)
    assert res.rows[0].values["d_human"] == 1.5
    res = ratio_sweep([-1.0, 1.0])
    assert len(res.errors) == 1 and len(res.rows) == 1
    with pytest.raises(ValidationError):
        ratio_sweep([1.0], anchor="neither")
    with pytest.raises(ValidationError):
        ratio_sweep([])


@pytest.mark.xfail(strict=True, reason="closed form gives 0.336 at d'=3; see the acceptance suite")
def test_ratio_sweep_equal_high_sensitivity_band():
    res = ratio_sweep([1.0], anchor="human", anchor_value=3.0)
    assert 0.4 <= res.rows[0].resp <= 0.6


def test_beta_mismatch_sweep():
    base = ScenarioParams(d_human=0.6)
    res = beta_mismatch_sweep([1.0, 10.0], r=3.0, base=base)
    matched, mismatched = (row.resp for row in res.rows)
    assert matched == pytest.approx(responsibility(base.replace(d_automation=1.8)).resp, abs=1e-12)
    assert matched < 0.1 < mismatched
