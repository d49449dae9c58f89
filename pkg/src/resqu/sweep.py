"""Parameter sweeps over the aided-decision scenario, emitted as CSV."""
from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

from .aided_decision import REFERENCE_P_T, REFERENCE_V_RATIO, ScenarioParams, responsibility
from .errors import ResquError, ValidationError

DIRECT_PARAMS = (
    "p_t",
    "d_human",
    "d_automation",
    "v_ratio_automation",
    "v_ratio_human",
    "beta_automation_override",
    "beta_human_base_override",
)
# derived axes: v_ratio sets both payoff ratios; r sets d_automation = r * d_human;
# beta_ratio sets the human's base criterion to beta_ratio * beta_automation
DERIVED_PARAMS = ("v_ratio", "r", "beta_ratio")
AXIS_NAMES = DIRECT_PARAMS + DERIVED_PARAMS

REPORT_COLUMNS = ("resp", "h_x", "h_y", "h_x_given_y")

FIG_D_START, FIG_D_STOP, FIG_D_STEP = 0.6, 3.0, 0.15

#: (d_human, d_automation) for the three criterion-mismatch panels.
FIG6_PRESETS = {
    "fig6a": (3.0, 1.0),  # R = 1/3
    "fig6b": (1.0, 3.0),  # R = 3
    "fig6c": (1.2, 1.8),  # R = 1.5
}
PRESETS = ("fig4", "fig5") + tuple(FIG6_PRESETS)


def format_number(x: float) -> str:
    """Shortest rendering with at most 12 significant digits."""
    s = f"{float(x):.12g}"
    return "0" if s == "-0" else s


@dataclass(frozen=True)
class Axis:
    name: str
    values: tuple[float, ...]

    def __init__(self, name: str, values: Iterable[float]):
        if name not in AXIS_NAMES:
            raise ValidationError(f"unknown axis {name!r}; expected one of {AXIS_NAMES}")
        values = tuple(float(v) for v in values)
        if not values:
            raise ValidationError(f"axis {name!r} has no values")
        if any(not math.isfinite(v) for v in values):
            raise ValidationError(f"axis {name!r} has non-finite values")
        object.__setattr__(self, "name", name)
        object.__setattr__(self, "values", values)

    @classmethod
    def from_range(cls, name: str, start: float, stop: float, step: float) -> "Axis":
        """Inclusive range; ``stop`` is kept when it lies on the step lattice."""
        if not step > 0:
            raise ValidationError(f"axis {name!r}: step must be > 0, got {step!r}")
        if stop < start:
            raise ValidationError(f"axis {name!r}: stop {stop!r} is below start {start!r}")
        n = int(math.floor((stop - start) / step + 1e-9)) + 1
        return cls(name, (round(start + i * step, 12) for i in range(n)))

    @classmethod
    def log_spaced(cls, name: str, low: float, high: float, per_decade: int) -> "Axis":
        lo, hi = math.log10(low), math.log10(high)
        n = int(round((hi - lo) * per_decade)) + 1
        return cls(name, (float(f"{10 ** (lo + i / per_decade):.12g}") for i in range(n)))


@dataclass(frozen=True)
class GridSpec:
    axes: tuple[Axis, ...]
    fixed: Mapping[str, float] = field(default_factory=dict)
    extra_columns: tuple[str, ...] = ()

    def __init__(self, axes: Sequence[Axis], fixed: Mapping[str, float] | None = None, extra_columns=()):
        axes = tuple(axes)
        if not 1 <= len(axes) <= 2:
            raise ValidationError(f"a grid needs one or two axes, got {len(axes)}")
        if len({a.name for a in axes}) != len(axes):
            raise ValidationError("axis names must be distinct")
        fixed = dict(fixed or {})
        for k in fixed:
            if k not in AXIS_NAMES + ("loop_mode",):
                raise ValidationError(f"unknown fixed parameter {k!r}")
        for col in extra_columns:
            if col != "r":
                raise ValidationError(f"unknown extra column {col!r}")
        object.__setattr__(self, "axes", axes)
        object.__setattr__(self, "fixed", fixed)
        object.__setattr__(self, "extra_columns", tuple(extra_columns))

    @property
    def columns(self) -> tuple[str, ...]:
        return tuple(a.name for a in self.axes) + self.extra_columns

    def points(self) -> list[dict[str, float]]:
        """Grid points in row-major order (first axis outermost)."""
        if len(self.axes) == 1:
            return [{self.axes[0].name: v} for v in self.axes[0].values]
        a, b = self.axes
        return [{a.name: va, b.name: vb} for va in a.values for vb in b.values]


@dataclass(frozen=True)
class SweepRow:
    values: dict[str, float]
    resp: float
    h_x: float
    h_y: float
    h_x_given_y: float


@dataclass(frozen=True)
class SweepError:
    values: dict[str, float]
    message: str


@dataclass
class SweepResult:
    columns: tuple[str, ...]
    rows: list[SweepRow]
    errors: list[SweepError]

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(list(self.columns) + list(REPORT_COLUMNS))
        for row in self.rows:
            writer.writerow(
                [format_number(row.values[c]) for c in self.columns]
                + [format_number(getattr(row, c)) for c in REPORT_COLUMNS]
            )
        return buf.getvalue()

    def grid(self, row_axis: str, col_axis: str):
        """Responsibility values arranged as ``{row_value: {col_value: resp}}``."""
        out: dict[float, dict[float, float]] = {}
        for r in self.rows:
            out.setdefault(r.values[row_axis], {})[r.values[col_axis]] = r.resp
        return out

    def error_summary(self) -> str:
        lines = [f"{len(self.errors)} grid point(s) failed:"]
        lines += [f"  {e.values}: {e.message}" for e in self.errors]
        return "\n".join(lines)


def scenario_at(point: Mapping[str, float], fixed: Mapping[str, float] | None = None) -> ScenarioParams:
    """Resolve fixed parameters and an axis point into scenario parameters."""
    values = {"p_t": REFERENCE_P_T, "v_ratio_automation": REFERENCE_V_RATIO, "v_ratio_human": REFERENCE_V_RATIO}
    merged = {**(fixed or {}), **point}
    if "v_ratio" in merged:
        values["v_ratio_automation"] = values["v_ratio_human"] = merged["v_ratio"]
    for k in DIRECT_PARAMS + ("loop_mode",):
        if k in merged and merged[k] is not None:
            values[k] = merged[k]
    if "r" in merged:
        if "d_human" not in values:
            raise ValidationError("axis 'r' needs d_human to be fixed or on the other axis")
        values["d_automation"] = merged["r"] * values["d_human"]
    params = ScenarioParams(**values)
    if "beta_ratio" in merged:
        params = params.replace(beta_human_base_override=merged["beta_ratio"] * params.beta_automation)
    return params


def _row(values: dict[str, float], params: ScenarioParams, extra: Sequence[str]) -> SweepRow:
    rep = responsibility(params)
    values = dict(values)
    for col in extra:
        values[col] = params.sensitivity_ratio
    return SweepRow(values, rep.resp, rep.h_x, rep.h_y, rep.h_x_given_y)


def grid_sweep(spec: GridSpec) -> SweepResult:
    """Evaluate responsibility at every grid point.

    Points that fail validation or hit a degenerate entropy are collected in
    ``errors`` and the sweep carries on.
    """
    rows, errors = [], []
    for point in spec.points():
        try:
            rows.append(_row(point, scenario_at(point, spec.fixed), spec.extra_columns))
        except ResquError as exc:
            errors.append(SweepError(point, str(exc)))
    return SweepResult(spec.columns, rows, errors)


def ratio_sweep(
    r_values: Sequence[float],
    anchor: str = "human",
    anchor_value: float = 1.0,
    base: ScenarioParams | None = None,
) -> SweepResult:
    """Responsibility against R = d_automation / d_human.

    ``anchor`` names the sensitivity held at ``anchor_value``; the other one
    is set to match each R.
    """
    if anchor not in ("human", "automation"):
        raise ValidationError(f"anchor must be 'human' or 'automation', got {anchor!r}")
    if not r_values:
        raise ValidationError("r_values is empty")
    base = base or ScenarioParams()
    rows, errors = [], []
    for r in r_values:
        point = {"r": float(r)}
        try:
            if r <= 0:
                raise ValidationError(f"r must be > 0, got {r!r}")
            if anchor == "human":
                params = base.replace(d_human=anchor_value, d_automation=r * anchor_value)
            else:
                params = base.replace(d_automation=anchor_value, d_human=anchor_value / r)
            rows.append(_row({**point, "d_human": params.d_human, "d_automation": params.d_automation}, params, ()))
        except ResquError as exc:
            errors.append(SweepError(point, str(exc)))
    return SweepResult(("r", "d_human", "d_automation"), rows, errors)


def beta_mismatch_sweep(
    beta_ratio_values: Sequence[float], r: float, base: ScenarioParams | None = None
) -> SweepResult:
    """Responsibility when the human's base criterion is ``ratio * beta_automation``.

    ``d_automation`` is set to ``r * base.d_human``.
    """
    if not beta_ratio_values:
        raise ValidationError("beta_ratio_values is empty")
    base = base or ScenarioParams()
    fixed = {
        "p_t": base.p_t,
        "d_human": base.d_human,
        "r": r,
        "v_ratio_automation": base.v_ratio_automation,
        "v_ratio_human": base.v_ratio_human,
        "beta_automation_override": base.beta_automation_override,
        "loop_mode": base.loop_mode,
    }
    spec = GridSpec([Axis("beta_ratio", beta_ratio_values)], fixed)
    return grid_sweep(spec)


def fig4_spec() -> GridSpec:
    d_h = Axis.from_range("d_human", FIG_D_START, FIG_D_STOP, FIG_D_STEP)
    d_a = Axis.from_range("d_automation", FIG_D_START, FIG_D_STOP, FIG_D_STEP)
    return GridSpec([d_h, d_a], {"p_t": REFERENCE_P_T, "v_ratio": REFERENCE_V_RATIO})


def fig6_beta_axis() -> Axis:
    return Axis.log_spaced("beta_ratio", 1e-2, 1e2, per_decade=10)


def preset_spec(name: str) -> GridSpec:
    if name == "fig4":
        return fig4_spec()
    if name == "fig5":
        s = fig4_spec()
        return GridSpec(s.axes, s.fixed, extra_columns=("r",))
    if name in FIG6_PRESETS:
        d_h, d_a = FIG6_PRESETS[name]
        fixed = {"p_t": REFERENCE_P_T, "v_ratio": REFERENCE_V_RATIO, "d_human": d_h, "d_automation": d_a}
        return GridSpec([fig6_beta_axis()], fixed)
    raise ValidationError(f"unknown preset {name!r}; expected one of {PRESETS}")


def run_preset(name: str) -> SweepResult:
    return grid_sweep(preset_spec(name))
