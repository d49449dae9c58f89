"""General information-flow models over discrete variables.

A model is a DAG of variables, each tagged with the role that owns it
(``environment``, ``automation``, ``human`` or ``output``) and carrying a
conditional probability table. Responsibility is the entropy of the single
output variable remaining after conditioning on every automation-owned
variable, relative to the output's entropy.

CPT layout: one row per combination of parent states, ordered
lexicographically by parent declaration order with the last parent varying
fastest (C order). A variable with no parents has a single row.
"""
from __future__ import annotations

import json
import math
import string
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Iterable, Sequence

import numpy as np

from . import infotheory as it
from .aided_decision import (
    X_LABELS,
    Y_LABELS,
    ResponsibilityReport,
    ScenarioParams,
    automation_rates,
    dual_criteria,
    human_conditional_rates,
    report_from_joint,
)
from .errors import DegenerateEntropyError, ModelValidationError, StateSpaceError
from .infotheory import NORMALIZATION_TOL, JointPmf

OWNERS = ("environment", "automation", "human", "output")

#: Largest joint state space that will be enumerated.
MAX_ATOMS = 2**24

NO_AUTOMATION_NOTICE = (
    "model has no automation-owned variables; conditioning on the empty set gives Resp = 1"
)


@dataclass(frozen=True)
class Diagnostic:
    kind: str
    message: str
    variable: str | None = None
    row: int | None = None

    def __str__(self) -> str:
        where = ""
        if self.variable is not None:
            where = f" [{self.variable}" + (f", row {self.row}" if self.row is not None else "") + "]"
        return f"{self.kind}{where}: {self.message}"


@dataclass(frozen=True)
class FlowVariable:
    name: str
    owner: str
    states: tuple[str, ...]
    parents: tuple[str, ...]
    cpt: tuple[tuple[float, ...], ...]

    def __init__(self, name, owner, states, parents=(), cpt=()):
        object.__setattr__(self, "name", str(name))
        object.__setattr__(self, "owner", str(owner))
        object.__setattr__(self, "states", tuple(str(s) for s in states))
        object.__setattr__(self, "parents", tuple(str(p) for p in parents))
        object.__setattr__(self, "cpt", tuple(tuple(float(x) for x in row) for row in cpt))

    def to_dict(self) -> dict[str, Any]:
        return {
            "name": self.name,
            "owner": self.owner,
            "states": list(self.states),
            "parents": list(self.parents),
            "cpt": [list(row) for row in self.cpt],
        }


@dataclass(frozen=True)
class FlowModel:
    variables: tuple[FlowVariable, ...]
    output: str

    def __init__(self, variables: Iterable[FlowVariable], output: str):
        object.__setattr__(self, "variables", tuple(variables))
        object.__setattr__(self, "output", str(output))

    def __getitem__(self, name: str) -> FlowVariable:
        for v in self.variables:
            if v.name == name:
                return v
        raise KeyError(name)

    @property
    def names(self) -> list[str]:
        return [v.name for v in self.variables]

    def owned_by(self, owner: str) -> list[str]:
        return [v.name for v in self.variables if v.owner == owner]

    @property
    def cardinality(self) -> int:
        return math.prod(len(v.states) for v in self.variables)

    @classmethod
    def from_dict(cls, data: Any) -> "FlowModel":
        """Parse the JSON model schema; malformed documents raise diagnostics."""
        diags = []
        if not isinstance(data, dict):
            raise ModelValidationError([Diagnostic("schema", "top level must be an object")])
        if not isinstance(data.get("variables"), list):
            diags.append(Diagnostic("schema", "'variables' must be an array"))
        if not isinstance(data.get("output"), str):
            diags.append(Diagnostic("schema", "'output' must be a variable name"))
        if diags:
            raise ModelValidationError(diags)
        variables = []
        for i, raw in enumerate(data["variables"]):
            if not isinstance(raw, dict):
                diags.append(Diagnostic("schema", f"variable #{i} must be an object"))
                continue
            missing = [k for k in ("name", "owner", "states", "cpt") if k not in raw]
            if missing:
                diags.append(Diagnostic("schema", f"variable #{i} lacks {missing}", raw.get("name")))
                continue
            try:
                variables.append(
                    FlowVariable(raw["name"], raw["owner"], raw["states"], raw.get("parents", []), raw["cpt"])
                )
            except (TypeError, ValueError) as exc:
                diags.append(Diagnostic("schema", f"variable #{i}: {exc}", raw.get("name")))
        if diags:
            raise ModelValidationError(diags)
        return cls(variables, data["output"])

    def to_dict(self) -> dict[str, Any]:
        return {"variables": [v.to_dict() for v in self.variables], "output": self.output}


def load_model(path: str | Path) -> FlowModel:
    try:
        data = json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise ModelValidationError([Diagnostic("schema", f"not valid JSON: {exc}")]) from exc
    return FlowModel.from_dict(data)


def save_model(model: FlowModel, path: str | Path) -> None:
    Path(path).write_text(json.dumps(model.to_dict(), indent=2) + "\n", encoding="utf-8")


def _find_cycle(model: FlowModel) -> list[str] | None:
    known = set(model.names)
    parents = {v.name: [p for p in v.parents if p in known] for v in model.variables}
    state = {}
    stack: list[str] = []

    def visit(n):
        state[n] = "open"
        stack.append(n)
        for p in parents[n]:
            if state.get(p) == "open":
                return stack[stack.index(p):] + [p]
            if p not in state:
                found = visit(p)
                if found:
                    return found
        stack.pop()
        state[n] = "done"
        return None

    for n in parents:
        if n not in state:
            found = visit(n)
            if found:
                return found
    return None


def validate(model: FlowModel) -> list[Diagnostic]:
    """All structural problems of ``model``; an empty list means it is valid."""
    diags: list[Diagnostic] = []
    names = model.names
    seen = set()
    for n in names:
        if n in seen:
            diags.append(Diagnostic("duplicate", "variable name declared twice", n))
        seen.add(n)
    by_name = {v.name: v for v in model.variables}

    for v in model.variables:
        if v.owner not in OWNERS:
            diags.append(Diagnostic("owner", f"unknown owner {v.owner!r}, expected one of {OWNERS}", v.name))
        if len(v.states) < 2:
            diags.append(Diagnostic("states", "needs at least two states", v.name))
        if len(set(v.states)) != len(v.states):
            diags.append(Diagnostic("states", "state labels must be unique", v.name))
        if len(set(v.parents)) != len(v.parents):
            diags.append(Diagnostic("parents", "parent listed twice", v.name))
        dangling = [p for p in v.parents if p not in by_name]
        for p in dangling:
            diags.append(Diagnostic("dangling-parent", f"parent {p!r} is not a declared variable", v.name))
        if dangling:
            continue
        expected_rows = math.prod(len(by_name[p].states) for p in v.parents)
        if len(v.cpt) != expected_rows:
            diags.append(
                Diagnostic("cpt-shape", f"cpt has {len(v.cpt)} rows, expected {expected_rows}", v.name)
            )
            continue
        for i, row in enumerate(v.cpt):
            if len(row) != len(v.states):
                diags.append(
                    Diagnostic("cpt-shape", f"row has {len(row)} entries, expected {len(v.states)}", v.name, i)
                )
            elif any(not math.isfinite(x) or x < 0 for x in row):
                diags.append(Diagnostic("cpt-value", "entries must be finite and non-negative", v.name, i))
            elif abs(math.fsum(row) - 1.0) > NORMALIZATION_TOL:
                diags.append(
                    Diagnostic("normalization", f"row sums to {math.fsum(row)!r}, expected 1", v.name, i)
                )

    cycle = _find_cycle(model)
    if cycle:
        diags.append(Diagnostic("cycle", " -> ".join(cycle), cycle[0]))

    outputs = model.owned_by("output")
    if len(outputs) != 1:
        diags.append(Diagnostic("output", f"exactly one output-owned variable required, found {outputs}"))
    if model.output not in by_name:
        diags.append(Diagnostic("output", f"output {model.output!r} is not a declared variable"))
    elif by_name[model.output].owner != "output":
        diags.append(Diagnostic("output", f"output {model.output!r} is not owned by 'output'", model.output))
    return diags


def check(model: FlowModel) -> FlowModel:
    diags = validate(model)
    if diags:
        raise ModelValidationError(diags)
    return model


@dataclass(frozen=True)
class JointTable:
    """Full joint distribution; axis ``i`` follows ``names[i]``."""

    names: tuple[str, ...]
    states: tuple[tuple[str, ...], ...]
    probs: np.ndarray

    def marginal(self, keep: Sequence[str]) -> np.ndarray:
        """Marginal over ``keep``, axes in the order given."""
        idx = [self.names.index(n) for n in keep]
        drop = tuple(i for i in range(len(self.names)) if i not in idx)
        m = self.probs.sum(axis=drop) if drop else self.probs
        remaining = [i for i in range(len(self.names)) if i in idx]
        return np.moveaxis(m, [remaining.index(i) for i in idx], list(range(len(idx))))


def _cpt_array(v: FlowVariable, model: FlowModel) -> np.ndarray:
    shape = [len(model[p].states) for p in v.parents] + [len(v.states)]
    arr = np.array(v.cpt, dtype=float)
    arr = arr / arr.sum(axis=1, keepdims=True)
    return arr.reshape(shape)


def joint_distribution(model: FlowModel) -> JointTable:
    """Enumerate the joint as the product of every variable's CPT."""
    check(model)
    size = model.cardinality
    if size > MAX_ATOMS:
        raise StateSpaceError(size, MAX_ATOMS)
    letters = string.ascii_letters
    axis = {n: letters[i] for i, n in enumerate(model.names)}
    operands, subscripts = [], []
    for v in model.variables:
        operands.append(_cpt_array(v, model))
        subscripts.append("".join(axis[p] for p in v.parents) + axis[v.name])
    out = "".join(axis[n] for n in model.names)
    probs = np.einsum(",".join(subscripts) + "->" + out, *operands)
    return JointTable(tuple(model.names), tuple(v.states for v in model.variables), probs)


def _pair_joint(table: JointTable, rows: Sequence[str], cols: Sequence[str]) -> JointPmf:
    m = table.marginal(list(rows) + list(cols))
    n_rows = math.prod(m.shape[: len(rows)])
    return JointPmf(m.reshape(n_rows, -1))


def general_responsibility(model: FlowModel) -> ResponsibilityReport:
    """Resp = H(Z | all automation variables) / H(Z) for the output Z."""
    table = joint_distribution(model)
    automation = model.owned_by("automation")
    z = model.output
    z_pmf = it.Pmf(table.marginal([z]), model[z].states)
    h_z = it.entropy(z_pmf)
    if h_z <= 0:
        raise DegenerateEntropyError(f"output {z!r} is constant: H(Z) = 0", h_denominator=h_z)
    details = {"output": z, "conditioning": automation}
    if not automation:
        return ResponsibilityReport(
            h_x=h_z, h_y=0.0, h_xy=h_z, h_x_given_y=h_z, resp=1.0,
            details=details, notice=NO_AUTOMATION_NOTICE,
        )
    joint = _pair_joint(table, automation, [z])
    return report_from_joint(joint, details=details)


def theil_association(model: FlowModel, a: str, b: str) -> float:
    """Theil's U(a | b): share of a's entropy explained by b."""
    table = joint_distribution(model)
    return it.theil_u(_pair_joint(table, [b], [a]), it.COL)


def aws_flow_model(params: ScenarioParams) -> FlowModel:
    """Three-variable network of the aided-decision scenario.

    Environment T -> automation classification Y -> human action X, with X
    also depending on T through the human's own observation.
    """
    auto = automation_rates(params)
    alarm, noise = human_conditional_rates(params, dual_criteria(params, auto))
    t = FlowVariable("T", "environment", Y_LABELS, (), [[params.p_t, 1.0 - params.p_t]])
    y = FlowVariable(
        "Y", "automation", Y_LABELS, ["T"],
        [[auto.p_tp, auto.p_fn], [auto.p_fp, auto.p_tn]],
    )
    # rows: (T, Y) = (target, target), (target, noise), (noise, target), (noise, noise)
    x = FlowVariable(
        "X", "output", X_LABELS, ["T", "Y"],
        [
            [alarm.p_tp, alarm.p_fn],
            [noise.p_tp, noise.p_fn],
            [alarm.p_fp, alarm.p_tn],
            [noise.p_fp, noise.p_tn],
        ],
    )
    return FlowModel([t, y, x], "X")
