"""Closed-form responsibility for a human aided by a binary classifier.

An automated module classifies each detected entity as ``target`` or
``noise`` (variable Y). The human, knowing the module's rates, updates the
target prior on each classification and applies a separate optimal
criterion per branch before choosing to ``engage`` or ``abort`` (variable X).
Responsibility is ``H(X | Y) / H(X)``.
"""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field
from typing import Any

from . import infotheory as it
from .errors import UnreachableBranchError, ValidationError
from .infotheory import JointPmf, Pmf
from .sdt import (
    OutcomeRates,
    check_d_prime,
    check_positive,
    check_probability,
    cutoff_from_beta,
    log_optimal_beta_from_odds,
    optimal_beta,
    outcome_rates,
)

Y_LABELS = ("target", "noise")
X_LABELS = ("engage", "abort")

#: Reference configuration used for the figures: 20% targets, payoff ratio 2/3.
REFERENCE_P_T = 0.2
REFERENCE_V_RATIO = 2.0 / 3.0

LOOP_MODES = ("in", "on")


@dataclass(frozen=True)
class ScenarioParams:
    """Inputs of the aided-decision scenario.

    ``beta_human_base_override`` is the criterion the human would use
    unaided. It is converted into an implied human payoff ratio
    ``beta * p_t / (1 - p_t)``, so the human stays Bayes-rational about the
    automation while holding different preferences.

    ``loop_mode`` (human in or on the loop) is carried for reporting only;
    both modes share one information flow and give identical results.
    """

    p_t: float = REFERENCE_P_T
    d_human: float = 1.0
    d_automation: float = 1.0
    v_ratio_automation: float = REFERENCE_V_RATIO
    v_ratio_human: float = REFERENCE_V_RATIO
    beta_automation_override: float | None = None
    beta_human_base_override: float | None = None
    loop_mode: str = "in"

    def __post_init__(self):
        check_probability(self.p_t, "p_t")
        for name in ("d_human", "d_automation"):
            check_d_prime(getattr(self, name), name)
            if getattr(self, name) <= 0:
                raise ValidationError(f"{name} must be > 0, got {getattr(self, name)!r}")
        check_positive(self.v_ratio_automation, "v_ratio_automation")
        check_positive(self.v_ratio_human, "v_ratio_human")
        for name in ("beta_automation_override", "beta_human_base_override"):
            if getattr(self, name) is not None:
                check_positive(getattr(self, name), name)
        if self.loop_mode not in LOOP_MODES:
            raise ValidationError(f"loop_mode must be one of {LOOP_MODES}, got {self.loop_mode!r}")

    @property
    def sensitivity_ratio(self) -> float:
        """R = d'_automation / d'_human."""
        return self.d_automation / self.d_human

    @property
    def beta_automation(self) -> float:
        if self.beta_automation_override is not None:
            return self.beta_automation_override
        return optimal_beta(self.p_t, self.v_ratio_automation)

    @property
    def effective_v_ratio_human(self) -> float:
        if self.beta_human_base_override is not None:
            return self.beta_human_base_override * self.p_t / (1.0 - self.p_t)
        return self.v_ratio_human

    @property
    def beta_human_base(self) -> float:
        """Criterion the human would adopt without the automation."""
        return optimal_beta(self.p_t, self.effective_v_ratio_human)

    def replace(self, **changes) -> "ScenarioParams":
        values = asdict(self)
        values.update(changes)
        return ScenarioParams(**values)

    def to_dict(self) -> dict[str, Any]:
        return asdict(self)


@dataclass(frozen=True)
class DualCriteria:
    beta_given_alarm: float
    beta_given_noise: float
    c_given_alarm: float
    c_given_noise: float

    @classmethod
    def from_cutoffs(cls, d_human: float, c_given_alarm: float, c_given_noise: float) -> "DualCriteria":
        """Criteria for arbitrary cutoffs, e.g. to model a human who over-relies."""
        return cls(
            _exp(d_human * c_given_alarm), _exp(d_human * c_given_noise), c_given_alarm, c_given_noise
        )

    def to_dict(self) -> dict[str, float]:
        return asdict(self)


@dataclass(frozen=True)
class AidedTables:
    dist_y: Pmf
    joint_xy: JointPmf
    dist_x: Pmf

    def to_dict(self) -> dict[str, Any]:
        return {
            "dist_y": self.dist_y.as_dict(),
            "joint_xy": self.joint_xy.as_dict(),
            "dist_x": self.dist_x.as_dict(),
        }


@dataclass(frozen=True)
class ResponsibilityReport:
    """Entropies (bits) behind a responsibility value.

    ``h_x`` is the entropy of the output, ``h_y`` that of the automation
    variables, ``h_xy`` their joint entropy.
    """

    h_x: float
    h_y: float
    h_xy: float
    h_x_given_y: float
    resp: float
    params: Any = None
    tables: AidedTables | None = None
    details: dict[str, Any] = field(default_factory=dict)
    notice: str | None = None

    def to_dict(self) -> dict[str, Any]:
        out: dict[str, Any] = {
            "resp": self.resp,
            "h_x": self.h_x,
            "h_y": self.h_y,
            "h_xy": self.h_xy,
            "h_x_given_y": self.h_x_given_y,
        }
        if self.params is not None:
            out["params"] = self.params.to_dict() if hasattr(self.params, "to_dict") else self.params
        if self.tables is not None:
            out["tables"] = self.tables.to_dict()
        out.update(self.details)
        if self.notice:
            out["notice"] = self.notice
        return out


def report_from_joint(joint: JointPmf, **kwargs) -> ResponsibilityReport:
    """Build a report from a joint with automation on rows and output on columns."""
    resp = it.responsibility_ratio(joint)
    return ResponsibilityReport(
        h_x=it.entropy(joint.col_marginal()),
        h_y=it.entropy(joint.row_marginal()),
        h_xy=it.joint_entropy(joint),
        h_x_given_y=it.conditional_entropy(joint, it.ROW),
        resp=resp,
        **kwargs,
    )


def automation_rates(params: ScenarioParams) -> OutcomeRates:
    cutoff = cutoff_from_beta(params.d_automation, params.beta_automation)
    return outcome_rates(params.d_automation, cutoff)


def _log(x: float) -> float:
    return math.log(x) if x > 0 else -math.inf


def _exp(x: float) -> float:
    # exp overflows above ~709.78
    return math.exp(x) if x < 709.0 else math.inf


def _branch_log_beta(p_t: float, p_target: float, p_noise: float, v_ratio: float, branch: str) -> float:
    # log odds of target in this branch: ln(p_t * p_target) - ln((1 - p_t) * p_noise)
    if p_t * p_target + (1.0 - p_t) * p_noise <= 0:
        raise UnreachableBranchError(branch)
    log_odds = (_log(p_t) + _log(p_target)) - (_log(1.0 - p_t) + _log(p_noise))
    return log_optimal_beta_from_odds(log_odds, v_ratio)


def dual_criteria(params: ScenarioParams, auto: OutcomeRates | None = None) -> DualCriteria:
    """The human's optimal criterion on each automation branch.

    ``auto`` defaults to the true automation rates; pass different rates to
    model a human with a mistaken belief about the automation.

    The posterior odds are formed in log space, so a branch with a vanishing
    false-alarm or miss rate yields an infinite cutoff instead of overflow.
    """
    if auto is None:
        auto = automation_rates(params)
    v_h = params.effective_v_ratio_human
    log_b_alarm = _branch_log_beta(params.p_t, auto.p_tp, auto.p_fp, v_h, "target")
    log_b_noise = _branch_log_beta(params.p_t, auto.p_fn, auto.p_tn, v_h, "noise")
    d = params.d_human
    return DualCriteria(
        beta_given_alarm=_exp(log_b_alarm),
        beta_given_noise=_exp(log_b_noise),
        c_given_alarm=log_b_alarm / d,
        c_given_noise=log_b_noise / d,
    )


def human_conditional_rates(
    params: ScenarioParams, dual: DualCriteria
) -> tuple[OutcomeRates, OutcomeRates]:
    """Human outcome rates given an automation alarm and given silence."""
    return (
        outcome_rates(params.d_human, dual.c_given_alarm),
        outcome_rates(params.d_human, dual.c_given_noise),
    )


def build_tables(
    params: ScenarioParams,
    dual: DualCriteria | None = None,
    auto: OutcomeRates | None = None,
) -> AidedTables:
    """Distribution of Y, joint of (Y, X) and distribution of X."""
    if auto is None:
        auto = automation_rates(params)
    if dual is None:
        dual = dual_criteria(params, auto)
    h_alarm, h_noise = human_conditional_rates(params, dual)
    pt, pn = params.p_t, 1.0 - params.p_t

    dist_y = Pmf(
        [pt * auto.p_tp + pn * auto.p_fp, pt * auto.p_fn + pn * auto.p_tn],
        Y_LABELS,
    )
    joint = JointPmf(
        [
            [
                pt * auto.p_tp * h_alarm.p_tp + pn * auto.p_fp * h_alarm.p_fp,
                pt * auto.p_tp * h_alarm.p_fn + pn * auto.p_fp * h_alarm.p_tn,
            ],
            [
                pt * auto.p_fn * h_noise.p_tp + pn * auto.p_tn * h_noise.p_fp,
                pt * auto.p_fn * h_noise.p_fn + pn * auto.p_tn * h_noise.p_tn,
            ],
        ],
        Y_LABELS,
        X_LABELS,
    )
    dist_x = Pmf(
        [
            pt * (auto.p_tp * h_alarm.p_tp + auto.p_fn * h_noise.p_tp)
            + pn * (auto.p_fp * h_alarm.p_fp + auto.p_tn * h_noise.p_fp),
            pt * (auto.p_tp * h_alarm.p_fn + auto.p_fn * h_noise.p_fn)
            + pn * (auto.p_fp * h_alarm.p_tn + auto.p_tn * h_noise.p_tn),
        ],
        X_LABELS,
    )
    return AidedTables(dist_y, joint, dist_x)


def _branch_engagement(params, dual, branch: str) -> float:
    auto = automation_rates(params)
    if branch == "target":
        p_tgt = params.p_t * auto.p_tp
        p_all = p_tgt + (1.0 - params.p_t) * auto.p_fp
        c = dual.c_given_alarm
    else:
        p_tgt = params.p_t * auto.p_fn
        p_all = p_tgt + (1.0 - params.p_t) * auto.p_tn
        c = dual.c_given_noise
    if p_all <= 0:
        raise UnreachableBranchError(branch)
    post = p_tgt / p_all
    rates = outcome_rates(params.d_human, c)
    return post * rates.p_tp + (1.0 - post) * rates.p_fp


def engagement_probability_given_alarm(params: ScenarioParams, dual: DualCriteria | None = None) -> float:
    """P(human engages | automation says target)."""
    dual = dual_criteria(params) if dual is None else dual
    return _branch_engagement(params, dual, "target")


def engagement_probability_given_noise(params: ScenarioParams, dual: DualCriteria | None = None) -> float:
    """P(human engages | automation says noise)."""
    dual = dual_criteria(params) if dual is None else dual
    return _branch_engagement(params, dual, "noise")


def responsibility(params: ScenarioParams, dual: DualCriteria | None = None) -> ResponsibilityReport:
    """Comparative human responsibility for the scenario.

    Raises :class:`~resqu.errors.DegenerateEntropyError` when the human's
    action never varies.
    """
    auto = automation_rates(params)
    if dual is None:
        dual = dual_criteria(params, auto)
    tables = build_tables(params, dual, auto)
    h_alarm, h_noise = human_conditional_rates(params, dual)
    details = {
        "loop_mode": params.loop_mode,
        "automation": {
            "d_prime": params.d_automation,
            "beta": params.beta_automation,
            "cutoff": cutoff_from_beta(params.d_automation, params.beta_automation),
            **auto.as_dict(),
        },
        "human": {
            "d_prime": params.d_human,
            "beta_base": params.beta_human_base,
            "given_alarm": {"beta": dual.beta_given_alarm, "cutoff": dual.c_given_alarm, **h_alarm.as_dict()},
            "given_noise": {"beta": dual.beta_given_noise, "cutoff": dual.c_given_noise, **h_noise.as_dict()},
        },
    }
    return report_from_joint(tables.joint_xy, params=params, tables=tables, details=details)
