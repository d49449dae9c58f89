"""Seeded Monte Carlo simulation of the aided-decision scenario.

Sampling algorithm (fixed; counts are reproducible from ``(params, seed)``):

* Generator: Philox4x64-10 with 128-bit key ``seed`` (low word = seed,
  high word = 0) and counter starting at zero, via :class:`numpy.random.Philox`.
* Uniforms: each raw 64-bit output ``r`` maps to ``((r >> 11) + 0.5) * 2**-53``,
  which lies strictly inside (0, 1).
* Trials are processed in chunks of ``CHUNK`` (the last may be shorter). For a
  chunk of ``n`` trials, ``3n`` raw words are drawn: the first ``n`` decide the
  entity (target when ``u < p_t``), the next ``n`` are the automation's noise
  and the last ``n`` the human's noise.
* Gaussian noise is ``ndtri(u)``; observations are ``noise +/- d'/2``.
* Automation says target when its observation exceeds its cutoff; the human
  engages when its observation exceeds the cutoff of the automation's branch.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.special import ndtri

from . import infotheory as it
from .aided_decision import (
    X_LABELS,
    Y_LABELS,
    ScenarioParams,
    build_tables,
    dual_criteria,
    responsibility,
)
from .errors import DegenerateEntropyError, DegenerateSampleError, ValidationError
from .infotheory import JointPmf
from .sdt import cutoff_from_beta

GENERATOR_ID = "philox4x64-10/key=seed/u=((r>>11)+0.5)*2^-53/ndtri/chunk=1048576"
CHUNK = 1 << 20
_U_SCALE = 2.0**-53


@dataclass(frozen=True)
class SimConfig:
    trials: int
    seed: int = 0

    def __post_init__(self):
        if isinstance(self.trials, bool) or int(self.trials) != self.trials or self.trials < 1:
            raise ValidationError(f"trials must be an integer >= 1, got {self.trials!r}")
        if int(self.seed) != self.seed or not 0 <= self.seed < 2**64:
            raise ValidationError(f"seed must be an unsigned 64-bit integer, got {self.seed!r}")


@dataclass(frozen=True)
class SimResult:
    counts: np.ndarray
    empirical_joint: JointPmf
    empirical_resp: float
    analytic_resp: float
    max_cell_abs_error: float
    empirical_resp_miller_madow: float
    trials: int
    seed: int
    generator: str = GENERATOR_ID
    analytic_joint: JointPmf | None = field(default=None, repr=False)

    def to_dict(self) -> dict:
        return {
            "trials": self.trials,
            "seed": self.seed,
            "generator": self.generator,
            "counts": {
                y: {x: int(self.counts[i, j]) for j, x in enumerate(X_LABELS)}
                for i, y in enumerate(Y_LABELS)
            },
            "empirical_joint": self.empirical_joint.as_dict(),
            "empirical_resp": self.empirical_resp,
            "empirical_resp_miller_madow": self.empirical_resp_miller_madow,
            "analytic_resp": self.analytic_resp,
            "max_cell_abs_error": self.max_cell_abs_error,
        }


def _uniforms(bitgen: np.random.Philox, n: int) -> np.ndarray:
    raw = np.asarray(bitgen.random_raw(n), dtype=np.uint64)
    return ((raw >> np.uint64(11)).astype(np.float64) + 0.5) * _U_SCALE


def sample_counts(params: ScenarioParams, cfg: SimConfig) -> np.ndarray:
    """2x2 tally over (automation target/noise) x (human engage/abort)."""
    c_auto = cutoff_from_beta(params.d_automation, params.beta_automation)
    dual = dual_criteria(params)
    half_a = 0.5 * params.d_automation
    half_h = 0.5 * params.d_human
    bitgen = np.random.Philox(key=int(cfg.seed))
    counts = np.zeros((2, 2), dtype=np.int64)
    remaining = int(cfg.trials)
    while remaining:
        n = min(remaining, CHUNK)
        u = _uniforms(bitgen, 3 * n)
        is_target = u[:n] < params.p_t
        sign = np.where(is_target, 1.0, -1.0)
        alarm = ndtri(u[n:2 * n]) + sign * half_a > c_auto
        cut = np.where(alarm, dual.c_given_alarm, dual.c_given_noise)
        engage = ndtri(u[2 * n:]) + sign * half_h > cut
        # row 0 = target/alarm, col 0 = engage
        counts += np.bincount(2 * (~alarm) + (~engage), minlength=4).reshape(2, 2)
        remaining -= n
    return counts


def _plugin_entropy(counts: np.ndarray, miller_madow: bool) -> float:
    n = counts.sum()
    h = it.entropy(counts.ravel() / n)
    if miller_madow:
        k = int(np.count_nonzero(counts))
        h += (k - 1) / (2.0 * n * math.log(2.0))
    return h


def empirical_responsibility(counts, miller_madow: bool = False) -> float:
    """Plug-in H(X|Y)/H(X) from a 2-D count table (Y rows, X columns).

    The plug-in estimator is biased low; ``miller_madow=True`` adds the
    ``(k - 1) / (2 N ln 2)`` correction to each entropy for comparison.
    """
    counts = np.asarray(counts, dtype=np.int64)
    if counts.ndim != 2 or counts.sum() < 1:
        raise ValidationError("counts must be a 2-D table with at least one trial")
    if np.any(counts < 0):
        raise ValidationError("counts must be non-negative")
    if np.count_nonzero(counts.sum(axis=0)) < 2:
        raise DegenerateSampleError("every trial fell in one X category; responsibility undefined")
    if not miller_madow:
        try:
            return it.responsibility_ratio(JointPmf.from_counts(counts))
        except DegenerateEntropyError as exc:  # pragma: no cover - guarded above
            raise DegenerateSampleError(str(exc)) from exc
    h_xy = _plugin_entropy(counts, True)
    h_y = _plugin_entropy(counts.sum(axis=1), True)
    h_x = _plugin_entropy(counts.sum(axis=0), True)
    return float(min(max((h_xy - h_y) / h_x, 0.0), 1.0))


def simulate_aws(params: ScenarioParams, cfg: SimConfig) -> SimResult:
    counts = sample_counts(params, cfg)
    emp = JointPmf.from_counts(counts, Y_LABELS, X_LABELS)
    analytic = build_tables(params).joint_xy
    return SimResult(
        counts=counts,
        empirical_joint=emp,
        empirical_resp=empirical_responsibility(counts),
        analytic_resp=responsibility(params).resp,
        max_cell_abs_error=float(np.max(np.abs(emp.cells - analytic.cells))),
        empirical_resp_miller_madow=empirical_responsibility(counts, miller_madow=True),
        trials=int(cfg.trials),
        seed=int(cfg.seed),
        analytic_joint=analytic,
    )


def binomial_envelope(p: np.ndarray, trials: int, sigmas: float = 4.0) -> np.ndarray:
    """Half-width ``sigmas * sqrt(p (1 - p) / trials)`` of a cell-frequency band."""
    p = np.asarray(p, dtype=float)
    return sigmas * np.sqrt(p * (1.0 - p) / trials)
