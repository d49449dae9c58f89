"""Equal-variance Gaussian signal detection.

Noise observations are N(-d'/2, 1) and target observations N(+d'/2, 1).
A detector with cutoff ``c`` classifies an observation as a target when it
exceeds ``c``; the likelihood-ratio criterion at the cutoff is
``beta = exp(d' * c)``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import (
    DegeneratePriorError,
    DomainError,
    SingularCutoffError,
    UnreachableBranchError,
    ValidationError,
)

#: Largest accepted sensitivity. Beyond it the Gaussian tails fall below
#: double precision and limits have to be argued analytically.
MAX_D_PRIME = 50.0

_SQRT2 = math.sqrt(2.0)


def _finite(x: float, name: str) -> float:
    x = float(x)
    if not math.isfinite(x):
        raise DomainError(f"{name} must be finite, got {x!r}")
    return x


def check_d_prime(d_prime: float, name: str = "d_prime") -> float:
    d_prime = _finite(d_prime, name)
    if d_prime < 0 or d_prime > MAX_D_PRIME:
        raise ValidationError(f"{name} must be in [0, {MAX_D_PRIME}], got {d_prime!r}")
    return d_prime


def check_probability(p: float, name: str = "p_t") -> float:
    p = _finite(p, name)
    if not 0.0 < p < 1.0:
        raise DegeneratePriorError(f"{name} must be in the open interval (0, 1), got {p!r}")
    return p


def check_positive(x: float, name: str) -> float:
    x = _finite(x, name)
    if x <= 0:
        raise ValidationError(f"{name} must be > 0, got {x!r}")
    return x


@dataclass(frozen=True)
class SdtSensor:
    d_prime: float
    beta: float

    def __post_init__(self):
        check_d_prime(self.d_prime)
        check_positive(self.beta, "beta")

    @property
    def cutoff(self) -> float:
        return cutoff_from_beta(self.d_prime, self.beta)

    def rates(self) -> "OutcomeRates":
        return outcome_rates(self.d_prime, self.cutoff)


@dataclass(frozen=True)
class Payoffs:
    """Outcome values: benefits for correct responses, costs for errors."""

    v_tp: float
    v_fn: float
    v_fp: float
    v_tn: float

    def __post_init__(self):
        for name in ("v_tp", "v_fn", "v_fp", "v_tn"):
            _finite(getattr(self, name), name)
        if not self.v_tp > self.v_fn:
            raise ValidationError(f"payoffs need v_tp > v_fn, got {self.v_tp} <= {self.v_fn}")
        if not self.v_tn > self.v_fp:
            raise ValidationError(f"payoffs need v_tn > v_fp, got {self.v_tn} <= {self.v_fp}")


@dataclass(frozen=True)
class OutcomeRates:
    """Conditional response rates: TP/FN given target, FP/TN given noise."""

    p_tp: float
    p_fn: float
    p_fp: float
    p_tn: float

    def __post_init__(self):
        for name in ("p_tp", "p_fn", "p_fp", "p_tn"):
            v = getattr(self, name)
            if not 0.0 <= v <= 1.0:
                raise ValidationError(f"{name} must be in [0, 1], got {v!r}")
        if abs(self.p_tp + self.p_fn - 1.0) > 1e-12:
            raise ValidationError("p_tp + p_fn must equal 1")
        if abs(self.p_fp + self.p_tn - 1.0) > 1e-12:
            raise ValidationError("p_fp + p_tn must equal 1")

    @classmethod
    def from_hit_false_alarm(cls, p_tp: float, p_fp: float) -> "OutcomeRates":
        return cls(p_tp, 1.0 - p_tp, p_fp, 1.0 - p_fp)

    def as_dict(self) -> dict[str, float]:
        return {"p_tp": self.p_tp, "p_fn": self.p_fn, "p_fp": self.p_fp, "p_tn": self.p_tn}


def std_normal_cdf(x: float) -> float:
    """Standard normal CDF, accurate in both tails."""
    x = _finite(x, "x")
    return 0.5 * math.erfc(-x / _SQRT2)


def cutoff_from_beta(d_prime: float, beta: float) -> float:
    """Observation-scale cutoff ``ln(beta) / d'``."""
    d_prime = check_d_prime(d_prime)
    beta = check_positive(beta, "beta")
    if d_prime == 0:
        raise SingularCutoffError("cutoff is undefined for d_prime = 0")
    return math.log(beta) / d_prime


def _cutoff_from_log_beta(d_prime: float, log_beta: float) -> float:
    if d_prime == 0:
        raise SingularCutoffError("cutoff is undefined for d_prime = 0")
    return log_beta / d_prime


def outcome_rates(d_prime: float, c: float) -> OutcomeRates:
    """TP/FN/FP/TN rates of a detector with sensitivity ``d'`` and cutoff ``c``.

    ``c = -inf`` (always engage) and ``c = +inf`` (never engage) are
    accepted as limit cases; NaN is rejected.
    """
    d_prime = check_d_prime(d_prime)
    c = float(c)
    if math.isnan(c):
        raise DomainError("cutoff must not be NaN")
    if math.isinf(c):
        engage = 1.0 if c < 0 else 0.0
        return OutcomeRates(engage, 1.0 - engage, engage, 1.0 - engage)
    half = 0.5 * d_prime
    # each tail computed directly so small rates keep full precision
    return OutcomeRates(
        p_tp=std_normal_cdf(half - c),
        p_fn=std_normal_cdf(c - half),
        p_fp=std_normal_cdf(-half - c),
        p_tn=std_normal_cdf(c + half),
    )


def optimal_beta(p_t: float, v_ratio: float) -> float:
    """Expected-value maximizing criterion ``((1 - p_t) / p_t) * v_ratio``."""
    p_t = check_probability(p_t)
    v_ratio = check_positive(v_ratio, "v_ratio")
    return (1.0 - p_t) / p_t * v_ratio


def v_ratio(p: Payoffs) -> float:
    """Cost-benefit ratio ``(v_tn - v_fp) / (v_tp - v_fn)``."""
    if not isinstance(p, Payoffs):
        p = Payoffs(*p)
    return (p.v_tn - p.v_fp) / (p.v_tp - p.v_fn)


def posterior_target_given_alarm(p_t: float, rates: OutcomeRates) -> float:
    p_t = check_probability(p_t)
    hit = p_t * rates.p_tp
    denom = hit + (1.0 - p_t) * rates.p_fp
    if denom <= 0:
        raise UnreachableBranchError("target", "automation never classifies an entity as target")
    return hit / denom


def posterior_target_given_noise(p_t: float, rates: OutcomeRates) -> float:
    p_t = check_probability(p_t)
    miss = p_t * rates.p_fn
    denom = miss + (1.0 - p_t) * rates.p_tn
    if denom <= 0:
        raise UnreachableBranchError("noise", "automation never classifies an entity as noise")
    return miss / denom


def log_optimal_beta_from_odds(log_target_odds: float, v_ratio: float) -> float:
    """``ln`` of the optimal criterion given the log odds of a target."""
    return -log_target_odds + math.log(v_ratio)


def d_effective_max(d_human: float, d_automation: float) -> float:
    """Upper bound on the combined sensitivity of two independent detectors."""
    d_human = _finite(d_human, "d_human")
    d_automation = _finite(d_automation, "d_automation")
    if d_human < 0 or d_automation < 0:
        raise ValidationError("sensitivities must be non-negative")
    return math.hypot(d_human, d_automation)
