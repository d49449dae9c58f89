"""Discrete information-theory primitives.

All entropies are in bits and use the convention ``0 * log2(0) = 0``,
implemented by skipping zero cells.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import DegenerateEntropyError, ValidationError

#: Inputs whose total deviates from 1 by at most this much are renormalized.
NORMALIZATION_TOL = 1e-9

ROW = "row"
COL = "col"


def _normalized(values, what: str) -> np.ndarray:
    arr = np.array(values, dtype=float)
    if not np.all(np.isfinite(arr)):
        raise ValidationError(f"{what}: probabilities must be finite")
    if np.any(arr < 0):
        raise ValidationError(f"{what}: probabilities must be non-negative, got min {arr.min()!r}")
    total = math.fsum(arr.ravel())
    if abs(total - 1.0) > NORMALIZATION_TOL:
        raise ValidationError(f"{what}: probabilities sum to {total!r}, expected 1")
    if total != 1.0:
        arr = arr / total
    arr.flags.writeable = False
    return arr


def _default_labels(n: int) -> tuple[str, ...]:
    return tuple(str(i) for i in range(n))


def _check_labels(labels: Sequence[str], n: int, what: str) -> tuple[str, ...]:
    labels = tuple(str(x) for x in labels)
    if len(labels) != n:
        raise ValidationError(f"{what}: {len(labels)} labels for {n} probabilities")
    if len(set(labels)) != n:
        raise ValidationError(f"{what}: labels must be unique, got {labels}")
    return labels


@dataclass(frozen=True, eq=False)
class Pmf:
    """Probability mass function over named categories."""

    labels: tuple[str, ...]
    probs: np.ndarray

    def __init__(self, probs, labels: Sequence[str] | None = None):
        arr = _normalized(probs, "Pmf")
        if arr.ndim != 1 or arr.size == 0:
            raise ValidationError("Pmf: probabilities must be a non-empty 1-D sequence")
        labels = _default_labels(arr.size) if labels is None else labels
        object.__setattr__(self, "labels", _check_labels(labels, arr.size, "Pmf"))
        object.__setattr__(self, "probs", arr)

    def __len__(self) -> int:
        return self.probs.size

    def __getitem__(self, label: str) -> float:
        return float(self.probs[self.labels.index(label)])

    def as_dict(self) -> dict[str, float]:
        return {lab: float(p) for lab, p in zip(self.labels, self.probs)}

    def __repr__(self) -> str:
        return f"Pmf({self.as_dict()!r})"


@dataclass(frozen=True, eq=False)
class JointPmf:
    """Two-way joint probability table with labelled rows and columns."""

    row_labels: tuple[str, ...]
    col_labels: tuple[str, ...]
    cells: np.ndarray

    def __init__(
        self,
        cells,
        row_labels: Sequence[str] | None = None,
        col_labels: Sequence[str] | None = None,
    ):
        arr = _normalized(cells, "JointPmf")
        if arr.ndim != 2 or arr.size == 0:
            raise ValidationError("JointPmf: cells must be a non-empty 2-D table")
        nr, nc = arr.shape
        row_labels = _default_labels(nr) if row_labels is None else row_labels
        col_labels = _default_labels(nc) if col_labels is None else col_labels
        object.__setattr__(self, "row_labels", _check_labels(row_labels, nr, "JointPmf rows"))
        object.__setattr__(self, "col_labels", _check_labels(col_labels, nc, "JointPmf cols"))
        object.__setattr__(self, "cells", arr)

    @classmethod
    def from_counts(cls, counts, row_labels=None, col_labels=None) -> "JointPmf":
        counts = np.asarray(counts, dtype=float)
        total = counts.sum()
        if total <= 0:
            raise ValidationError("JointPmf.from_counts: counts must sum to a positive number")
        return cls(counts / total, row_labels, col_labels)

    @property
    def shape(self) -> tuple[int, int]:
        return self.cells.shape

    def row_marginal(self) -> Pmf:
        return Pmf(self.cells.sum(axis=1), self.row_labels)

    def col_marginal(self) -> Pmf:
        return Pmf(self.cells.sum(axis=0), self.col_labels)

    def marginal(self, axis: str) -> Pmf:
        return self.row_marginal() if _axis(axis) == ROW else self.col_marginal()

    def transpose(self) -> "JointPmf":
        return JointPmf(self.cells.T, self.col_labels, self.row_labels)

    def as_dict(self) -> dict[str, dict[str, float]]:
        return {
            r: {c: float(self.cells[i, j]) for j, c in enumerate(self.col_labels)}
            for i, r in enumerate(self.row_labels)
        }

    def __repr__(self) -> str:
        return f"JointPmf({self.as_dict()!r})"


def _axis(axis: str) -> str:
    if axis in ("row", "rows", 0):
        return ROW
    if axis in ("col", "cols", "column", "columns", 1):
        return COL
    raise ValidationError(f"axis must be 'row' or 'col', got {axis!r}")


def _as_pmf(p) -> Pmf:
    return p if isinstance(p, Pmf) else Pmf(p)


def _as_joint(j) -> JointPmf:
    return j if isinstance(j, JointPmf) else JointPmf(j)


def _h(probs) -> float:
    return -math.fsum(p * math.log2(p) for p in np.ravel(probs) if p > 0)


def entropy(p: Pmf | Sequence[float]) -> float:
    """Shannon entropy of a distribution, in bits."""
    return _h(_as_pmf(p).probs)


def joint_entropy(j: JointPmf) -> float:
    """Entropy of the flattened cell distribution, in bits."""
    return _h(_as_joint(j).cells)


def conditional_entropy(j: JointPmf, conditioning_axis: str = ROW) -> float:
    """Entropy of one axis given the other.

    ``conditioning_axis="row"`` returns H(col variable | row variable).
    Evaluated term by term as ``-sum p(a,b) log2 p(a,b)/p(b)``, which equals
    ``joint_entropy - entropy(conditioning marginal)`` but stays non-negative
    and keeps full relative precision when the result is tiny.
    """
    j = _as_joint(j)
    cells = j.cells if _axis(conditioning_axis) == ROW else j.cells.T
    terms = []
    for row in cells:
        p_cond = math.fsum(row)
        if p_cond <= 0:
            continue
        terms.extend(p * math.log2(p_cond / p) for p in row if p > 0)
    return math.fsum(terms)


def mutual_information(j: JointPmf) -> float:
    """I(row; col) = H(row) + H(col) - H(row, col), in bits."""
    j = _as_joint(j)
    mi = math.fsum(
        [_h(j.cells.sum(axis=1)), _h(j.cells.sum(axis=0)), -joint_entropy(j)]
    )
    if -1e-12 <= mi < 0:
        return 0.0
    return mi


def theil_u(j: JointPmf, target_axis: str = ROW) -> float:
    """Theil's uncertainty coefficient U(target | other) = I / H(target)."""
    j = _as_joint(j)
    h_target = entropy(j.marginal(target_axis))
    if h_target <= 0:
        raise DegenerateEntropyError(
            f"theil_u: target ({_axis(target_axis)}) marginal has zero entropy",
            h_denominator=h_target,
        )
    return min(max(mutual_information(j) / h_target, 0.0), 1.0)


def responsibility_ratio(j: JointPmf) -> float:
    """H(X | Y) / H(X) with Y on the rows and X on the columns.

    Raises :class:`DegenerateEntropyError` when the column variable is
    constant; the ratio is undefined there.
    """
    j = _as_joint(j)
    h_x = entropy(j.col_marginal())
    h_x_given_y = conditional_entropy(j, ROW)
    if h_x <= 0:
        raise DegenerateEntropyError(
            f"responsibility undefined: H(X) = {h_x!r}, H(X|Y) = {h_x_given_y!r}",
            h_denominator=h_x,
            h_numerator=h_x_given_y,
        )
    return min(h_x_given_y / h_x, 1.0)
