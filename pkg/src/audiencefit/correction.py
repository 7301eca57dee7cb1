"""Audience correction: shift analyst log-odds toward audience preferences.

The correction degree rho interpolates linearly between no adjustment and full
adoption of the target, optionally clamped per principle, and the corrected
priorities can be turned back into an integer weight allocation for
presentation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np

from .model import DistanceVector, FieldParams, WeightVector, centered_mean, expected_logits
from .sampling import PopulationSpec, logits_to_simplex

TARGET_GROUP_MEAN = "group-mean"
TARGET_REALIZED = "realized"


@dataclass(frozen=True)
class CorrectionBounds:
    """Optional per-principle clamps on the applied adjustment."""

    lower: tuple[float, ...] | None = None
    upper: tuple[float, ...] | None = None

    def __post_init__(self):
        for name in ("lower", "upper"):
            val = getattr(self, name)
            if val is not None:
                object.__setattr__(self, name, tuple(float(v) for v in val))
        if self.lower is not None and self.upper is not None:
            if len(self.lower) != len(self.upper):
                raise ValueError("bound vectors must have equal length")
            for lo, hi in zip(self.lower, self.upper):
                if lo > hi:
                    raise ValueError(f"bound min {lo} exceeds max {hi}")

    def clamp(self, values: np.ndarray) -> np.ndarray:
        lo = -np.inf if self.lower is None else np.asarray(self.lower, dtype=float)
        hi = np.inf if self.upper is None else np.asarray(self.upper, dtype=float)
        return np.clip(values, lo, hi)

    def is_unbounded(self) -> bool:
        return self.lower is None and self.upper is None


@dataclass(frozen=True)
class CorrectionPlan:
    """How far (rho) and toward which audience quantity to correct."""

    rho: float
    target: str = TARGET_GROUP_MEAN
    bounds: CorrectionBounds | None = None

    def __post_init__(self):
        object.__setattr__(self, "rho", float(self.rho))
        if not (0.0 <= self.rho <= 1.0):
            raise ValueError(f"rho must lie in [0, 1], got {self.rho}")
        if self.target not in (TARGET_GROUP_MEAN, TARGET_REALIZED):
            raise ValueError(
                f"target must be {TARGET_GROUP_MEAN!r} or {TARGET_REALIZED!r}, "
                f"got {self.target!r}"
            )


@dataclass(frozen=True)
class CorrectedProfile:
    """Original and corrected analyst log-odds plus the remaining mismatch."""

    original_logits: tuple[float, ...]
    target_logits: tuple[float, ...]
    corrected_logits: tuple[float, ...]
    correction: tuple[float, ...]
    residual_expected_distance: DistanceVector

    @property
    def sup_norm_before(self) -> float:
        a = np.asarray(self.original_logits) - np.asarray(self.target_logits)
        return float(np.abs(a).max())

    @property
    def sup_norm_after(self) -> float:
        return float(np.abs(self.residual_expected_distance.array).max())


def correct_toward(analyst_logits, target_logits, plan: CorrectionPlan) -> CorrectedProfile:
    """Move analyst log-odds a fraction rho of the way to the target.

    With rho = 1 and no binding bounds the corrected vector IS the target,
    assigned componentwise so the residual is exactly zero.
    """
    a = np.asarray(analyst_logits, dtype=float)
    t = np.asarray(target_logits, dtype=float)
    if a.shape != t.shape or a.ndim != 1:
        raise ValueError(f"logit vectors must share one shape, got {a.shape} and {t.shape}")
    raw = plan.rho * (t - a)
    bounds = plan.bounds if plan.bounds is not None else CorrectionBounds()
    applied = bounds.clamp(raw)
    corrected = a + applied
    # Full unclamped correction must land on the target exactly, not within
    # rounding of it: potential success at zero tolerance depends on it.
    if plan.rho == 1.0:
        exact = applied == raw
        corrected = np.where(exact, t, corrected)
        applied = np.where(exact, t - a, applied)
    residual = corrected - t
    return CorrectedProfile(
        original_logits=tuple(float(v) for v in a),
        target_logits=tuple(float(v) for v in t),
        corrected_logits=tuple(float(v) for v in corrected),
        correction=tuple(float(v) for v in applied),
        residual_expected_distance=DistanceVector.from_array(residual),
    )


def optimize_for_group(
    analyst_logits,
    audience_populations: Sequence[PopulationSpec],
    plan: CorrectionPlan,
    fields: Mapping[str, FieldParams],
) -> CorrectedProfile:
    """Correct toward the mean of the audience populations' expected log-odds."""
    if len(audience_populations) < 1:
        raise ValueError("need at least one audience population")
    member_expected = np.array(
        [
            expected_logits(p.field_id, p.resources, p.coefficients, fields)
            for p in audience_populations
        ]
    )
    return correct_toward(analyst_logits, centered_mean(member_expected), plan)


def allocate_weights(total: int, corrected_logits) -> WeightVector:
    """Integer weights tracking the simplex proportions of the given log-odds.

    Largest-remainder rounding: floor everything, then hand the leftover units
    to the largest fractional remainders, ties going to the lowest index.
    Every component ends strictly within one unit of its real-valued target.
    """
    total = int(total)
    if total < 1:
        raise ValueError(f"total must be >= 1, got {total}")
    probs = logits_to_simplex(corrected_logits)
    targets = total * probs
    base = np.floor(targets).astype(int)
    leftover = total - int(base.sum())
    fractions = targets - base
    order = np.argsort(-fractions, kind="stable")
    weights = base.copy()
    for idx in order[:leftover]:
        weights[idx] += 1
    return WeightVector(w=tuple(int(v) for v in weights), total=total)


def residual_is_zero(profile: CorrectedProfile, tol: float = 0.0) -> bool:
    """Convenience check used by planning flows and tests."""
    return profile.sup_norm_after <= tol


def interpolation_residual(analyst_logits, target_logits, rho: float) -> np.ndarray:
    """Reference residual (1 - rho) * (analyst - target) for unbounded plans."""
    a = np.asarray(analyst_logits, dtype=float)
    t = np.asarray(target_logits, dtype=float)
    if math.isnan(rho) or not (0.0 <= rho <= 1.0):
        raise ValueError(f"rho must lie in [0, 1], got {rho}")
    return (1.0 - rho) * (a - t)
