"""Deterministic logit-scale math for analyst and audience principle weights.

A person's priority for each principle lives on the log-odds scale: a field
mean plus an individual deviation plus a linear resource effect.  Distances
between an analyst and an audience are componentwise differences of those
log-odds, and everything downstream (success tests, probabilities, planning)
is built on them.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Mapping, Sequence

import numpy as np

# The six default principles, in their fixed catalog order.
DEFAULT_PRINCIPLES = (
    "data-matching",
    "exhaustive",
    "skeptical",
    "second-order",
    "transparent",
    "reproducible",
)

# One coefficient row per principle: resource name -> log-odds per unit.
CoefficientRows = tuple[dict[str, float], ...]


def _as_float_tuple(values, what: str) -> tuple[float, ...]:
    out = tuple(float(v) for v in values)
    for v in out:
        if not math.isfinite(v):
            raise ValueError(f"{what} must be finite, got {v!r}")
    return out


@dataclass(frozen=True)
class PrincipleCatalog:
    """Ordered set of named analysis principles; order defines the index k."""

    names: tuple[str, ...]

    def __post_init__(self):
        names = tuple(str(n) for n in self.names)
        object.__setattr__(self, "names", names)
        if len(names) < 1:
            raise ValueError("catalog needs at least one principle")
        if any(not n for n in names):
            raise ValueError("principle names must be non-empty")
        if len(set(names)) != len(names):
            raise ValueError(f"principle names must be unique, got {names}")

    def __len__(self) -> int:
        return len(self.names)

    @property
    def size(self) -> int:
        return len(self.names)

    @classmethod
    def default(cls) -> "PrincipleCatalog":
        return cls(names=DEFAULT_PRINCIPLES)


@dataclass(frozen=True)
class FieldParams:
    """Per-field conventions: mean log-odds and individual deviation scale."""

    field_id: str
    mean_logits: tuple[float, ...]
    deviation_scale: tuple[float, ...]

    def __post_init__(self):
        object.__setattr__(
            self, "mean_logits", _as_float_tuple(self.mean_logits, "field mean logit")
        )
        object.__setattr__(
            self,
            "deviation_scale",
            _as_float_tuple(self.deviation_scale, "deviation scale"),
        )
        if len(self.mean_logits) != len(self.deviation_scale):
            raise ValueError(
                f"field {self.field_id!r}: mean_logits has length "
                f"{len(self.mean_logits)} but deviation_scale has length "
                f"{len(self.deviation_scale)}"
            )
        if any(s < 0 for s in self.deviation_scale):
            raise ValueError(f"field {self.field_id!r}: deviation_scale must be >= 0")

    @property
    def size(self) -> int:
        return len(self.mean_logits)


@dataclass(frozen=True)
class PersonProfile:
    """One analyst or audience member with a realized deviation draw."""

    role: str
    field_id: str
    deviation: tuple[float, ...]
    resources: dict[str, float] = field(default_factory=dict)
    coefficients: CoefficientRows = ()

    def __post_init__(self):
        if self.role not in ("analyst", "audience"):
            raise ValueError(f"role must be 'analyst' or 'audience', got {self.role!r}")
        object.__setattr__(
            self, "deviation", _as_float_tuple(self.deviation, "deviation")
        )
        object.__setattr__(
            self, "resources", {str(k): float(v) for k, v in self.resources.items()}
        )
        object.__setattr__(
            self,
            "coefficients",
            tuple({str(k): float(v) for k, v in row.items()} for row in self.coefficients),
        )
        for v in self.resources.values():
            if not math.isfinite(v):
                raise ValueError(f"resource values must be finite, got {v!r}")


@dataclass(frozen=True)
class DistanceVector:
    """Per-principle log-odds differences between analyst and audience."""

    d: tuple[float, ...]

    def __post_init__(self):
        object.__setattr__(self, "d", _as_float_tuple(self.d, "distance component"))
        if len(self.d) < 1:
            raise ValueError("distance vector must have at least one component")

    def __len__(self) -> int:
        return len(self.d)

    @property
    def array(self) -> np.ndarray:
        return np.asarray(self.d, dtype=float)

    @classmethod
    def from_array(cls, values) -> "DistanceVector":
        return cls(d=tuple(float(v) for v in np.asarray(values, dtype=float)))

    def __neg__(self) -> "DistanceVector":
        return DistanceVector(d=tuple(-v for v in self.d))


@dataclass(frozen=True)
class WeightVector:
    """Integer principle weights summing to a total budget."""

    w: tuple[int, ...]
    total: int

    def __post_init__(self):
        w = tuple(int(v) for v in self.w)
        object.__setattr__(self, "w", w)
        object.__setattr__(self, "total", int(self.total))
        if self.total < 1:
            raise ValueError(f"total weight must be >= 1, got {self.total}")
        if any(v < 0 for v in w):
            raise ValueError(f"weights must be non-negative, got {w}")
        if sum(w) != self.total:
            raise ValueError(f"weights {w} sum to {sum(w)}, expected total {self.total}")


def logit(p: float) -> float:
    """Log-odds of a probability strictly inside (0, 1)."""
    p = float(p)
    if not (0.0 < p < 1.0):
        raise ValueError(f"logit domain is (0, 1), got {p!r}")
    return math.log(p / (1.0 - p))


def inverse_logit(x: float) -> float:
    """Probability for a finite log-odds value; numerically stable for large |x|."""
    x = float(x)
    if not math.isfinite(x):
        raise ValueError(f"inverse_logit requires a finite value, got {x!r}")
    if x >= 0.0:
        return 1.0 / (1.0 + math.exp(-x))
    e = math.exp(x)
    return e / (1.0 + e)


def resource_effect(
    resources: Mapping[str, float], coefficients: Sequence[Mapping[str, float]]
) -> np.ndarray:
    """Per-principle linear resource contribution, validating key agreement.

    Every coefficient row must use exactly the resource names present; a
    mismatch reports the missing and extra keys.
    """
    res_keys = set(resources)
    out = np.zeros(len(coefficients), dtype=float)
    for k, row in enumerate(coefficients):
        row_keys = set(row)
        if row_keys != res_keys:
            missing = sorted(res_keys - row_keys)
            extra = sorted(row_keys - res_keys)
            raise ValueError(
                f"coefficient row {k} does not match resources: "
                f"missing keys {missing}, extra keys {extra}"
            )
        out[k] = sum(resources[name] * row[name] for name in sorted(row))
    return out


def _field_for(person_field: str, fields: Mapping[str, FieldParams]) -> FieldParams:
    try:
        return fields[person_field]
    except KeyError:
        known = sorted(fields)
        raise ValueError(f"unknown field {person_field!r}; known fields: {known}") from None


def person_logits(person: PersonProfile, fields: Mapping[str, FieldParams]) -> np.ndarray:
    """Realized log-odds vector: field mean + individual deviation + resource effect."""
    fp = _field_for(person.field_id, fields)
    k = fp.size
    if len(person.deviation) != k:
        raise ValueError(
            f"deviation has length {len(person.deviation)}, "
            f"field {person.field_id!r} expects {k}"
        )
    coeffs = person.coefficients if person.coefficients else tuple({} for _ in range(k))
    if len(coeffs) != k:
        raise ValueError(f"coefficients have {len(coeffs)} rows, expected {k}")
    base = np.asarray(fp.mean_logits, dtype=float) + np.asarray(person.deviation, dtype=float)
    return base + resource_effect(person.resources, coeffs)


def expected_logits(
    field_id: str,
    resources: Mapping[str, float],
    coefficients: Sequence[Mapping[str, float]],
    fields: Mapping[str, FieldParams],
) -> np.ndarray:
    """Population-expected log-odds: deviations are mean zero and drop out."""
    fp = _field_for(field_id, fields)
    coeffs = tuple(coefficients) if coefficients else tuple({} for _ in range(fp.size))
    if len(coeffs) != fp.size:
        raise ValueError(f"coefficients have {len(coeffs)} rows, expected {fp.size}")
    return np.asarray(fp.mean_logits, dtype=float) + resource_effect(resources, coeffs)


def pairwise_distance(analyst_logits, audience_logits) -> DistanceVector:
    """Componentwise analyst-minus-audience log-odds difference."""
    a = np.asarray(analyst_logits, dtype=float)
    b = np.asarray(audience_logits, dtype=float)
    if a.shape != b.shape or a.ndim != 1:
        raise ValueError(f"logit vectors must share one shape, got {a.shape} and {b.shape}")
    return DistanceVector.from_array(a - b)


def centered_mean(rows: np.ndarray) -> np.ndarray:
    """Columnwise mean computed as rows[0] + mean(rows - rows[0]).

    Equal rows average to themselves exactly, which the group-of-identical
    reductions require; plain mean can round (e.g. 3 copies of 0.1).
    """
    rows = np.asarray(rows, dtype=float)
    return rows[0] + (rows - rows[0]).mean(axis=0)


def group_distance(analyst_logits, audience_logits_list) -> DistanceVector:
    """Analyst log-odds minus the mean of the audience members' log-odds."""
    a = np.asarray(analyst_logits, dtype=float)
    members = np.atleast_2d(np.asarray(audience_logits_list, dtype=float))
    if members.shape[0] < 1 or members.size == 0:
        raise ValueError("audience list must contain at least one member")
    if members.shape[1] != a.shape[0]:
        raise ValueError(
            f"audience vectors have length {members.shape[1]}, analyst has {a.shape[0]}"
        )
    return DistanceVector.from_array(a - centered_mean(members))


def expected_distance(analyst_spec, audience_spec, fields: Mapping[str, FieldParams]) -> DistanceVector:
    """Expected analyst-audience difference: field means plus resource terms only.

    Accepts any objects carrying field_id / resources / coefficients; realized
    deviations never enter because their population mean is zero.
    """
    a = expected_logits(
        analyst_spec.field_id, analyst_spec.resources, analyst_spec.coefficients, fields
    )
    b = expected_logits(
        audience_spec.field_id, audience_spec.resources, audience_spec.coefficients, fields
    )
    return DistanceVector.from_array(a - b)
