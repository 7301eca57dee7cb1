"""Seeded randomness: deviation draws, simplex conversion, weight sampling.

All entropy flows from a single 64-bit seed. Every sampled entity gets its own
named sub-stream derived from (seed, label), so adding or reordering entities
never perturbs anyone else's draws.
"""

from __future__ import annotations

import hashlib
import math
from dataclasses import dataclass, field
from typing import Mapping

import numpy as np

from .model import CoefficientRows, FieldParams, PersonProfile, WeightVector, inverse_logit

_SIMPLEX_TOL = 1e-9


def derive_stream(seed: int, label: str) -> np.random.Generator:
    """Independent generator for (seed, label); bit-identical across runs.

    The label is folded into the seed material through SHA-256 so that
    labels of any shape map to well-spread entropy words.
    """
    digest = hashlib.sha256(label.encode("utf-8")).digest()
    words = [int.from_bytes(digest[i : i + 4], "little") for i in range(0, 16, 4)]
    return np.random.default_rng(np.random.SeedSequence([int(seed), *words]))


@dataclass(frozen=True)
class RngSeed:
    """Root seed plus a stream label naming one consumer of randomness."""

    seed: int
    stream_label: str = ""

    def __post_init__(self):
        seed = int(self.seed)
        if not (0 <= seed < 2**64):
            raise ValueError(f"seed must be a 64-bit unsigned integer, got {seed}")
        object.__setattr__(self, "seed", seed)

    def stream(self) -> np.random.Generator:
        return derive_stream(self.seed, self.stream_label)

    def child(self, label: str) -> "RngSeed":
        suffix = f"{self.stream_label}/{label}" if self.stream_label else label
        return RngSeed(seed=self.seed, stream_label=suffix)


@dataclass(frozen=True)
class DeviationSpec:
    """Mean-zero individual deviation distribution with per-principle scale.

    The uniform variant spans +/- scale*sqrt(3) so its variance matches the
    normal variant's scale**2.
    """

    scale: tuple[float, ...]
    distribution: str = "normal"

    def __post_init__(self):
        if self.distribution not in ("normal", "uniform"):
            raise ValueError(
                f"distribution must be 'normal' or 'uniform', got {self.distribution!r}"
            )
        scale = tuple(float(s) for s in self.scale)
        object.__setattr__(self, "scale", scale)
        if any(not math.isfinite(s) or s < 0 for s in scale):
            raise ValueError(f"deviation scale must be finite and >= 0, got {scale}")

    @property
    def size(self) -> int:
        return len(self.scale)

    @classmethod
    def zero(cls, k: int) -> "DeviationSpec":
        return cls(scale=(0.0,) * k)


@dataclass(frozen=True)
class PopulationSpec:
    """Population an analyst or audience member is drawn from."""

    field_id: str
    deviation: DeviationSpec
    resources: dict[str, float] = field(default_factory=dict)
    coefficients: CoefficientRows = ()

    def __post_init__(self):
        object.__setattr__(
            self, "resources", {str(k): float(v) for k, v in self.resources.items()}
        )
        object.__setattr__(
            self,
            "coefficients",
            tuple({str(k): float(v) for k, v in row.items()} for row in self.coefficients),
        )


def sample_deviation(spec: DeviationSpec, rng: np.random.Generator) -> np.ndarray:
    """One deviation vector; zero scale yields exact zeros."""
    return sample_deviation_matrix(spec, rng, 1)[0]


def sample_deviation_matrix(
    spec: DeviationSpec, rng: np.random.Generator, m: int
) -> np.ndarray:
    """(m, K) matrix of independent deviation draws, one row per replicate.

    Rows are a stable prefix of the stream: row r is the same for any m > r,
    so replicate r's draws depend only on (stream, r).
    """
    if m < 1:
        raise ValueError(f"need at least one draw, got {m}")
    scale = np.asarray(spec.scale, dtype=float)
    if spec.distribution == "normal":
        return rng.standard_normal((m, scale.size)) * scale
    half_width = scale * math.sqrt(3.0)
    return rng.uniform(-1.0, 1.0, size=(m, scale.size)) * half_width


def logits_to_simplex(logits) -> np.ndarray:
    """Normalized inverse-logits: positive components summing to one.

    Reconciles the per-principle log-odds models with the requirement that
    allocation probabilities sum to 1; monotone in each component.
    """
    x = np.asarray(logits, dtype=float)
    if x.ndim != 1 or x.size < 1:
        raise ValueError("logits must be a non-empty one-dimensional vector")
    probs = np.array([inverse_logit(v) for v in x])
    return probs / probs.sum()


def sample_weights(total: int, probs, rng: np.random.Generator) -> WeightVector:
    """Multinomial integer weights with the given total budget."""
    total = int(total)
    if total < 1:
        raise ValueError(f"total must be >= 1, got {total}")
    p = np.asarray(probs, dtype=float)
    if abs(p.sum() - 1.0) > _SIMPLEX_TOL:
        raise ValueError(f"probabilities sum to {p.sum()!r}, expected 1 within {_SIMPLEX_TOL}")
    if (p < 0).any():
        raise ValueError("probabilities must be non-negative")
    draw = rng.multinomial(total, p)
    return WeightVector(w=tuple(int(v) for v in draw), total=total)


def sample_person(
    role: str,
    pop: PopulationSpec,
    fields: Mapping[str, FieldParams],
    rng: np.random.Generator,
) -> PersonProfile:
    """Draw one person: fresh deviation, field/resources/coefficients copied."""
    if pop.field_id not in fields:
        known = sorted(fields)
        raise ValueError(f"unknown field {pop.field_id!r}; known fields: {known}")
    k = fields[pop.field_id].size
    if pop.deviation.size != k:
        raise ValueError(
            f"deviation spec has length {pop.deviation.size}, "
            f"field {pop.field_id!r} expects {k}"
        )
    deviation = sample_deviation(pop.deviation, rng)
    return PersonProfile(
        role=role,
        field_id=pop.field_id,
        deviation=tuple(float(v) for v in deviation),
        resources=dict(pop.resources),
        coefficients=pop.coefficients,
    )
