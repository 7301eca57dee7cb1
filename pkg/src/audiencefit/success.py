"""Success definitions and success-probability computation.

Strong success bounds the largest per-principle mismatch, weak success bounds
a size-averaged Lp norm of the mismatches, and potential success asks whether
the expected mismatch vanishes. The group forms test the analyst against the
audience mean. Probabilities of strong/weak success under random individual
deviations come from Monte Carlo, with an exact product-of-normal-CDFs route
available when all deviations are normal.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np

from .model import (
    DistanceVector,
    FieldParams,
    PersonProfile,
    centered_mean,
    expected_logits,
    group_distance,
    person_logits,
)
from .sampling import DeviationSpec, derive_stream, sample_deviation_matrix

MIN_REPLICATES = 100


@dataclass(frozen=True)
class SuccessCriteria:
    """Thresholds for the three success tests, all on the log-odds scale.

    p may be math.inf, in which case the weak test coincides with the strong
    one. potential_tolerance absorbs floating-point residue in the expected
    distance; zero demands exact cancellation.
    """

    epsilon: float
    p: float = 2.0
    potential_tolerance: float = 1e-9

    def __post_init__(self):
        object.__setattr__(self, "epsilon", float(self.epsilon))
        object.__setattr__(self, "p", float(self.p))
        object.__setattr__(self, "potential_tolerance", float(self.potential_tolerance))
        if not (self.epsilon > 0):
            raise ValueError(f"epsilon must be > 0, got {self.epsilon}")
        if not (self.p >= 1):
            raise ValueError(f"p must be >= 1 (or inf), got {self.p}")
        if self.potential_tolerance < 0:
            raise ValueError(
                f"potential_tolerance must be >= 0, got {self.potential_tolerance}"
            )


@dataclass(frozen=True)
class SuccessReport:
    """Outcome of the three tests for one analyst-audience constellation."""

    distance: DistanceVector
    strong: bool
    weak: bool
    potential: bool
    sup_norm: float
    lp_norm: float
    group_extrapolated: bool = False


@dataclass(frozen=True)
class ProbabilityEstimate:
    """Success probability with its sampling error (zero when exact)."""

    estimate: float
    std_error: float
    replicates: int
    method: str

    def __post_init__(self):
        if not (0.0 <= self.estimate <= 1.0):
            raise ValueError(f"estimate must lie in [0, 1], got {self.estimate}")
        if self.std_error < 0:
            raise ValueError(f"std_error must be >= 0, got {self.std_error}")
        if self.replicates < 1:
            raise ValueError(f"replicates must be >= 1, got {self.replicates}")
        if self.method not in ("monte-carlo", "closed-form"):
            raise ValueError(f"unknown method {self.method!r}")


def _dvec(d) -> np.ndarray:
    if isinstance(d, DistanceVector):
        return d.array
    return np.asarray(d, dtype=float)


def sup_norm(d) -> float:
    """Largest absolute component."""
    return float(np.abs(_dvec(d)).max())


def mean_lp_norm(d, p: float) -> float:
    """Size-averaged Lp norm: ((1/K) sum |d_k|^p)^(1/p); p=inf gives the sup.

    The largest component is factored out before exponentiation so large p
    cannot overflow.
    """
    p = float(p)
    if not (p >= 1):
        raise ValueError(f"p must be >= 1 (or inf), got {p}")
    a = np.abs(_dvec(d))
    if math.isinf(p):
        return float(a.max())
    m = float(a.max())
    if m == 0.0:
        return 0.0
    return m * float(np.mean((a / m) ** p)) ** (1.0 / p)


def strong_success(d, eps: float) -> bool:
    """Every per-principle mismatch strictly below eps."""
    eps = float(eps)
    if not (eps > 0):
        raise ValueError(f"epsilon must be > 0, got {eps}")
    return sup_norm(d) < eps


def weak_success(d, eps: float, p: float) -> bool:
    """Size-averaged Lp norm of the mismatches strictly below eps."""
    eps = float(eps)
    if not (eps > 0):
        raise ValueError(f"epsilon must be > 0, got {eps}")
    return mean_lp_norm(d, p) < eps


def potential_success(expected_d, tau: float) -> bool:
    """Expected mismatch zero, up to the tolerance tau."""
    tau = float(tau)
    if tau < 0:
        raise ValueError(f"tolerance must be >= 0, got {tau}")
    return sup_norm(expected_d) <= tau


def evaluate_success(
    distance: DistanceVector,
    expected: DistanceVector,
    criteria: SuccessCriteria,
    group_extrapolated: bool = False,
) -> SuccessReport:
    """Apply all three tests to a realized and an expected distance vector."""
    return SuccessReport(
        distance=distance,
        strong=strong_success(distance, criteria.epsilon),
        weak=weak_success(distance, criteria.epsilon, criteria.p),
        potential=potential_success(expected, criteria.potential_tolerance),
        sup_norm=sup_norm(distance),
        lp_norm=mean_lp_norm(distance, criteria.p),
        group_extrapolated=group_extrapolated,
    )


def group_success_report(
    analyst: PersonProfile,
    audience: Sequence[PersonProfile],
    fields: Mapping[str, FieldParams],
    criteria: SuccessCriteria,
) -> SuccessReport:
    """Success tests against a group: distances use the audience mean.

    The strong/weak group tests extend the pairwise definitions to the group
    distance; with more than one member the report flags them as an
    extrapolation since only the potential form is defined for groups.
    """
    if len(audience) < 1:
        raise ValueError("audience must contain at least one member")
    realized = group_distance(
        person_logits(analyst, fields),
        [person_logits(member, fields) for member in audience],
    )
    analyst_expected = expected_logits(
        analyst.field_id, analyst.resources, analyst.coefficients, fields
    )
    member_expected = np.array(
        [
            expected_logits(m.field_id, m.resources, m.coefficients, fields)
            for m in audience
        ]
    )
    expected = DistanceVector.from_array(analyst_expected - centered_mean(member_expected))
    return evaluate_success(
        realized, expected, criteria, group_extrapolated=len(audience) > 1
    )


@dataclass(frozen=True)
class DistanceDistribution:
    """Distribution of the analyst-audience distance under random deviations.

    center holds the deterministic part of the distance (field means, resource
    terms, and any fixed realized deviations). A None spec marks an entity
    whose deviation is fixed and contributes no randomness.
    """

    center: tuple[float, ...]
    analyst: DeviationSpec | None
    audience: tuple[DeviationSpec | None, ...]

    def __post_init__(self):
        center = tuple(float(v) for v in self.center)
        object.__setattr__(self, "center", center)
        object.__setattr__(self, "audience", tuple(self.audience))
        k = len(center)
        if self.analyst is not None and self.analyst.size != k:
            raise ValueError("analyst deviation spec length does not match center")
        for j, spec in enumerate(self.audience):
            if spec is not None and spec.size != k:
                raise ValueError(f"audience member {j} deviation spec length mismatch")
        if len(self.audience) < 1:
            raise ValueError("audience must contain at least one member")

    @property
    def size(self) -> int:
        return len(self.center)

    def all_normal(self) -> bool:
        """True when every random component is normal (zero scales count)."""
        specs = [self.analyst, *self.audience]
        for spec in specs:
            if spec is None:
                continue
            if spec.distribution != "normal" and any(s > 0 for s in spec.scale):
                return False
        return True

    def total_sd(self) -> np.ndarray:
        """Per-principle standard deviation of the distance around its center."""
        var = np.zeros(self.size, dtype=float)
        if self.analyst is not None:
            var += np.asarray(self.analyst.scale, dtype=float) ** 2
        j = len(self.audience)
        for spec in self.audience:
            if spec is not None:
                var += (np.asarray(spec.scale, dtype=float) / j) ** 2
        return np.sqrt(var)


def sample_distance_matrix(
    dist: DistanceDistribution, seed: int, replicates: int
) -> np.ndarray:
    """(M, K) matrix of distance draws, one independent constellation per row.

    Each entity consumes its own (seed, label)-derived stream, so draws do not
    depend on evaluation order and row r is stable under growing M.
    """
    m = int(replicates)
    k = dist.size
    d = np.tile(np.asarray(dist.center, dtype=float), (m, 1))
    if dist.analyst is not None:
        d += sample_deviation_matrix(dist.analyst, derive_stream(seed, "mc/analyst"), m)
    j = len(dist.audience)
    for idx, spec in enumerate(dist.audience):
        if spec is not None:
            eta = sample_deviation_matrix(spec, derive_stream(seed, f"mc/audience/{idx}"), m)
            d -= eta / j
    return d


def estimate_success_probability(
    dist: DistanceDistribution,
    criteria: SuccessCriteria,
    kind: str,
    seed: int,
    replicates: int,
) -> ProbabilityEstimate:
    """Monte Carlo success probability with binomial standard error.

    Redraws every random deviation per replicate; deterministic given seed.
    """
    if kind not in ("strong", "weak"):
        raise ValueError(f"kind must be 'strong' or 'weak', got {kind!r}")
    m = int(replicates)
    if m < MIN_REPLICATES:
        raise ValueError(
            f"need at least {MIN_REPLICATES} replicates for a meaningful "
            f"standard error, got {m}"
        )
    draws = sample_distance_matrix(dist, seed, m)
    a = np.abs(draws)
    if kind == "strong" or math.isinf(criteria.p):
        norms = a.max(axis=1)
    else:
        norms = np.mean(a**criteria.p, axis=1) ** (1.0 / criteria.p)
    hits = int(np.count_nonzero(norms < criteria.epsilon))
    est = hits / m
    return ProbabilityEstimate(
        estimate=est,
        std_error=math.sqrt(est * (1.0 - est) / m),
        replicates=m,
        method="monte-carlo",
    )


def _normal_cdf(z: float) -> float:
    return 0.5 * (1.0 + math.erf(z / math.sqrt(2.0)))


def closed_form_success_probability(
    expected_d, total_sd, eps: float
) -> ProbabilityEstimate:
    """Exact strong-success probability for independent normal mismatches.

    Each principle's distance is Normal(mu_k, s_k^2); the probability that all
    fall strictly inside (-eps, eps) is the product of the per-principle CDF
    differences. Degenerate s_k = 0 contributes an indicator.
    """
    eps = float(eps)
    if not (eps > 0):
        raise ValueError(f"epsilon must be > 0, got {eps}")
    mu = np.asarray(expected_d, dtype=float)
    s = np.asarray(total_sd, dtype=float)
    if mu.shape != s.shape or mu.ndim != 1:
        raise ValueError(f"mean and sd shapes differ: {mu.shape} vs {s.shape}")
    if (s < 0).any():
        raise ValueError(f"standard deviations must be >= 0, got {s.tolist()}")
    prob = 1.0
    for mu_k, s_k in zip(mu, s):
        if s_k == 0.0:
            term = 1.0 if abs(mu_k) < eps else 0.0
        else:
            term = _normal_cdf((eps - mu_k) / s_k) - _normal_cdf((-eps - mu_k) / s_k)
        prob *= term
    prob = min(max(prob, 0.0), 1.0)
    return ProbabilityEstimate(
        estimate=prob, std_error=0.0, replicates=1, method="closed-form"
    )
