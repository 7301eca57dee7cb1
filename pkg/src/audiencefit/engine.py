"""Scenario orchestration: resolve entities, evaluate, correct, sweep.

All report numbers are pure functions of (scenario, seed, engine version);
rerunning a scenario reproduces the report byte for byte.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np

from . import __version__, SCHEMA_VERSION
from .correction import CorrectionBounds, CorrectionPlan, allocate_weights, correct_toward
from .model import (
    FieldParams,
    PrincipleCatalog,
    centered_mean,
    logit,
    resource_effect,
)
from .sampling import DeviationSpec
from .scenario import (
    AudienceMemberModel,
    PersonModel,
    Scenario,
    ScenarioError,
    scenario_digest,
)
from .success import (
    DistanceDistribution,
    ProbabilityEstimate,
    SuccessCriteria,
    closed_form_success_probability,
    estimate_success_probability,
    mean_lp_norm,
    potential_success,
    strong_success,
    sup_norm,
    weak_success,
)

SWEEP_PARAMETERS = ("epsilon", "rho", "audience-size")


@dataclass(frozen=True)
class ResolvedEntity:
    """One analyst or audience member with its logit decomposition.

    expected is the deterministic, deviation-free part (field mean or
    observed-weight base, plus resource effects); headline adds the realized
    deviation when one was given. deviation_spec is None exactly when the
    deviation is fixed.
    """

    label: str
    field_id: str
    expected: np.ndarray
    headline: np.ndarray
    realized_deviation: np.ndarray | None
    deviation_spec: DeviationSpec | None


def _coefficient_rows(person: PersonModel, k: int) -> tuple[dict[str, float], ...]:
    coeffs = person.coefficients
    if coeffs is None:
        # Implicit zero effect for every named resource.
        zero_row = {name: 0.0 for name in person.resources}
        return tuple(dict(zero_row) for _ in range(k))
    if isinstance(coeffs, dict):
        return tuple(dict(coeffs) for _ in range(k))
    return tuple(dict(row) for row in coeffs)


def _base_logits(person: PersonModel, field_params: FieldParams, label: str) -> np.ndarray:
    if person.weights is None:
        return np.asarray(field_params.mean_logits, dtype=float)
    total = sum(person.weights)
    try:
        return np.array([logit(w / total) for w in person.weights])
    except ValueError as err:
        raise ScenarioError.single(f"{label}.weights", str(err)) from None


def resolve_entity(
    person: PersonModel,
    fields: dict[str, FieldParams],
    k: int,
    label: str,
) -> ResolvedEntity:
    field_params = fields[person.field]
    base = _base_logits(person, field_params, label)
    expected = base + resource_effect(person.resources, _coefficient_rows(person, k))
    dev = person.deviation
    if isinstance(dev, list):
        realized = np.asarray(dev, dtype=float)
        return ResolvedEntity(
            label=label,
            field_id=person.field,
            expected=expected,
            headline=expected + realized,
            realized_deviation=realized,
            deviation_spec=None,
        )
    if dev is None:
        spec = DeviationSpec(scale=field_params.deviation_scale, distribution="normal")
    else:
        scale = dev.scale if isinstance(dev.scale, list) else [float(dev.scale)] * k
        spec = DeviationSpec(scale=tuple(scale), distribution=dev.distribution)
    return ResolvedEntity(
        label=label,
        field_id=person.field,
        expected=expected,
        headline=expected,
        realized_deviation=None,
        deviation_spec=spec,
    )


@dataclass(frozen=True)
class ResolvedScenario:
    catalog: PrincipleCatalog
    fields: dict[str, FieldParams]
    analyst: ResolvedEntity
    members: tuple[ResolvedEntity, ...]
    criteria: SuccessCriteria


def resolve_scenario(scenario: Scenario) -> ResolvedScenario:
    catalog = PrincipleCatalog(names=tuple(scenario.principles))
    k = catalog.size
    fields = {
        f.id: FieldParams(
            field_id=f.id,
            mean_logits=tuple(f.mean_logits),
            deviation_scale=tuple(f.deviation_scale),
        )
        for f in scenario.fields
    }
    analyst = resolve_entity(scenario.analyst, fields, k, "analyst")
    members: list[ResolvedEntity] = []
    for j, entry in enumerate(scenario.audience):
        for _ in range(entry.count):
            members.append(
                resolve_entity(entry, fields, k, f"audience[{len(members)}]")
            )
    criteria = SuccessCriteria(
        epsilon=scenario.criteria.epsilon,
        p=scenario.criteria.p_value(),
        potential_tolerance=scenario.criteria.potential_tolerance,
    )
    return ResolvedScenario(
        catalog=catalog,
        fields=fields,
        analyst=analyst,
        members=tuple(members),
        criteria=criteria,
    )


def _estimate_dict(est: ProbabilityEstimate | None) -> dict | None:
    if est is None:
        return None
    return {
        "estimate": est.estimate,
        "std_error": est.std_error,
        "replicates": est.replicates,
        "method": est.method,
    }


def _criteria_dict(scenario: Scenario) -> dict:
    return {
        "epsilon": scenario.criteria.epsilon,
        "p": scenario.criteria.p,
        "potential_tolerance": scenario.criteria.potential_tolerance,
    }


def _evaluate_resolved(
    scenario: Scenario,
    resolved: ResolvedScenario,
    analyst_expected: np.ndarray,
    analyst_headline: np.ndarray,
    correction_block: dict | None,
) -> dict:
    criteria = resolved.criteria
    members = resolved.members
    member_headline = np.array([m.headline for m in members])
    member_expected = np.array([m.expected for m in members])
    audience_mean = centered_mean(member_headline)
    distance = analyst_headline - audience_mean
    expected_distance = analyst_expected - centered_mean(member_expected)

    dist = DistanceDistribution(
        center=tuple(float(v) for v in distance),
        analyst=resolved.analyst.deviation_spec,
        audience=tuple(m.deviation_spec for m in members),
    )
    seed = scenario.mc.seed
    replicates = scenario.mc.replicates
    strong_mc = estimate_success_probability(dist, criteria, "strong", seed, replicates)
    weak_mc = estimate_success_probability(dist, criteria, "weak", seed, replicates)
    total_sd = dist.total_sd()
    closed = (
        closed_form_success_probability(distance, total_sd, criteria.epsilon)
        if dist.all_normal()
        else None
    )

    rows = []
    for idx, name in enumerate(resolved.catalog.names):
        rows.append(
            {
                "index": idx + 1,
                "name": name,
                "analyst_logit": float(analyst_headline[idx]),
                "audience_mean_logit": float(audience_mean[idx]),
                "distance": float(distance[idx]),
                "expected_distance": float(expected_distance[idx]),
                "total_sd": float(total_sd[idx]),
            }
        )

    return {
        "engine_version": __version__,
        "schema_version": SCHEMA_VERSION,
        "scenario_digest": scenario_digest(scenario),
        "seed": seed,
        "replicates": replicates,
        "audience_size": len(members),
        "group_extrapolated": len(members) > 1,
        "criteria": _criteria_dict(scenario),
        "principles": rows,
        "success": {
            "strong": strong_success(distance, criteria.epsilon),
            "weak": weak_success(distance, criteria.epsilon, criteria.p),
            "potential": potential_success(expected_distance, criteria.potential_tolerance),
            "sup_norm": sup_norm(distance),
            "lp_norm": mean_lp_norm(distance, criteria.p),
            "expected_sup_norm": sup_norm(expected_distance),
        },
        "probability": {
            "strong_monte_carlo": _estimate_dict(strong_mc),
            "strong_closed_form": _estimate_dict(closed),
            "weak_monte_carlo": _estimate_dict(weak_mc),
        },
        "correction": correction_block,
    }


def run_evaluate(scenario: Scenario) -> dict:
    """Evaluate a scenario: distances, success flags, success probabilities."""
    resolved = resolve_scenario(scenario)
    return _evaluate_resolved(
        scenario,
        resolved,
        resolved.analyst.expected,
        resolved.analyst.headline,
        correction_block=None,
    )


def _correction_plan(scenario: Scenario) -> CorrectionPlan:
    c = scenario.correction
    bounds = None
    if c.bounds is not None:
        bounds = CorrectionBounds(
            lower=tuple(c.bounds.min) if c.bounds.min is not None else None,
            upper=tuple(c.bounds.max) if c.bounds.max is not None else None,
        )
    return CorrectionPlan(rho=c.rho, target=c.target, bounds=bounds)


def run_correct(scenario: Scenario) -> dict:
    """Apply the scenario's correction plan, then re-evaluate.

    The correction moves the analyst's deviation-free log-odds toward the
    audience target; a realized analyst deviation rides along unchanged, so
    individual variation can still spoil strong success even at full
    correction.
    """
    if scenario.correction is None:
        raise ScenarioError.single("correction", "correction plan required")
    resolved = resolve_scenario(scenario)
    plan = _correction_plan(scenario)
    member_matrix = np.array(
        [
            m.headline if plan.target == "realized" else m.expected
            for m in resolved.members
        ]
    )
    target = centered_mean(member_matrix)
    profile = correct_toward(resolved.analyst.expected, target, plan)
    corrected = np.asarray(profile.corrected_logits, dtype=float)
    if resolved.analyst.realized_deviation is not None:
        corrected_headline = corrected + resolved.analyst.realized_deviation
    else:
        corrected_headline = corrected
    allocation_total = (
        sum(scenario.analyst.weights)
        if scenario.analyst.weights is not None
        else scenario.correction.total_weight
    )
    allocation = allocate_weights(allocation_total, corrected)
    block = {
        "rho": plan.rho,
        "target": plan.target,
        "original_logits": list(profile.original_logits),
        "target_logits": list(profile.target_logits),
        "corrected_logits": list(profile.corrected_logits),
        "correction": list(profile.correction),
        "residual_expected_distance": list(profile.residual_expected_distance.d),
        "sup_norm_before": profile.sup_norm_before,
        "sup_norm_after": profile.sup_norm_after,
        "allocation": {"total": allocation.total, "weights": list(allocation.w)},
    }
    return _evaluate_resolved(scenario, resolved, corrected, corrected_headline, block)


def _sweep_scenario(scenario: Scenario, parameter: str, value: float) -> Scenario:
    variant = scenario.model_copy(deep=True)
    if parameter == "epsilon":
        if not (value > 0):
            raise ScenarioError.single("criteria.epsilon", f"grid value must be > 0, got {value}")
        variant.criteria.epsilon = float(value)
    elif parameter == "rho":
        if variant.correction is None:
            raise ScenarioError.single("correction", "rho sweep requires a correction plan")
        if not (0.0 <= value <= 1.0):
            raise ScenarioError.single("correction.rho", f"grid value must lie in [0, 1], got {value}")
        variant.correction.rho = float(value)
    elif parameter == "audience-size":
        if len(variant.audience) != 1:
            raise ScenarioError.single(
                "audience", "audience-size sweep requires exactly one audience entry"
            )
        j = int(value)
        if j < 1 or j != value:
            raise ScenarioError.single(
                "audience[0].count", f"grid value must be a positive integer, got {value}"
            )
        variant.audience[0].count = j
    else:
        raise ScenarioError.single(
            "", f"unknown sweep parameter {parameter!r}; choose from {SWEEP_PARAMETERS}"
        )
    return variant


def run_sweep(scenario: Scenario, parameter: str, grid: list[float]) -> dict:
    """One full report per grid value of epsilon, rho, or audience size."""
    if not grid:
        raise ScenarioError.single("", "sweep grid must not be empty")
    if any(b <= a for a, b in zip(grid, grid[1:])):
        raise ScenarioError.single("", f"sweep grid must be strictly ascending, got {grid}")
    reports = []
    for value in grid:
        variant = _sweep_scenario(scenario, parameter, value)
        if parameter == "rho":
            reports.append(run_correct(variant))
        else:
            reports.append(run_evaluate(variant))
    return {"parameter": parameter, "grid": list(grid), "reports": reports}


def report_json(report: dict) -> str:
    """Canonical pretty JSON for a report; identical inputs, identical bytes."""
    return json.dumps(report, indent=2, allow_nan=False) + "\n"


TABLE_HEADER = (
    "index,name,analyst_logit,audience_mean_logit,distance,expected_distance,total_sd"
)


def _table_rows(report: dict) -> list[str]:
    rows = []
    for row in report["principles"]:
        rows.append(
            ",".join(
                [
                    str(row["index"]),
                    row["name"],
                    repr(row["analyst_logit"]),
                    repr(row["audience_mean_logit"]),
                    repr(row["distance"]),
                    repr(row["expected_distance"]),
                    repr(row["total_sd"]),
                ]
            )
        )
    return rows


def report_table(report: dict) -> str:
    """Per-principle table, one comma-separated row per principle."""
    return "\n".join([TABLE_HEADER, *_table_rows(report)]) + "\n"


def sweep_table(sweep: dict) -> str:
    lines = [f"parameter,value,{TABLE_HEADER}"]
    for value, report in zip(sweep["grid"], sweep["reports"]):
        for row in _table_rows(report):
            lines.append(f"{sweep['parameter']},{repr(float(value))},{row}")
    return "\n".join(lines) + "\n"
