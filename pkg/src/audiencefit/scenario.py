"""Scenario document schema: parsing, validation, canonical form, digest.

A scenario is a JSON object naming the principle catalog, the field table,
the analyst, the audience, the success criteria, the Monte Carlo settings and
an optional correction plan. Scalars are accepted wherever a per-principle
list is expected and broadcast during normalization; the canonical form is
fully explicit, so the content digest is stable across spellings.
"""

from __future__ import annotations

import hashlib
import json
import math
from pathlib import Path
from typing import IO, Any, Literal, Union

from pydantic import BaseModel, ConfigDict, Field, ValidationError

from .model import DEFAULT_PRINCIPLES

MAX_REPLICATES = 1_000_000


class ScenarioIssue(dict):
    """One validation violation: a document path and a message."""

    def __init__(self, path: str, message: str):
        super().__init__(path=path, message=message)

    @property
    def path(self) -> str:
        return self["path"]

    @property
    def message(self) -> str:
        return self["message"]


class ScenarioError(ValueError):
    """Scenario rejected; carries one issue per violation."""

    def __init__(self, issues: list[ScenarioIssue]):
        self.issues = list(issues)
        lines = "; ".join(f"{i['path'] or '<document>'}: {i['message']}" for i in self.issues)
        super().__init__(f"invalid scenario: {lines}")

    @classmethod
    def single(cls, path: str, message: str) -> "ScenarioError":
        return cls([ScenarioIssue(path, message)])


Numbers = Union[float, list[float]]


class DeviationSpecModel(BaseModel):
    model_config = ConfigDict(extra="forbid")

    distribution: Literal["normal", "uniform"] = "normal"
    scale: Numbers


class PersonModel(BaseModel):
    model_config = ConfigDict(extra="forbid")

    field: str
    deviation: Union[list[float], DeviationSpecModel, None] = None
    resources: dict[str, float] = Field(default_factory=dict)
    coefficients: Union[dict[str, float], list[dict[str, float]], None] = None
    weights: Union[list[int], None] = None


class AudienceMemberModel(PersonModel):
    count: int = Field(default=1, ge=1)


class FieldModel(BaseModel):
    model_config = ConfigDict(extra="forbid", populate_by_name=True)

    id: str
    mean_logits: Numbers = Field(alias="lambda")
    deviation_scale: Numbers = 0.0


class CriteriaModel(BaseModel):
    model_config = ConfigDict(extra="forbid")

    epsilon: float = Field(gt=0)
    p: Union[float, Literal["inf"]] = 2.0
    potential_tolerance: float = Field(default=1e-9, ge=0)

    def p_value(self) -> float:
        return math.inf if self.p == "inf" else float(self.p)


class McModel(BaseModel):
    model_config = ConfigDict(extra="forbid")

    replicates: int = Field(default=10_000, ge=100, le=MAX_REPLICATES)
    seed: int = Field(default=0, ge=0, lt=2**64)


class BoundsModel(BaseModel):
    model_config = ConfigDict(extra="forbid")

    min: Union[Numbers, None] = None
    max: Union[Numbers, None] = None


class CorrectionModel(BaseModel):
    model_config = ConfigDict(extra="forbid")

    rho: float = Field(ge=0, le=1)
    target: Literal["group-mean", "realized"] = "group-mean"
    bounds: Union[BoundsModel, None] = None
    total_weight: int = Field(default=100, ge=1)


class ScenarioModel(BaseModel):
    model_config = ConfigDict(extra="forbid")

    principles: list[str] = Field(default_factory=lambda: list(DEFAULT_PRINCIPLES))
    fields: list[FieldModel]
    analyst: PersonModel
    audience: list[AudienceMemberModel] = Field(min_length=1)
    criteria: CriteriaModel
    mc: McModel = Field(default_factory=McModel)
    correction: Union[CorrectionModel, None] = None

    @property
    def size(self) -> int:
        return len(self.principles)

    def audience_size(self) -> int:
        return sum(member.count for member in self.audience)


Scenario = ScenarioModel


def _loc_to_path(loc: tuple) -> str:
    parts: list[str] = []
    for item in loc:
        if isinstance(item, int):
            if parts:
                parts[-1] += f"[{item}]"
            else:
                parts.append(f"[{item}]")
        else:
            parts.append(str(item))
    return ".".join(parts)


def _pydantic_issues(err: ValidationError) -> list[ScenarioIssue]:
    issues = []
    for e in err.errors(include_url=False):
        issues.append(ScenarioIssue(_loc_to_path(e["loc"]), e["msg"]))
    return issues


def _broadcast(value: Numbers, k: int) -> list[float]:
    if isinstance(value, list):
        return [float(v) for v in value]
    return [float(value)] * k


def _list_len_ok(value: Numbers, k: int) -> bool:
    return not isinstance(value, list) or len(value) == k


def _check_finite(values: list[float], path: str, issues: list[ScenarioIssue]) -> None:
    for v in values:
        if not math.isfinite(v):
            issues.append(ScenarioIssue(path, f"values must be finite, got {v!r}"))
            return


def _person_issues(
    base: str,
    person: PersonModel,
    k: int,
    field_ids: set[str],
    issues: list[ScenarioIssue],
) -> None:
    if person.field not in field_ids:
        issues.append(
            ScenarioIssue(
                f"{base}.field",
                f"unknown field {person.field!r}; known fields: {sorted(field_ids)}",
            )
        )
    dev = person.deviation
    if isinstance(dev, list):
        if len(dev) != k:
            issues.append(
                ScenarioIssue(
                    f"{base}.deviation", f"expected {k} components, got {len(dev)}"
                )
            )
        else:
            _check_finite(dev, f"{base}.deviation", issues)
    elif isinstance(dev, DeviationSpecModel):
        if not _list_len_ok(dev.scale, k):
            issues.append(
                ScenarioIssue(
                    f"{base}.deviation.scale",
                    f"expected {k} components, got {len(dev.scale)}",
                )
            )
        else:
            scale = _broadcast(dev.scale, k)
            if any(not math.isfinite(s) or s < 0 for s in scale):
                issues.append(
                    ScenarioIssue(
                        f"{base}.deviation.scale",
                        f"scale must be finite and >= 0, got {scale}",
                    )
                )
    if person.weights is not None:
        if len(person.weights) != k:
            issues.append(
                ScenarioIssue(f"{base}.weights", f"expected {k} weights, got {len(person.weights)}")
            )
        elif any(w < 1 for w in person.weights):
            issues.append(
                ScenarioIssue(f"{base}.weights", "weights must be positive integers")
            )
        elif k < 2:
            issues.append(
                ScenarioIssue(
                    f"{base}.weights",
                    "observed-weight conversion needs at least two principles",
                )
            )
    coeffs = person.coefficients
    rows: list[dict[str, float]]
    if coeffs is None:
        rows = []
    elif isinstance(coeffs, dict):
        rows = [coeffs] * k
    else:
        if len(coeffs) != k:
            issues.append(
                ScenarioIssue(
                    f"{base}.coefficients", f"expected {k} rows, got {len(coeffs)}"
                )
            )
            rows = []
        else:
            rows = coeffs
    res_keys = set(person.resources)
    for idx, row in enumerate(rows):
        row_keys = set(row)
        if row_keys != res_keys:
            missing = sorted(res_keys - row_keys)
            extra = sorted(row_keys - res_keys)
            issues.append(
                ScenarioIssue(
                    f"{base}.coefficients[{idx}]",
                    f"keys do not match resources: missing {missing}, extra {extra}",
                )
            )
            break


def _semantic_issues(m: ScenarioModel) -> list[ScenarioIssue]:
    issues: list[ScenarioIssue] = []
    k = len(m.principles)
    if k < 1:
        issues.append(ScenarioIssue("principles", "need at least one principle"))
        return issues
    if any(not p for p in m.principles):
        issues.append(ScenarioIssue("principles", "principle names must be non-empty"))
    if len(set(m.principles)) != k:
        issues.append(ScenarioIssue("principles", "principle names must be unique"))
    if not m.fields:
        issues.append(ScenarioIssue("fields", "need at least one field"))
    seen_ids: set[str] = set()
    for i, f in enumerate(m.fields):
        if f.id in seen_ids:
            issues.append(ScenarioIssue(f"fields[{i}].id", f"duplicate field id {f.id!r}"))
        seen_ids.add(f.id)
        if not _list_len_ok(f.mean_logits, k):
            issues.append(
                ScenarioIssue(
                    f"fields[{i}].lambda",
                    f"expected {k} components, got {len(f.mean_logits)}",
                )
            )
        else:
            _check_finite(_broadcast(f.mean_logits, k), f"fields[{i}].lambda", issues)
        if not _list_len_ok(f.deviation_scale, k):
            issues.append(
                ScenarioIssue(
                    f"fields[{i}].deviation_scale",
                    f"expected {k} components, got {len(f.deviation_scale)}",
                )
            )
        else:
            scale = _broadcast(f.deviation_scale, k)
            if any(not math.isfinite(s) or s < 0 for s in scale):
                issues.append(
                    ScenarioIssue(
                        f"fields[{i}].deviation_scale",
                        f"scale must be finite and >= 0, got {scale}",
                    )
                )
    field_ids = {f.id for f in m.fields}
    _person_issues("analyst", m.analyst, k, field_ids, issues)
    for j, member in enumerate(m.audience):
        _person_issues(f"audience[{j}]", member, k, field_ids, issues)
    if isinstance(m.criteria.p, float) and not (m.criteria.p >= 1):
        issues.append(ScenarioIssue("criteria.p", f"p must be >= 1 or 'inf', got {m.criteria.p}"))
    if m.correction is not None and m.correction.bounds is not None:
        b = m.correction.bounds
        for name, val in (("min", b.min), ("max", b.max)):
            if val is not None and not _list_len_ok(val, k):
                issues.append(
                    ScenarioIssue(
                        f"correction.bounds.{name}",
                        f"expected {k} components, got {len(val)}",
                    )
                )
        if (
            b.min is not None
            and b.max is not None
            and _list_len_ok(b.min, k)
            and _list_len_ok(b.max, k)
        ):
            lo, hi = _broadcast(b.min, k), _broadcast(b.max, k)
            for idx in range(k):
                if lo[idx] > hi[idx]:
                    issues.append(
                        ScenarioIssue(
                            "correction.bounds",
                            f"min {lo[idx]} exceeds max {hi[idx]} at index {idx}",
                        )
                    )
                    break
    return issues


def _normalize_person(person: PersonModel, k: int) -> None:
    if isinstance(person.deviation, DeviationSpecModel):
        person.deviation.scale = _broadcast(person.deviation.scale, k)
    if isinstance(person.coefficients, dict):
        person.coefficients = [dict(person.coefficients) for _ in range(k)]


def _normalize(m: ScenarioModel) -> ScenarioModel:
    k = len(m.principles)
    for f in m.fields:
        f.mean_logits = _broadcast(f.mean_logits, k)
        f.deviation_scale = _broadcast(f.deviation_scale, k)
    _normalize_person(m.analyst, k)
    for member in m.audience:
        _normalize_person(member, k)
    if isinstance(m.criteria.p, float) and math.isinf(m.criteria.p):
        m.criteria.p = "inf"
    if m.correction is not None and m.correction.bounds is not None:
        b = m.correction.bounds
        if b.min is not None:
            b.min = _broadcast(b.min, k)
        if b.max is not None:
            b.max = _broadcast(b.max, k)
    return m


def validate_scenario_data(data: Any) -> Scenario:
    """Validate a decoded document and return the normalized scenario."""
    if not isinstance(data, dict):
        raise ScenarioError.single("", "scenario document must be a JSON object")
    try:
        model = ScenarioModel.model_validate(data)
    except ValidationError as err:
        raise ScenarioError(_pydantic_issues(err)) from None
    issues = _semantic_issues(model)
    if issues:
        raise ScenarioError(issues)
    return _normalize(model)


def parse_scenario(source: Union[str, Path, IO[str], dict]) -> Scenario:
    """Parse a scenario from a path, JSON text, open stream, or decoded dict."""
    if isinstance(source, dict):
        return validate_scenario_data(source)
    if isinstance(source, Path):
        text = source.read_text()
    elif isinstance(source, str):
        candidate = Path(source)
        try:
            is_file = candidate.is_file()
        except OSError:
            is_file = False
        text = candidate.read_text() if is_file else source
    else:
        text = source.read()
    try:
        data = json.loads(text)
    except json.JSONDecodeError as err:
        raise ScenarioError.single("", f"not valid JSON: {err}") from None
    return validate_scenario_data(data)


def canonical_dict(scenario: Scenario) -> dict:
    return scenario.model_dump(by_alias=True, exclude_none=True)


def canonical_json(scenario: Scenario) -> str:
    """Deterministic compact serialization of the normalized scenario."""
    return json.dumps(
        canonical_dict(scenario), sort_keys=True, separators=(",", ":"), ensure_ascii=True
    )


def scenario_digest(scenario: Scenario) -> str:
    """Stable content hash of the canonicalized scenario."""
    return hashlib.sha256(canonical_json(scenario).encode("utf-8")).hexdigest()


def scenario_json_schema() -> dict:
    """JSON Schema for the scenario document, as published with the package."""
    return ScenarioModel.model_json_schema(by_alias=True)
