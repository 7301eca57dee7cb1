/** Shapes shared with the planning service (subset the UI consumes). */

export interface PrincipleRow {
  index: number;
  name: string;
  analyst_logit: number;
  audience_mean_logit: number;
  distance: number;
  expected_distance: number;
  total_sd: number;
}

export interface ProbabilityEstimate {
  estimate: number;
  std_error: number;
  replicates: number;
  method: string;
}

export interface CorrectionBlock {
  rho: number;
  target: string;
  original_logits: number[];
  target_logits: number[];
  corrected_logits: number[];
  correction: number[];
  residual_expected_distance: number[];
  sup_norm_before: number;
  sup_norm_after: number;
  allocation: { total: number; weights: number[] };
}

export interface Report {
  engine_version: string;
  schema_version: string;
  scenario_digest: string;
  seed: number;
  replicates: number;
  audience_size: number;
  group_extrapolated: boolean;
  criteria: { epsilon: number; p: number | string; potential_tolerance: number };
  principles: PrincipleRow[];
  success: {
    strong: boolean;
    weak: boolean;
    potential: boolean;
    sup_norm: number;
    lp_norm: number;
    expected_sup_norm: number;
  };
  probability: {
    strong_monte_carlo: ProbabilityEstimate | null;
    strong_closed_form: ProbabilityEstimate | null;
    weak_monte_carlo: ProbabilityEstimate | null;
  };
  correction: CorrectionBlock | null;
}

export interface ApiIssue {
  path: string;
  message: string;
}

export interface ApiEnvelope {
  report: Report;
  errors: ApiIssue[];
}

export interface Catalog {
  principles: string[];
  schema_version: string;
  engine_version: string;
}

/** Scenario document in the service's schema. */
export interface ScenarioDoc {
  fields: { id: string; lambda: number; deviation_scale: number }[];
  analyst: { field: string; weights: number[] };
  audience: { field: string; weights: number[]; count: number }[];
  criteria: { epsilon: number };
  mc: { replicates: number; seed: number };
  correction?: { rho: number; total_weight: number };
}
