/** Planner inputs, client-side prechecks, and scenario document assembly.
 *
 * The prechecks mirror the service schema so obviously-invalid drafts are
 * flagged inline without a round trip; anything passing here should be
 * accepted by the service. Weight-to-logit conversion happens server side
 * and is an estimate based on observed proportions.
 */

import type { ApiIssue, ScenarioDoc } from "./types.js";

export interface PlannerInputs {
  analystWeights: number[];
  audienceWeights: number[];
  audienceSize: number;
  variability: number;
  epsilon: number;
  replicates: number;
  seed: number;
  correctionEnabled: boolean;
  rho: number;
}

export const MIN_REPLICATES = 100;
export const MAX_REPLICATES = 1_000_000;

/** Seed pinned for the whole browser session so what-ifs reproduce exactly. */
export const SESSION_SEED = 42;

export function defaultInputs(k: number): PlannerInputs {
  return {
    analystWeights: new Array(k).fill(10),
    audienceWeights: new Array(k).fill(10),
    audienceSize: 1,
    variability: 0.5,
    epsilon: 1.0,
    replicates: 10_000,
    seed: SESSION_SEED,
    correctionEnabled: false,
    rho: 0.5,
  };
}

function checkWeights(path: string, weights: number[], issues: ApiIssue[]): void {
  if (weights.length < 2) {
    issues.push({ path, message: "need at least two principles" });
    return;
  }
  if (!weights.every((w) => Number.isInteger(w) && w >= 1)) {
    issues.push({ path, message: "weights must be positive integers" });
  }
}

/** One issue per violation, with paths matching the service's error paths. */
export function validateInputs(inputs: PlannerInputs): ApiIssue[] {
  const issues: ApiIssue[] = [];
  checkWeights("analyst.weights", inputs.analystWeights, issues);
  checkWeights("audience[0].weights", inputs.audienceWeights, issues);
  if (!Number.isInteger(inputs.audienceSize) || inputs.audienceSize < 1) {
    issues.push({ path: "audience[0].count", message: "audience size must be a positive integer" });
  }
  if (!Number.isFinite(inputs.variability) || inputs.variability < 0) {
    issues.push({ path: "fields[0].deviation_scale", message: "variability must be >= 0" });
  }
  if (!Number.isFinite(inputs.epsilon) || inputs.epsilon <= 0) {
    issues.push({ path: "criteria.epsilon", message: "epsilon must be > 0" });
  }
  if (
    !Number.isInteger(inputs.replicates) ||
    inputs.replicates < MIN_REPLICATES ||
    inputs.replicates > MAX_REPLICATES
  ) {
    issues.push({
      path: "mc.replicates",
      message: `replicates must be an integer in [${MIN_REPLICATES}, ${MAX_REPLICATES}]`,
    });
  }
  if (inputs.correctionEnabled && !(inputs.rho >= 0 && inputs.rho <= 1)) {
    issues.push({ path: "correction.rho", message: "correction degree must lie in [0, 1]" });
  }
  return issues;
}

export function buildScenario(inputs: PlannerInputs): ScenarioDoc {
  const doc: ScenarioDoc = {
    fields: [
      { id: "analyst-pop", lambda: 0, deviation_scale: inputs.variability },
      { id: "audience-pop", lambda: 0, deviation_scale: inputs.variability },
    ],
    analyst: { field: "analyst-pop", weights: [...inputs.analystWeights] },
    audience: [
      {
        field: "audience-pop",
        weights: [...inputs.audienceWeights],
        count: inputs.audienceSize,
      },
    ],
    criteria: { epsilon: inputs.epsilon },
    mc: { replicates: inputs.replicates, seed: inputs.seed },
  };
  if (inputs.correctionEnabled) {
    doc.correction = {
      rho: inputs.rho,
      total_weight: inputs.analystWeights.reduce((a, b) => a + b, 0),
    };
  }
  return doc;
}
