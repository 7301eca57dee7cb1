/** Shared test doubles: manual timers, recording services, canned reports. */

import type { PlannerServices, RequestFn } from "../src/state.js";
import type { ApiEnvelope, Report, ScenarioDoc } from "../src/types.js";

export const PRINCIPLES = [
  "data-matching",
  "exhaustive",
  "skeptical",
  "second-order",
  "transparent",
  "reproducible",
];

export class ManualTimers {
  private tasks = new Map<number, () => void>();
  private nextId = 1;

  set = (fn: () => void, _ms: number): number => {
    const id = this.nextId++;
    this.tasks.set(id, fn);
    return id;
  };

  clear = (id: unknown): void => {
    this.tasks.delete(id as number);
  };

  get pending(): number {
    return this.tasks.size;
  }

  /** Fire everything currently scheduled (the debounce window elapsing). */
  fire(): void {
    const fns = [...this.tasks.values()];
    this.tasks.clear();
    for (const fn of fns) fn();
  }
}

export function cannedReport(overrides: Partial<Report> = {}): Report {
  const base: Report = {
    engine_version: "0.1.0",
    schema_version: "1",
    scenario_digest: "deadbeefdeadbeefdeadbeef",
    seed: 42,
    replicates: 10000,
    audience_size: 1,
    group_extrapolated: false,
    criteria: { epsilon: 1.0, p: 2.0, potential_tolerance: 1e-9 },
    principles: PRINCIPLES.map((name, k) => ({
      index: k + 1,
      name,
      analyst_logit: 0.1 * k,
      audience_mean_logit: 0.05 * k,
      // deliberately awkward floats: parity must hold to the last digit
      distance: [0.5916666666666668, -0.2833333333333334, 0.0, 1e-17, -1.25, 0.28][k],
      expected_distance: 0.05 * k,
      total_sd: 0.7071067811865476,
    })),
    success: {
      strong: false,
      weak: true,
      potential: false,
      sup_norm: 1.25,
      lp_norm: 0.6373774391990981,
      expected_sup_norm: 0.25,
    },
    probability: {
      strong_monte_carlo: {
        estimate: 0.7351114351717166,
        std_error: 0.0013967442539706,
        replicates: 10000,
        method: "monte-carlo",
      },
      strong_closed_form: {
        estimate: 0.7351114351717166,
        std_error: 0,
        replicates: 1,
        method: "closed-form",
      },
      weak_monte_carlo: {
        estimate: 0.91319,
        std_error: 0.0008,
        replicates: 10000,
        method: "monte-carlo",
      },
    },
    correction: null,
  };
  return { ...base, ...overrides };
}

export interface RecordingServices extends PlannerServices {
  calls: Array<{ endpoint: "evaluate" | "correct"; doc: ScenarioDoc }>;
  timers: ManualTimers;
}

export function recordingServices(
  respond: (endpoint: "evaluate" | "correct", doc: ScenarioDoc) => ApiEnvelope = () => ({
    report: cannedReport(),
    errors: [],
  }),
): RecordingServices {
  const timers = new ManualTimers();
  const calls: RecordingServices["calls"] = [];
  const make =
    (endpoint: "evaluate" | "correct"): RequestFn =>
    (doc) => {
      calls.push({ endpoint, doc });
      return Promise.resolve(respond(endpoint, doc));
    };
  return {
    evaluate: make("evaluate"),
    correct: make("correct"),
    setTimer: timers.set,
    clearTimer: timers.clear,
    calls,
    timers,
  };
}

/** Let queued promise reactions run. */
export function settle(): Promise<void> {
  return new Promise((resolve) => setTimeout(resolve, 0));
}
