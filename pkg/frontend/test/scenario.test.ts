import { describe, expect, it } from "vitest";

import {
  buildScenario,
  defaultInputs,
  validateInputs,
  SESSION_SEED,
} from "../src/scenario.js";

describe("defaultInputs", () => {
  it("is schema-valid out of the box", () => {
    expect(validateInputs(defaultInputs(6))).toEqual([]);
  });

  it("pins the session seed", () => {
    expect(defaultInputs(6).seed).toBe(SESSION_SEED);
  });
});

describe("validateInputs", () => {
  it("flags epsilon zero at the schema path", () => {
    const inputs = { ...defaultInputs(6), epsilon: 0 };
    const issues = validateInputs(inputs);
    expect(issues).toHaveLength(1);
    expect(issues[0].path).toBe("criteria.epsilon");
  });

  it("flags non-positive or fractional weights", () => {
    expect(
      validateInputs({ ...defaultInputs(6), analystWeights: [0, 1, 1, 1, 1, 1] })[0].path,
    ).toBe("analyst.weights");
    expect(
      validateInputs({ ...defaultInputs(6), audienceWeights: [1.5, 1, 1, 1, 1, 1] })[0].path,
    ).toBe("audience[0].weights");
  });

  it("flags audience size, variability, replicates and rho", () => {
    const paths = validateInputs({
      ...defaultInputs(6),
      audienceSize: 0,
      variability: -1,
      replicates: 50,
      correctionEnabled: true,
      rho: 1.5,
    }).map((issue) => issue.path);
    expect(paths).toEqual([
      "audience[0].count",
      "fields[0].deviation_scale",
      "mc.replicates",
      "correction.rho",
    ]);
  });
});

describe("buildScenario", () => {
  it("mirrors the service schema", () => {
    const doc = buildScenario({ ...defaultInputs(6), audienceSize: 3, epsilon: 0.8 });
    expect(doc.fields.map((f) => f.id)).toEqual(["analyst-pop", "audience-pop"]);
    expect(doc.analyst.weights).toHaveLength(6);
    expect(doc.audience[0].count).toBe(3);
    expect(doc.criteria.epsilon).toBe(0.8);
    expect(doc.mc.seed).toBe(SESSION_SEED);
    expect(doc.correction).toBeUndefined();
  });

  it("adds the correction plan with the analyst budget when enabled", () => {
    const inputs = {
      ...defaultInputs(6),
      analystWeights: [30, 20, 10, 10, 10, 10],
      correctionEnabled: true,
      rho: 0.5,
    };
    const doc = buildScenario(inputs);
    expect(doc.correction).toEqual({ rho: 0.5, total_weight: 90 });
  });

  it("copies weight arrays instead of aliasing them", () => {
    const inputs = defaultInputs(6);
    const doc = buildScenario(inputs);
    doc.analyst.weights[0] = 99;
    expect(inputs.analystWeights[0]).toBe(10);
  });
});
