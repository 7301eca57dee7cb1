/** DOM construction and updates for the planner.
 *
 * Numbers shown in the results panel are the verbatim service-response
 * values (String(x) of the exact field); layout geometry may scale bars, but
 * no displayed number is ever computed locally.
 */

import type { PlannerStore } from "./state.js";
import type { Report } from "./types.js";

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  className?: string,
  text?: string,
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  if (className) node.className = className;
  if (text !== undefined) node.textContent = text;
  return node;
}

interface SliderRefs {
  input: HTMLInputElement;
  value: HTMLSpanElement;
}

function weightSlider(
  name: string,
  idPrefix: string,
  k: number,
  initial: number,
  onChange: (k: number, value: number) => void,
): { wrapper: HTMLElement; refs: SliderRefs } {
  const wrapper = el("div", "slider-row");
  const label = el("label", "slider-label", name);
  const input = el("input");
  input.type = "range";
  input.min = "1";
  input.max = "50";
  input.step = "1";
  input.value = String(initial);
  input.id = `${idPrefix}-${k}`;
  label.htmlFor = input.id;
  const value = el("span", "slider-value", String(initial));
  input.addEventListener("input", () => {
    value.textContent = input.value;
    onChange(k, Number(input.value));
  });
  wrapper.append(label, input, value);
  return { wrapper, refs: { input, value } };
}

function numberField(
  labelText: string,
  path: string,
  initial: number,
  step: string,
  onChange: (value: number) => void,
): { wrapper: HTMLElement; input: HTMLInputElement; error: HTMLElement } {
  const wrapper = el("div", "field-row");
  wrapper.dataset.path = path;
  const label = el("label", "field-label", labelText);
  const input = el("input");
  input.type = "number";
  input.step = step;
  input.value = String(initial);
  label.append(input);
  const error = el("span", "field-error");
  input.addEventListener("input", () => onChange(Number(input.value)));
  wrapper.append(label, error);
  return { wrapper, input, error };
}

function bar(container: HTMLElement, name: string): { fill: HTMLElement; label: HTMLElement } {
  const row = el("div", "bar-row");
  row.append(el("span", "bar-name", name));
  const track = el("div", "bar-track");
  const fill = el("div", "bar-fill");
  track.append(fill);
  const label = el("span", "bar-value");
  row.append(track, label);
  container.append(row);
  return { fill, label };
}

function setBar(
  refs: { fill: HTMLElement; label: HTMLElement },
  value: number,
  scale: number,
): void {
  refs.label.textContent = String(value);
  const share = scale > 0 ? Math.min(Math.abs(value) / scale, 1) : 0;
  refs.fill.style.width = `${(share * 100).toFixed(1)}%`;
  refs.fill.classList.toggle("negative", value < 0);
}

export interface AppRefs {
  root: HTMLElement;
  distanceBars: Array<{ fill: HTMLElement; label: HTMLElement }>;
  residualBars: Array<{ fill: HTMLElement; label: HTMLElement }>;
  gaugeValue: HTMLElement;
  gaugeFill: HTMLElement;
  closedFormValue: HTMLElement;
  weakValue: HTMLElement;
  flags: { strong: HTMLElement; weak: HTMLElement; potential: HTMLElement };
  originalWeights: HTMLElement;
  correctedWeights: HTMLElement;
  correctionPanel: HTMLElement;
  generalErrors: HTMLElement;
  digest: HTMLElement;
  analystSliders: SliderRefs[];
  audienceSliders: SliderRefs[];
  rhoSlider: HTMLInputElement;
  correctionToggle: HTMLInputElement;
  fieldErrors: Map<string, HTMLElement>;
}

export function renderApp(root: HTMLElement, store: PlannerStore): AppRefs {
  root.textContent = "";
  const controls = el("section", "controls");
  const results = el("section", "results");
  root.append(controls, results);

  controls.append(el("h2", undefined, "Analyst weights"));
  const analystNote = el(
    "p",
    "note",
    "Integer weights; the service converts proportions to log-odds (an estimate).",
  );
  controls.append(analystNote);
  const analystBox = el("div", "sliders");
  analystBox.dataset.path = "analyst.weights";
  const analystSliders: SliderRefs[] = [];
  store.principles.forEach((name, k) => {
    const { wrapper, refs } = weightSlider(name, "analyst-w", k, store.inputs.analystWeights[k], (idx, v) => {
      const weights = [...store.inputs.analystWeights];
      weights[idx] = v;
      store.update({ analystWeights: weights });
    });
    analystSliders.push(refs);
    analystBox.append(wrapper);
  });
  controls.append(analystBox);

  controls.append(el("h2", undefined, "Audience"));
  const audienceBox = el("div", "sliders");
  audienceBox.dataset.path = "audience[0].weights";
  const audienceSliders: SliderRefs[] = [];
  store.principles.forEach((name, k) => {
    const { wrapper, refs } = weightSlider(name, "audience-w", k, store.inputs.audienceWeights[k], (idx, v) => {
      const weights = [...store.inputs.audienceWeights];
      weights[idx] = v;
      store.update({ audienceWeights: weights });
    });
    audienceSliders.push(refs);
    audienceBox.append(wrapper);
  });
  controls.append(audienceBox);

  const fieldErrors = new Map<string, HTMLElement>();
  const size = numberField("Audience size", "audience[0].count", store.inputs.audienceSize, "1", (v) =>
    store.update({ audienceSize: v }),
  );
  const variability = numberField(
    "Individual variability (sd)",
    "fields[0].deviation_scale",
    store.inputs.variability,
    "0.1",
    (v) => store.update({ variability: v }),
  );
  const epsilon = numberField("Success threshold (epsilon)", "criteria.epsilon", store.inputs.epsilon, "0.1", (v) =>
    store.update({ epsilon: v }),
  );
  const replicates = numberField("Monte Carlo replicates", "mc.replicates", store.inputs.replicates, "100", (v) =>
    store.update({ replicates: v }),
  );
  for (const field of [size, variability, epsilon, replicates]) {
    controls.append(field.wrapper);
    fieldErrors.set(field.wrapper.dataset.path as string, field.error);
  }

  controls.append(el("h2", undefined, "Audience correction"));
  const correctionRow = el("div", "field-row");
  correctionRow.dataset.path = "correction.rho";
  const toggleLabel = el("label", "field-label", "Apply correction");
  const correctionToggle = el("input");
  correctionToggle.type = "checkbox";
  correctionToggle.id = "correction-toggle";
  toggleLabel.prepend(correctionToggle);
  const rhoSlider = el("input");
  rhoSlider.type = "range";
  rhoSlider.min = "0";
  rhoSlider.max = "1";
  rhoSlider.step = "0.05";
  rhoSlider.value = String(store.inputs.rho);
  rhoSlider.id = "rho-slider";
  const rhoValue = el("span", "slider-value", String(store.inputs.rho));
  const rhoError = el("span", "field-error");
  correctionToggle.addEventListener("input", () =>
    store.update({ correctionEnabled: correctionToggle.checked }),
  );
  rhoSlider.addEventListener("input", () => {
    rhoValue.textContent = rhoSlider.value;
    store.update({ rho: Number(rhoSlider.value) });
  });
  correctionRow.append(toggleLabel, rhoSlider, rhoValue, rhoError);
  controls.append(correctionRow);
  fieldErrors.set("correction.rho", rhoError);

  controls.append(el("p", "note", `Session seed: ${store.inputs.seed} (pinned for reproducible what-ifs)`));
  const generalErrors = el("ul", "general-errors");
  controls.append(generalErrors);

  results.append(el("h2", undefined, "Success"));
  const flagsRow = el("div", "flags");
  const flags = {
    strong: el("span", "flag", "strong"),
    weak: el("span", "flag", "weak"),
    potential: el("span", "flag", "potential"),
  };
  flagsRow.append(flags.strong, flags.weak, flags.potential);
  results.append(flagsRow);

  const gauge = el("div", "gauge");
  const gaugeTrack = el("div", "gauge-track");
  const gaugeFill = el("div", "gauge-fill");
  gaugeTrack.append(gaugeFill);
  const gaugeValue = el("div", "gauge-value", "—");
  gaugeValue.id = "probability-value";
  gauge.append(el("div", "gauge-title", "Strong success probability (Monte Carlo)"), gaugeTrack, gaugeValue);
  const closedFormValue = el("div", "gauge-extra");
  const weakValue = el("div", "gauge-extra");
  gauge.append(closedFormValue, weakValue);
  results.append(gauge);

  results.append(el("h2", undefined, "Per-principle distance"));
  const distanceBox = el("div", "bars");
  distanceBox.id = "distance-bars";
  const distanceBars = store.principles.map((name) => bar(distanceBox, name));
  results.append(distanceBox);

  const correctionPanel = el("div", "correction-panel");
  correctionPanel.hidden = true;
  correctionPanel.append(el("h2", undefined, "Correction"));
  const weightsTable = el("div", "weights-table");
  const originalWeights = el("div", "weights-row");
  const correctedWeights = el("div", "weights-row");
  weightsTable.append(originalWeights, correctedWeights);
  correctionPanel.append(weightsTable);
  correctionPanel.append(el("h3", undefined, "Residual expected distance"));
  const residualBox = el("div", "bars");
  residualBox.id = "residual-bars";
  const residualBars = store.principles.map((name) => bar(residualBox, name));
  correctionPanel.append(residualBox);
  results.append(correctionPanel);

  const digest = el("p", "digest");
  results.append(digest);

  const refs: AppRefs = {
    root,
    distanceBars,
    residualBars,
    gaugeValue,
    gaugeFill,
    closedFormValue,
    weakValue,
    flags,
    originalWeights,
    correctedWeights,
    correctionPanel,
    generalErrors,
    digest,
    analystSliders,
    audienceSliders,
    rhoSlider,
    correctionToggle,
    fieldErrors,
  };
  store.subscribe(() => applyState(refs, store));
  applyState(refs, store);
  return refs;
}

function applyReport(refs: AppRefs, report: Report): void {
  const scale = Math.max(...report.principles.map((row) => Math.abs(row.distance)), 1e-12);
  report.principles.forEach((row, k) => setBar(refs.distanceBars[k], row.distance, scale));

  for (const key of ["strong", "weak", "potential"] as const) {
    refs.flags[key].classList.toggle("on", report.success[key]);
    refs.flags[key].textContent = `${key}: ${report.success[key] ? "yes" : "no"}`;
  }

  const mc = report.probability.strong_monte_carlo;
  refs.gaugeValue.textContent = mc ? String(mc.estimate) : "n/a";
  refs.gaugeFill.style.width = mc ? `${(mc.estimate * 100).toFixed(1)}%` : "0%";
  const cf = report.probability.strong_closed_form;
  refs.closedFormValue.textContent = cf ? `closed form: ${String(cf.estimate)}` : "";
  const weak = report.probability.weak_monte_carlo;
  refs.weakValue.textContent = weak ? `weak success: ${String(weak.estimate)}` : "";

  if (report.correction) {
    refs.correctionPanel.hidden = false;
    const residuals = report.correction.residual_expected_distance;
    const residualScale = Math.max(...residuals.map(Math.abs), 1e-12);
    residuals.forEach((value, k) => setBar(refs.residualBars[k], value, residualScale));
    refs.originalWeights.textContent = `current weights: ${refs.analystSliders
      .map((s) => s.input.value)
      .join(", ")}`;
    refs.correctedWeights.textContent = `corrected weights: ${report.correction.allocation.weights
      .map(String)
      .join(", ")}`;
  } else {
    refs.correctionPanel.hidden = true;
  }

  refs.digest.textContent = `scenario ${report.scenario_digest.slice(0, 12)} · seed ${report.seed} · engine ${report.engine_version}`;
}

function applyState(refs: AppRefs, store: PlannerStore): void {
  for (const [, node] of refs.fieldErrors) node.textContent = "";
  const general: string[] = [];
  for (const issue of store.issues) {
    const slot = refs.fieldErrors.get(issue.path);
    if (slot) slot.textContent = issue.message;
    else general.push(issue.path ? `${issue.path}: ${issue.message}` : issue.message);
  }
  refs.generalErrors.textContent = "";
  for (const message of general) {
    refs.generalErrors.append(el("li", undefined, message));
  }
  refs.root.classList.toggle("pending", store.pending);
  refs.root.classList.toggle("dirty", store.dirty);
  if (store.report) applyReport(refs, store.report);
}
