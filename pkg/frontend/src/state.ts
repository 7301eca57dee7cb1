/** Planner state: debounced re-evaluation with latest-wins cancellation.
 *
 * Edits mark the draft dirty and (when it passes the prechecks) schedule one
 * request after the debounce window; a newer edit resets the window and a
 * newer request aborts or outdates any in-flight one. Every number the UI
 * shows comes from the report stored here, which is always a verbatim
 * service response.
 */

import { ApiError } from "./api.js";
import {
  buildScenario,
  defaultInputs,
  validateInputs,
  type PlannerInputs,
} from "./scenario.js";
import type { ApiEnvelope, ApiIssue, Report, ScenarioDoc } from "./types.js";

export const DEBOUNCE_MS = 250;

export type RequestFn = (doc: ScenarioDoc, signal?: AbortSignal) => Promise<ApiEnvelope>;

export interface PlannerServices {
  evaluate: RequestFn;
  correct: RequestFn;
  setTimer?: (fn: () => void, ms: number) => unknown;
  clearTimer?: (id: unknown) => void;
}

export class PlannerStore {
  inputs: PlannerInputs;
  report: Report | null = null;
  issues: ApiIssue[] = [];
  dirty = false;
  pending = false;

  private timer: unknown = null;
  private controller: AbortController | null = null;
  private requestToken = 0;
  private listeners: Array<() => void> = [];
  private setTimer: (fn: () => void, ms: number) => unknown;
  private clearTimer: (id: unknown) => void;

  constructor(
    public principles: string[],
    private services: PlannerServices,
    inputs?: PlannerInputs,
  ) {
    this.inputs = inputs ?? defaultInputs(principles.length);
    this.setTimer = services.setTimer ?? ((fn, ms) => setTimeout(fn, ms));
    this.clearTimer = services.clearTimer ?? ((id) => clearTimeout(id as number));
  }

  subscribe(listener: () => void): () => void {
    this.listeners.push(listener);
    return () => {
      this.listeners = this.listeners.filter((l) => l !== listener);
    };
  }

  private emit(): void {
    for (const listener of this.listeners) listener();
  }

  /** Apply an edit; schedules a debounced refresh when the draft is valid. */
  update(patch: Partial<PlannerInputs>): void {
    this.inputs = { ...this.inputs, ...patch };
    this.dirty = true;
    const found = validateInputs(this.inputs);
    if (found.length > 0) {
      // invalid draft: surface messages, send nothing
      this.cancelScheduled();
      this.issues = found;
      this.emit();
      return;
    }
    this.issues = [];
    this.schedule();
    this.emit();
  }

  private cancelScheduled(): void {
    if (this.timer !== null) {
      this.clearTimer(this.timer);
      this.timer = null;
    }
  }

  private schedule(): void {
    this.cancelScheduled();
    this.timer = this.setTimer(() => {
      this.timer = null;
      void this.refresh();
    }, DEBOUNCE_MS);
  }

  /** Issue the request immediately (used at boot and when the timer fires). */
  async refresh(): Promise<void> {
    const found = validateInputs(this.inputs);
    if (found.length > 0) {
      this.issues = found;
      this.emit();
      return;
    }
    this.cancelScheduled();
    this.controller?.abort();
    const controller = typeof AbortController !== "undefined" ? new AbortController() : null;
    this.controller = controller;
    const token = ++this.requestToken;
    const doc = buildScenario(this.inputs);
    const call = this.inputs.correctionEnabled
      ? this.services.correct
      : this.services.evaluate;
    this.pending = true;
    this.emit();
    try {
      const envelope = await call(doc, controller?.signal);
      if (token !== this.requestToken) return; // a newer request superseded us
      this.report = envelope.report;
      this.issues = envelope.errors ?? [];
      this.dirty = false;
    } catch (err) {
      if (token !== this.requestToken) return;
      if (err instanceof DOMException && err.name === "AbortError") return;
      this.issues =
        err instanceof ApiError
          ? err.issues
          : [{ path: "", message: String(err) }];
    } finally {
      if (token === this.requestToken) {
        this.pending = false;
        this.emit();
      }
    }
  }

  issueFor(path: string): string | null {
    const hit = this.issues.find((issue) => issue.path === path);
    return hit ? hit.message : null;
  }
}
