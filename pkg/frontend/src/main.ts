import { ApiClient } from "./api.js";
import { renderApp } from "./render.js";
import { PlannerStore } from "./state.js";

async function boot(): Promise<void> {
  const root = document.getElementById("app");
  if (!root) throw new Error("missing #app mount point");
  const api = new ApiClient();
  const catalog = await api.catalog();
  const store = new PlannerStore(catalog.principles, {
    evaluate: (doc, signal) => api.evaluate(doc, signal),
    correct: (doc, signal) => api.correct(doc, signal),
  });
  renderApp(root, store);
  await store.refresh();
}

void boot();
