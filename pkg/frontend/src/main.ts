import { Client } from "./api.js";
import { debounce } from "./debounce.js";
import { mountBadgePanel } from "./badgePanel.js";
import { mountCovaryPanel } from "./covaryPanel.js";
import { mountCurvePanel } from "./curvePanel.js";
import { Store } from "./store.js";

const client = new Client("");
const store = new Store(client);

// Slider moves fire at pointer speed; the backend sees at most one covary
// request per 100 ms pause, and the store drops stale responses.
const refreshPreview = debounce(() => void store.requestCovary(), 100);
const refreshCurves = debounce(() => void store.requestCurves(), 250);

function onSliderChange(): void {
  refreshPreview();
  refreshCurves();
}

function wireTopBar(): void {
  const eventInput = document.getElementById("event-input") as HTMLInputElement;
  eventInput.onchange = () => {
    store.state.event = eventInput.value.trim();
    void store.requestCurves();
  };
  const analyzeButton = document.getElementById("analyze-button")!;
  analyzeButton.onclick = () => void store.requestAnalysis(100);
  const fileInput = document.getElementById("model-file") as HTMLInputElement;
  fileInput.onchange = async () => {
    const file = fileInput.files?.[0];
    if (!file) return;
    await store.uploadModel(JSON.parse(await file.text()));
  };
  const status = document.getElementById("model-status")!;
  store.subscribe((state) => {
    status.textContent = state.model
      ? `${state.model.source}: ${state.model.n_atoms} atoms, ` +
        `${state.model.n_params} parameters in ${state.model.n_blocks} blocks`
      : "no model loaded";
  });
}

wireTopBar();
mountCovaryPanel(document.getElementById("covary-root")!, store, onSliderChange);
mountCurvePanel(document.getElementById("curve-root")!, store);
mountBadgePanel(document.getElementById("badge-root")!, store);
void store.loadModel();
