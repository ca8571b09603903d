import { ApiClient } from "./api.js";
import type { ApiError, StabilityResponse } from "./api.js";
import { feasibleTriangle, trianglePoints } from "./geometry.js";
import {
  initialState,
  loadScenario,
  outboundPayload,
  setFirmRate,
  setQ,
  setShare,
} from "./state.js";
import type { ExplorerState } from "./state.js";

const api = new ApiClient();
const state: ExplorerState = initialState();

const TRIANGLE_SIZE = 240;

function el<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (!node) {
    throw new Error(`missing element #${id}`);
  }
  return node as T;
}

function fmt(value: number, digits = 4): string {
  return value.toFixed(digits);
}

function renderBanners(report: StabilityResponse | null): void {
  const banner = el<HTMLDivElement>("banner");
  banner.textContent = "";
  banner.className = "banner hidden";
  if (state.stale) {
    banner.textContent = "Service unreachable — showing stale data";
    banner.className = "banner stale";
    return;
  }
  if (!report) {
    return;
  }
  if (report.status === "frozen_market") {
    banner.textContent =
      "Frozen market: no customers can move, shares cannot change";
    banner.className = "banner frozen";
  } else if (report.viable === false) {
    banner.textContent = "FL not viable: no allocation keeps every firm safe";
    banner.className = "banner notviable";
  }
}

function renderBars(report: StabilityResponse): void {
  const container = el<HTMLDivElement>("bars");
  container.textContent = "";
  const qMin = report.q_min ?? [];
  state.scenario.firms.forEach((firm, i) => {
    const row = document.createElement("div");
    row.className = "bar-row";
    const variance = report.outcome?.variances[i];
    const safe = variance === undefined ? true : variance <= state.delta + 1e-12;
    row.innerHTML = `
      <span class="bar-label">${firm.name}</span>
      <div class="bar-track">
        <div class="bar-min" style="width:${(qMin[i] ?? 0) * 100}%"></div>
        <div class="bar-marker" style="left:${state.q[i] * 100}%"></div>
      </div>
      <span class="bar-value ${safe ? "ok" : "bad"}">
        q=${fmt(state.q[i])} min=${fmt(qMin[i] ?? 0)}
        ${variance === undefined ? "" : `ΔMS=${fmt(variance)}`}
      </span>`;
    container.appendChild(row);
  });
}

function renderGauge(report: StabilityResponse): void {
  const gauge = el<HTMLDivElement>("kappa-gauge");
  const label = el<HTMLSpanElement>("kappa-value");
  if (report.kappa === undefined) {
    gauge.style.width = "0%";
    label.textContent = "—";
    return;
  }
  const clamped = Math.min(Math.max(report.kappa, 0), 1);
  gauge.style.width = `${clamped * 100}%`;
  gauge.className = report.kappa >= 0 ? "gauge-fill ok" : "gauge-fill bad";
  label.textContent = fmt(report.kappa);
}

function renderTriangle(report: StabilityResponse): void {
  const svg = el<HTMLElement>("triangle");
  svg.textContent = "";
  if (state.scenario.firms.length !== 2 || !report.q_min) {
    el<HTMLDivElement>("triangle-panel").classList.add("hidden");
    return;
  }
  el<HTMLDivElement>("triangle-panel").classList.remove("hidden");
  const triangle = feasibleTriangle(report.q_min[0], report.q_min[1]);
  if (triangle) {
    const polygon = document.createElementNS(
      "http://www.w3.org/2000/svg",
      "polygon",
    );
    polygon.setAttribute("points", trianglePoints(triangle, TRIANGLE_SIZE));
    polygon.setAttribute("class", "feasible");
    svg.appendChild(polygon);
  }
  const point = document.createElementNS(
    "http://www.w3.org/2000/svg",
    "circle",
  );
  point.setAttribute("cx", String(state.q[0] * TRIANGLE_SIZE));
  point.setAttribute("cy", String((1 - state.q[1]) * TRIANGLE_SIZE));
  point.setAttribute("r", "4");
  point.setAttribute("class", "current-point");
  svg.appendChild(point);
}

function renderReport(report: StabilityResponse | null): void {
  renderBanners(report);
  if (!report) {
    return;
  }
  if (report.status === "frozen_market") {
    el<HTMLDivElement>("bars").textContent = "";
    el<HTMLSpanElement>("kappa-value").textContent = "—";
    el<HTMLDivElement>("triangle-panel").classList.add("hidden");
    return;
  }
  renderBars(report);
  renderGauge(report);
  renderTriangle(report);
  const verdict = el<HTMLSpanElement>("verdict");
  if (report.stable === undefined) {
    verdict.textContent = "";
  } else {
    verdict.textContent = report.stable ? "stable" : "unstable";
    verdict.className = report.stable ? "ok" : "bad";
  }
}

function showFieldError(error: ApiError | null): void {
  const box = el<HTMLDivElement>("field-error");
  if (!error) {
    box.textContent = "";
    box.classList.add("hidden");
    return;
  }
  box.textContent = error.field
    ? `${error.field}: ${error.message}`
    : error.message;
  box.classList.remove("hidden");
}

async function refresh(): Promise<void> {
  let payload;
  try {
    payload = outboundPayload(state);
  } catch (err) {
    showFieldError({
      status: 0,
      error: "local_validation",
      message: String(err),
    });
    return;
  }
  try {
    const report = await api.stabilityDebounced(payload, state.delta, state.q);
    if (report === null) {
      return; // superseded by a newer edit
    }
    state.lastReport = report;
    state.stale = false;
    showFieldError(null);
    renderReport(report);
  } catch (err) {
    const apiError = err as ApiError;
    if (apiError.status === 400 || apiError.status === 422) {
      showFieldError(apiError);
    } else {
      state.stale = true;
      renderBanners(state.lastReport);
    }
  }
}

function renderControls(): void {
  const container = el<HTMLDivElement>("firms");
  container.textContent = "";
  state.scenario.firms.forEach((firm, i) => {
    const fieldset = document.createElement("fieldset");
    fieldset.innerHTML = `
      <legend>${firm.name}</legend>
      <label>share <input type="range" min="0" max="1" step="0.01"
        data-kind="share" data-index="${i}" value="${firm.share}"></label>
      <label>loyalty <input type="range" min="0" max="1" step="0.01"
        data-kind="loyalty" data-index="${i}" value="${firm.loyalty}"></label>
      <label>leave rate <input type="range" min="0" max="1" step="0.01"
        data-kind="leave_rate" data-index="${i}" value="${firm.leave_rate}"></label>
      <label>q <input type="range" min="0" max="1" step="0.01"
        data-kind="q" data-index="${i}" value="${state.q[i]}"></label>`;
    container.appendChild(fieldset);
  });
}

function onSliderInput(event: Event): void {
  const input = event.target as HTMLInputElement;
  if (!input.dataset.kind) {
    return;
  }
  const index = Number(input.dataset.index);
  const value = Number(input.value);
  switch (input.dataset.kind) {
    case "share":
      setShare(state, index, value);
      break;
    case "q":
      setQ(state, index, value);
      break;
    case "loyalty":
      setFirmRate(state, index, "loyalty", value);
      break;
    case "leave_rate":
      setFirmRate(state, index, "leave_rate", value);
      break;
    default:
      return;
  }
  renderControls();
  void refresh();
}

async function refreshLibrary(): Promise<void> {
  const list = el<HTMLSelectElement>("saved-list");
  try {
    const { scenarios } = await api.listScenarios();
    list.textContent = "";
    scenarios.forEach((record) => {
      const option = document.createElement("option");
      option.value = record.name;
      option.textContent = `${record.name} (v${record.version})`;
      list.appendChild(option);
    });
  } catch {
    /* library panel degrades silently; compute panels show staleness */
  }
}

function wireLibrary(): void {
  el<HTMLButtonElement>("save-btn").addEventListener("click", async () => {
    const name = el<HTMLInputElement>("save-name").value.trim();
    if (!name) {
      return;
    }
    try {
      await api.putScenario(name, outboundPayload(state));
      state.selectedScenario = name;
      state.dirty = false;
      await refreshLibrary();
    } catch (err) {
      const apiError = err as ApiError;
      if (apiError.status === 409) {
        if (window.confirm("Saved copy changed elsewhere. Overwrite?")) {
          await api.putScenario(name, outboundPayload(state));
          await refreshLibrary();
        }
      } else {
        showFieldError(apiError);
      }
    }
  });
  el<HTMLButtonElement>("load-btn").addEventListener("click", async () => {
    const name = el<HTMLSelectElement>("saved-list").value;
    if (!name) {
      return;
    }
    const record = await api.getScenario(name);
    loadScenario(state, name, record.scenario);
    renderControls();
    void refresh();
  });
  el<HTMLButtonElement>("delete-btn").addEventListener("click", async () => {
    const name = el<HTMLSelectElement>("saved-list").value;
    if (!name) {
      return;
    }
    await api.deleteScenario(name);
    await refreshLibrary();
  });
}

function init(): void {
  renderControls();
  el<HTMLDivElement>("firms").addEventListener("input", onSliderInput);
  const deltaInput = el<HTMLInputElement>("delta");
  deltaInput.value = String(state.delta);
  deltaInput.addEventListener("input", () => {
    state.delta = Number(deltaInput.value);
    void refresh();
  });
  wireLibrary();
  void refreshLibrary();
  void refresh();
}

init();
