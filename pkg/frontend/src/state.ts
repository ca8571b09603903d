import { renormalizeQ, renormalizeShares, scenarioSchema } from "./schema.js";
import type { ScenarioDoc } from "./schema.js";
import type { StabilityResponse } from "./api.js";

/** Mutable dashboard state; all derived numbers come from the service. */
export interface ExplorerState {
  scenario: ScenarioDoc;
  delta: number;
  q: number[];
  lastReport: StabilityResponse | null;
  selectedScenario: string | null;
  /** Unsaved edits relative to the selected saved scenario. */
  dirty: boolean;
  /** The last request failed; displayed numbers may be stale. */
  stale: boolean;
}

export function defaultScenario(): ScenarioDoc {
  return {
    version: 1,
    growth_rate: 0.1,
    firms: [
      { name: "firm_1", share: 0.6, loyalty: 0.8, leave_rate: 0.02 },
      { name: "firm_2", share: 0.4, loyalty: 0.8, leave_rate: 0.02 },
    ],
  };
}

export function initialState(): ExplorerState {
  const scenario = defaultScenario();
  return {
    scenario,
    delta: 0.05,
    q: scenario.firms.map(() => 1 / scenario.firms.length),
    lastReport: null,
    selectedScenario: null,
    dirty: false,
    stale: false,
  };
}

export function setShare(
  state: ExplorerState,
  firmIndex: number,
  value: number,
): void {
  const shares = state.scenario.firms.map((firm) => firm.share);
  const renormalized = renormalizeShares(shares, firmIndex, value);
  state.scenario.firms.forEach((firm, i) => {
    firm.share = renormalized[i];
  });
  state.dirty = true;
}

export function setQ(
  state: ExplorerState,
  firmIndex: number,
  value: number,
): void {
  state.q = renormalizeQ(state.q, firmIndex, value);
  state.dirty = true;
}

export function setFirmRate(
  state: ExplorerState,
  firmIndex: number,
  field: "loyalty" | "leave_rate",
  value: number,
): void {
  const firm = state.scenario.firms[firmIndex];
  const other = field === "loyalty" ? firm.leave_rate : firm.loyalty;
  firm[field] = Math.min(Math.max(value, 0), 1 - other);
  state.dirty = true;
}

export function loadScenario(
  state: ExplorerState,
  name: string,
  doc: ScenarioDoc,
): void {
  state.scenario = structuredClone(doc);
  state.q = doc.firms.map(() => 1 / doc.firms.length);
  state.selectedScenario = name;
  state.dirty = false;
}

/** The payload the UI is about to submit; must always validate. */
export function outboundPayload(state: ExplorerState): ScenarioDoc {
  return scenarioSchema.parse(state.scenario);
}
