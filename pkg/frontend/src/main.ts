/**
 * Wiring: controls -> debounced API calls -> gauge/heatmap/table updates.
 */

import { ApiClient, GradeInfo, SweepResponse, TableResponse } from "./api";
import { DETECTION_PERIOD_DAYS } from "./convert";
import { drawHeatmap, snapshotPng } from "./heatmap";
import { renderGauge, renderTable } from "./render";
import {
  ExplorerState, applyR0Response, debounce, initialState, markOffline,
  rawIntensities, stateFromLocus, toggleCohort,
} from "./state";

const COHORT_LABELS = [
  "1: 0-6 (toddlers, preschoolers)",
  "2: 6-18 (school students)",
  "3: 18-24 (university students)",
  "4: 24-65 (working class)",
  "5: 65-90 (pensioners)",
];
const HEATMAP_RES = 64;
const DEBOUNCE_MS = 100;

const api = new ApiClient();
let state: ExplorerState = initialState();
let baselineR0 = 0;
let latestSweep: SweepResponse | null = null;

function el<T extends HTMLElement>(id: string): T {
  const found = document.getElementById(id);
  if (!found) throw new Error(`missing #${id}`);
  return found as T;
}

function renderControls(): void {
  for (const kind of ["beta", "gamma"] as const) {
    const box = el<HTMLDivElement>(`cohorts-${kind}`);
    box.innerHTML = COHORT_LABELS
      .map((label, idx) => {
        const j = idx + 1;
        const set = kind === "beta" ? state.wBeta : state.wGamma;
        const checked = set.has(j) ? " checked" : "";
        return `<label><input type="checkbox" data-kind="${kind}" data-cohort="${j}"${checked}> ${label}</label>`;
      })
      .join("");
  }
  const reduction = el<HTMLInputElement>("slider-reduction");
  reduction.value = String(state.reductionPct);
  el<HTMLSpanElement>("label-reduction").textContent =
    `${state.reductionPct.toFixed(0)}% contact reduction (a = ${(1 - state.reductionPct / 100).toFixed(2)})`;
  const day = el<HTMLInputElement>("slider-day");
  day.value = String(state.detectionDay);
  el<HTMLSpanElement>("label-day").textContent =
    `detection day ${state.detectionDay.toFixed(2)} of ${DETECTION_PERIOD_DAYS}` +
    (state.detectionDay >= DETECTION_PERIOD_DAYS ? " (no testing)" : "");
}

function renderLive(): void {
  el<HTMLDivElement>("gauge").innerHTML =
    renderGauge(state.liveR0, state.grades, baselineR0, state.offline);
}

const requestLive = debounce(async () => {
  const seq = api.nextSequence();
  const { a, b } = rawIntensities(state);
  try {
    const resp = await api.r0([...state.wBeta], [...state.wGamma], a, b);
    if (api.shouldApply(seq)) {
      state = applyR0Response(state, seq, resp);
      renderLive();
    }
  } catch {
    state = markOffline(state);
    renderLive();
  }
}, DEBOUNCE_MS);

const requestSweep = debounce(async () => {
  try {
    latestSweep = await api.sweep([...state.wBeta], [...state.wGamma], HEATMAP_RES);
    drawHeatmap(el<HTMLCanvasElement>("heatmap"), latestSweep, state.grades);
  } catch {
    state = markOffline(state);
    renderLive();
  }
}, DEBOUNCE_MS);

function refresh(includeSweep: boolean): void {
  renderControls();
  requestLive();
  if (includeSweep) requestSweep();
}

function wireEvents(): void {
  document.addEventListener("change", (ev) => {
    const target = ev.target as HTMLInputElement;
    if (target.dataset?.cohort) {
      const j = Number(target.dataset.cohort);
      if (target.dataset.kind === "beta") {
        state = { ...state, wBeta: toggleCohort(state.wBeta, j) };
      } else {
        state = { ...state, wGamma: toggleCohort(state.wGamma, j) };
      }
      refresh(true);
    }
  });
  el<HTMLInputElement>("slider-reduction").addEventListener("input", (ev) => {
    state = { ...state, reductionPct: Number((ev.target as HTMLInputElement).value) };
    refresh(false);
  });
  el<HTMLInputElement>("slider-day").addEventListener("input", (ev) => {
    state = { ...state, detectionDay: Number((ev.target as HTMLInputElement).value) };
    refresh(false);
  });
  el<HTMLButtonElement>("snapshot").addEventListener("click", () => {
    const url = snapshotPng(el<HTMLCanvasElement>("heatmap"));
    const link = document.createElement("a");
    link.href = url;
    link.download = "sweep.png";
    link.click();
  });
  el<HTMLDivElement>("table-box").addEventListener("click", (ev) => {
    const cell = (ev.target as HTMLElement).closest("td.clickable") as HTMLElement | null;
    if (!cell || !cell.dataset.locus) return;
    const [a, b] = JSON.parse(cell.dataset.locus) as [number, number, number];
    const wb = cell.dataset.wb ? cell.dataset.wb.split(",").map(Number) : [];
    const wg = cell.dataset.wg ? cell.dataset.wg.split(",").map(Number) : [];
    state = stateFromLocus(state, wb, wg, a, b);
    refresh(true);
  });
}

async function boot(): Promise<void> {
  try {
    const [grades, baseline] = await Promise.all([
      api.grades(),
      fetch("/api/baseline").then((r) => r.json()),
    ]);
    state = { ...state, grades: grades as GradeInfo[] };
    baselineR0 = (baseline as { r0: number }).r0;
  } catch {
    state = markOffline(state);
  }
  renderControls();
  renderLive();
  wireEvents();
  requestLive();
  requestSweep();
  api.table()
    .then((table: TableResponse) => {
      el<HTMLDivElement>("table-box").innerHTML = renderTable(table);
    })
    .catch(() => {
      el<HTMLDivElement>("table-box").innerHTML =
        '<p class="banner">comparison table unavailable</p>';
    });
}

boot();
