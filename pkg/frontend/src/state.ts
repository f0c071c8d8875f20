/**
 * Explorer state and the pure update logic around it.
 *
 * The state mirrors the controls: two cohort checkbox sets, the
 * contact-reduction slider (percent) and the detection-day slider, plus the
 * latest live value and payloads. All transitions are pure functions so the
 * sequencing behaviour is testable without a DOM.
 */

import { GradeInfo, R0Response } from "./api";
import { detectionDayToB, reductionPctToA } from "./convert";

export interface ExplorerState {
  wBeta: Set<number>;
  wGamma: Set<number>;
  reductionPct: number;
  detectionDay: number;
  liveR0: number | null;
  liveSeq: number;
  grades: GradeInfo[];
  offline: boolean;
}

export function initialState(): ExplorerState {
  return {
    wBeta: new Set(),
    wGamma: new Set(),
    reductionPct: 0,
    detectionDay: 14,
    liveR0: null,
    liveSeq: 0,
    grades: [],
    offline: false,
  };
}

export function rawIntensities(state: ExplorerState): { a: number; b: number } {
  return {
    a: reductionPctToA(state.reductionPct),
    b: detectionDayToB(state.detectionDay),
  };
}

/** Apply a point response; stale sequence numbers leave the state unchanged. */
export function applyR0Response(
  state: ExplorerState, seq: number, resp: R0Response,
): ExplorerState {
  if (seq < state.liveSeq) return state;
  return { ...state, liveR0: resp.r0, liveSeq: seq, offline: false };
}

export function markOffline(state: ExplorerState): ExplorerState {
  // keep the last value on a failed request; the banner tells the user
  return { ...state, offline: true };
}

export type Bracket = "below-all" | "between" | "above-all" | "unknown";

/** Colour bracket of the live value against the gradation. */
export function gradeBracket(r0: number | null, grades: GradeInfo[]): Bracket {
  if (r0 === null || grades.length === 0) return "unknown";
  const values = grades.map((g) => g.r0).sort((x, y) => x - y);
  if (r0 <= values[0]) return "below-all";
  if (r0 > values[values.length - 1]) return "above-all";
  return "between";
}

export function toggleCohort(set: Set<number>, cohort: number): Set<number> {
  const next = new Set(set);
  if (next.has(cohort)) next.delete(cohort);
  else next.add(cohort);
  return next;
}

/** Load a representative locus point into the sliders. */
export function stateFromLocus(
  state: ExplorerState, wBeta: number[], wGamma: number[], a: number, b: number,
): ExplorerState {
  return {
    ...state,
    wBeta: new Set(wBeta),
    wGamma: new Set(wGamma),
    reductionPct: (1 - a) * 100,
    detectionDay: b * 14,
  };
}

/** Trailing-edge debounce; at most one call per `waitMs` once idle. */
export function debounce<Args extends unknown[]>(
  fn: (...args: Args) => void, waitMs: number,
): (...args: Args) => void {
  let handle: ReturnType<typeof setTimeout> | undefined;
  return (...args: Args) => {
    if (handle !== undefined) clearTimeout(handle);
    handle = setTimeout(() => fn(...args), waitMs);
  };
}
