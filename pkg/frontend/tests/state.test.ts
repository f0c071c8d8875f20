import { describe, expect, it } from "vitest";

import { ApiClient, R0Response } from "../src/api";
import {
  applyR0Response, gradeBracket, initialState, markOffline, rawIntensities,
  stateFromLocus, toggleCohort,
} from "../src/state";

const GRADES = [
  { name: "H", r0: 0.571 }, { name: "M", r0: 1.427 }, { name: "L", r0: 2.283 },
];

function resp(r0: number): R0Response {
  return { r0, r_a: 0, r_i: 0, prefactor: 0, grade_comparison: [] };
}

describe("explorer state", () => {
  it("discards stale responses by sequence number", () => {
    let state = initialState();
    state = applyR0Response(state, 5, resp(1.0));
    expect(state.liveR0).toBe(1.0);
    // an older in-flight response must never overwrite newer state
    state = applyR0Response(state, 3, resp(9.9));
    expect(state.liveR0).toBe(1.0);
    state = applyR0Response(state, 6, resp(2.0));
    expect(state.liveR0).toBe(2.0);
  });

  it("random completion orders always end at the newest response", () => {
    for (let trial = 0; trial < 50; trial++) {
      const seqs = [1, 2, 3, 4, 5, 6, 7, 8];
      // shuffle
      for (let i = seqs.length - 1; i > 0; i--) {
        const j = Math.floor(Math.random() * (i + 1));
        [seqs[i], seqs[j]] = [seqs[j], seqs[i]];
      }
      let state = initialState();
      for (const seq of seqs) state = applyR0Response(state, seq, resp(seq));
      expect(state.liveR0).toBe(8);
    }
  });

  it("ApiClient.shouldApply mirrors the same rule", () => {
    const api = new ApiClient();
    const first = api.nextSequence();
    const second = api.nextSequence();
    expect(api.shouldApply(second)).toBe(true);
    expect(api.shouldApply(first)).toBe(false);
  });

  it("keeps the last value when the network fails", () => {
    let state = initialState();
    state = applyR0Response(state, 1, resp(1.427));
    state = markOffline(state);
    expect(state.liveR0).toBe(1.427);
    expect(state.offline).toBe(true);
  });

  it("maps slider state to raw intensities", () => {
    let state = initialState();
    state = { ...state, reductionPct: 50, detectionDay: 7 };
    const { a, b } = rawIntensities(state);
    expect(a).toBeCloseTo(0.5, 12);
    expect(b).toBeCloseTo(0.5, 12);
  });

  it("classifies the live value against the gradation", () => {
    expect(gradeBracket(0.3, GRADES)).toBe("below-all");
    expect(gradeBracket(1.0, GRADES)).toBe("between");
    expect(gradeBracket(2.854, GRADES)).toBe("above-all");
    expect(gradeBracket(null, GRADES)).toBe("unknown");
  });

  it("toggles cohorts immutably", () => {
    const start = new Set([1, 2]);
    const added = toggleCohort(start, 4);
    expect([...added].sort()).toEqual([1, 2, 4]);
    expect([...start].sort()).toEqual([1, 2]);
    expect([...toggleCohort(added, 2)].sort()).toEqual([1, 4]);
  });

  it("loads a locus point back into the sliders invertibly", () => {
    const state = stateFromLocus(initialState(), [1, 2, 3], [4, 5], 0.25, 0.5);
    expect(state.reductionPct).toBeCloseTo(75, 10);
    expect(state.detectionDay).toBeCloseTo(7, 10);
    const { a, b } = rawIntensities(state);
    expect(a).toBeCloseTo(0.25, 12);
    expect(b).toBeCloseTo(0.5, 12);
  });
});
