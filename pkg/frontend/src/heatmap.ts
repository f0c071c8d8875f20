/**
 * Canvas heatmap of the sweep grid with equal-R0 contours for each grade.
 *
 * Contour segments come from a marching-squares pass over the grid; the
 * computation is pure so it can be tested headlessly, and drawing is a thin
 * layer on top.
 */

import { GradeInfo, SweepResponse } from "./api";

export interface Segment {
  x1: number; y1: number; x2: number; y2: number;
}

function interp(level: number, v0: number, v1: number, p0: number, p1: number): number {
  if (v1 === v0) return (p0 + p1) / 2;
  return p0 + ((level - v0) / (v1 - v0)) * (p1 - p0);
}

/**
 * Marching squares on grid[i][j] over axes (xs[j], ys[i]).
 * Returns line segments in data coordinates.
 */
export function contourSegments(
  grid: number[][], xs: number[], ys: number[], level: number,
): Segment[] {
  const segs: Segment[] = [];
  for (let i = 0; i + 1 < ys.length; i++) {
    for (let j = 0; j + 1 < xs.length; j++) {
      const v00 = grid[i][j], v01 = grid[i][j + 1];
      const v10 = grid[i + 1][j], v11 = grid[i + 1][j + 1];
      let mask = 0;
      if (v00 > level) mask |= 1;
      if (v01 > level) mask |= 2;
      if (v11 > level) mask |= 4;
      if (v10 > level) mask |= 8;
      if (mask === 0 || mask === 15) continue;
      const top = (): [number, number] => [interp(level, v00, v01, xs[j], xs[j + 1]), ys[i]];
      const bottom = (): [number, number] => [interp(level, v10, v11, xs[j], xs[j + 1]), ys[i + 1]];
      const left = (): [number, number] => [xs[j], interp(level, v00, v10, ys[i], ys[i + 1])];
      const right = (): [number, number] => [xs[j + 1], interp(level, v01, v11, ys[i], ys[i + 1])];
      const push = (p: [number, number], q: [number, number]) =>
        segs.push({ x1: p[0], y1: p[1], x2: q[0], y2: q[1] });
      switch (mask) {
        case 1: case 14: push(left(), top()); break;
        case 2: case 13: push(top(), right()); break;
        case 3: case 12: push(left(), right()); break;
        case 4: case 11: push(right(), bottom()); break;
        case 6: case 9: push(top(), bottom()); break;
        case 7: case 8: push(left(), bottom()); break;
        case 5: push(left(), top()); push(right(), bottom()); break;
        case 10: push(top(), right()); push(left(), bottom()); break;
      }
    }
  }
  return segs;
}

/** Viridis-like ramp, good enough for a diagnostic heatmap. */
export function colorFor(t: number): [number, number, number] {
  const stops: [number, [number, number, number]][] = [
    [0.0, [68, 1, 84]], [0.25, [59, 82, 139]], [0.5, [33, 145, 140]],
    [0.75, [94, 201, 98]], [1.0, [253, 231, 37]],
  ];
  const x = Math.min(1, Math.max(0, t));
  for (let i = 0; i + 1 < stops.length; i++) {
    const [t0, c0] = stops[i];
    const [t1, c1] = stops[i + 1];
    if (x <= t1) {
      const f = (x - t0) / (t1 - t0);
      return [
        Math.round(c0[0] + f * (c1[0] - c0[0])),
        Math.round(c0[1] + f * (c1[1] - c0[1])),
        Math.round(c0[2] + f * (c1[2] - c0[2])),
      ];
    }
  }
  return stops[stops.length - 1][1];
}

const CONTOUR_COLORS: Record<string, string> = {
  H: "#ff5050", M: "#ffa24d", L: "#ff7ad1",
};

export function drawHeatmap(
  canvas: HTMLCanvasElement, sweep: SweepResponse, grades: GradeInfo[],
): void {
  const ctx = canvas.getContext("2d");
  if (!ctx) return;
  const na = sweep.a_values.length;
  const nb = sweep.b_values.length;
  const w = canvas.width;
  const h = canvas.height;
  const vmax = Math.max(sweep.baseline_r0, 1e-9);
  ctx.clearRect(0, 0, w, h);
  // x axis: detection day; y axis: contact intensity percent (a*100), origin bottom-left
  const cellW = w / nb;
  const cellH = h / na;
  for (let i = 0; i < na; i++) {
    for (let j = 0; j < nb; j++) {
      const [r, g, b] = colorFor(sweep.r0[i][j] / vmax);
      ctx.fillStyle = `rgb(${r},${g},${b})`;
      ctx.fillRect(j * cellW, h - (i + 1) * cellH, cellW + 1, cellH + 1);
    }
  }
  if (na < 4 || nb < 4) return;   // too coarse for meaningful contours
  const xOf = (day: number) => ((day - sweep.detection_days[0]) /
    (sweep.detection_days[nb - 1] - sweep.detection_days[0])) * w;
  const yOf = (pct: number) => h - ((pct - sweep.a_percent[0]) /
    (sweep.a_percent[na - 1] - sweep.a_percent[0])) * h;
  for (const grade of grades) {
    const segs = contourSegments(sweep.r0, sweep.detection_days, sweep.a_percent,
                                 grade.r0);
    ctx.strokeStyle = CONTOUR_COLORS[grade.name] ?? "#ffffff";
    ctx.lineWidth = 1.6;
    ctx.beginPath();
    for (const s of segs) {
      ctx.moveTo(xOf(s.x1), yOf(s.y1));
      ctx.lineTo(xOf(s.x2), yOf(s.y2));
    }
    ctx.stroke();
  }
}

export function snapshotPng(canvas: HTMLCanvasElement): string {
  return canvas.toDataURL("image/png");
}
