import { describe, expect, it } from "vitest";

import { TableResponse } from "../src/api";
import { contourSegments } from "../src/heatmap";
import { checkmark, renderGauge, renderTable } from "../src/render";

import tableFixture from "./fixtures/cli_table.json";

const GRADES = [
  { name: "H", r0: 0.5708 }, { name: "M", r0: 1.427 }, { name: "L", r0: 2.2832 },
];

describe("table rendering", () => {
  const html = renderTable(tableFixture as unknown as TableResponse);

  it("renders the total-coverage footer as 66.66%", () => {
    expect(html).toContain('data-role="total-coverage">66.66%');
  });

  it("renders the social-coverage margins", () => {
    for (const pct of ["31.25%", "68.75%", "100.00%"]) {
      expect(html).toContain(pct);
    }
  });

  it("renders sixteen rows with check and cross marks", () => {
    expect((html.match(/<tr>/g) ?? []).length).toBe(17);  // 16 rows + footer
    expect(html).toContain(checkmark(true));
    expect(html).toContain(checkmark(false));
    expect((html.match(/✓|✗/g) ?? []).length).toBe(48);
  });

  it("marks covered cells clickable with cohort data", () => {
    expect(html).toContain('class="covered');
    expect(html).toContain('data-wb="1,2,3"');
    expect(html).toContain('data-wg="4,5"');
  });
});

describe("gauge rendering", () => {
  it("shows the baseline label at the unrestricted value", () => {
    const html = renderGauge(2.854, GRADES, 2.854, false);
    expect(html).toContain("2.854");
    expect(html).toContain("baseline");
    expect(html).toContain("gauge-weak");   // above every grade
  });

  it("colors by bracket and places one marker per grade", () => {
    const html = renderGauge(1.0, GRADES, 2.854, false);
    expect(html).toContain("gauge-mid");
    expect((html.match(/gauge-marker/g) ?? []).length).toBe(3);
  });

  it("keeps the last value and shows a banner when offline", () => {
    const html = renderGauge(1.427, GRADES, 2.854, true);
    expect(html).toContain("1.427");
    expect(html).toContain("service unreachable");
  });
});

describe("contour extraction", () => {
  it("finds the level line of a linear field", () => {
    // grid[i][j] = y_i + x_j on x, y = 0..3; level 3 is the antidiagonal
    const xs = [0, 1, 2, 3];
    const ys = [0, 1, 2, 3];
    const grid = ys.map((y) => xs.map((x) => x + y));
    const segs = contourSegments(grid, xs, ys, 3.0);
    expect(segs.length).toBeGreaterThan(0);
    for (const s of segs) {
      expect(s.x1 + s.y1).toBeCloseTo(3.0, 10);
      expect(s.x2 + s.y2).toBeCloseTo(3.0, 10);
    }
  });

  it("returns nothing when the level is outside the range", () => {
    const grid = [[1, 1], [1, 1]];
    expect(contourSegments(grid, [0, 1], [0, 1], 5.0)).toEqual([]);
  });
});
