/**
 * Pure HTML renderers for the gauge and the comparison table.
 *
 * Returning strings keeps these testable without a browser; main.ts owns the
 * DOM insertion and event wiring.
 */

import { GradeInfo, TableResponse } from "./api";
import { formatPercentTruncated, formatR0 } from "./convert";
import { Bracket, gradeBracket } from "./state";

const BRACKET_CLASS: Record<Bracket, string> = {
  "below-all": "gauge-strong",
  between: "gauge-mid",
  "above-all": "gauge-weak",
  unknown: "gauge-unknown",
};

export function renderGauge(r0: number | null, grades: GradeInfo[],
                            baselineR0: number, offline: boolean): string {
  const bracket = gradeBracket(r0, grades);
  const label = r0 === null ? "&mdash;" : formatR0(r0);
  const isBaseline = r0 !== null && baselineR0 > 0 &&
    Math.abs(r0 - baselineR0) < 5e-4;
  const max = baselineR0 > 0 ? baselineR0 : 3;
  const widthPct = r0 === null ? 0 : Math.min(100, (r0 / max) * 100);
  const markers = grades
    .map((g) => {
      const at = Math.min(100, (g.r0 / max) * 100);
      return `<div class="gauge-marker" style="left:${at.toFixed(2)}%">` +
        `<span>${g.name} ${formatR0(g.r0)}</span></div>`;
    })
    .join("");
  return `
    <div class="gauge ${BRACKET_CLASS[bracket]}">
      <div class="gauge-value">R0 = <strong data-role="live-r0">${label}</strong>
        ${isBaseline ? '<em class="gauge-note">baseline</em>' : ""}
        ${offline ? '<em class="banner" data-role="offline">service unreachable; showing last value</em>' : ""}
      </div>
      <div class="gauge-bar"><div class="gauge-fill" style="width:${widthPct.toFixed(2)}%"></div>${markers}</div>
    </div>`;
}

export function checkmark(covered: boolean): string {
  return covered ? "✓" : "✗";
}

export function renderTable(table: TableResponse): string {
  const gradeHeads = table.grades
    .map((g) => `<th>${g.name}<br><small>${formatR0(g.r0)}</small></th>`)
    .join("");
  const borderline = new Set(table.borderline_cells.map(([i, j]) => `${i}:${j}`));
  const rows = table.rows
    .map((row, i) => {
      const cells = row.cells
        .map((covered, j) => {
          const grade = table.grades[j].name;
          const locus = covered && row.loci[grade]?.length
            ? ` data-locus='${JSON.stringify(row.loci[grade][0])}'` : "";
          const cls = [
            covered ? "covered" : "uncovered",
            borderline.has(`${i}:${j}`) ? "borderline" : "",
            covered ? "clickable" : "",
          ].filter(Boolean).join(" ");
          return `<td class="${cls}" data-row="${row.index}" data-grade="${grade}"` +
            ` data-wb="${row.w_beta.join(",")}" data-wg="${row.w_gamma.join(",")}"${locus}>` +
            `${checkmark(covered)}</td>`;
        })
        .join("");
      return `<tr><th class="row-label">${row.label}</th>${cells}` +
        `<td class="coverage">${formatPercentTruncated(row.epidemiological_coverage)}</td></tr>`;
    })
    .join("");
  const social = table.social_coverage
    .map((c) => `<td class="coverage">${formatPercentTruncated(c)}</td>`)
    .join("");
  return `
    <table class="comparison">
      <thead><tr><th>Age-based restrictions \\ Horizontal lockdowns</th>${gradeHeads}
        <th>Epidemiological coverage</th></tr></thead>
      <tbody>${rows}</tbody>
      <tfoot><tr data-role="footer"><th>Social coverage</th>${social}
        <td class="coverage total" data-role="total-coverage">${formatPercentTruncated(table.total_coverage)}</td></tr></tfoot>
    </table>`;
}
