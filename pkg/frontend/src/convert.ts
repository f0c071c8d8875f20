/**
 * Conversions between slider positions and the model's raw intensities.
 *
 * The display convention follows the plotted axes: the contact slider shows
 * the reduction percentage (1 - a) * 100, the testing slider the detection
 * day b * 14. Both conversions are exactly invertible on every slider
 * position.
 */

export const DETECTION_PERIOD_DAYS = 14;

export function reductionPctToA(pct: number): number {
  if (pct < 0 || pct > 100) throw new RangeError(`reduction % out of range: ${pct}`);
  return 1 - pct / 100;
}

export function aToReductionPct(a: number): number {
  if (a < 0 || a > 1) throw new RangeError(`a out of range: ${a}`);
  return (1 - a) * 100;
}

export function detectionDayToB(day: number): number {
  if (day <= 0 || day > DETECTION_PERIOD_DAYS) {
    throw new RangeError(`detection day out of range: ${day}`);
  }
  return day / DETECTION_PERIOD_DAYS;
}

export function bToDetectionDay(b: number): number {
  if (b <= 0 || b > 1) throw new RangeError(`b out of range: ${b}`);
  return b * DETECTION_PERIOD_DAYS;
}

/** Three-decimal display, matching the command-line tool's default rounding. */
export function formatR0(r0: number): string {
  return r0.toFixed(3);
}

export function formatPercentTruncated(fraction: number): string {
  return (Math.trunc(fraction * 10000) / 100).toFixed(2) + "%";
}
