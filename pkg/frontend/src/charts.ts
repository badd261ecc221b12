/**
 * Dependency-free SVG chart builders.  Pure string output so the rendering
 * is unit-testable; the app assigns the markup via innerHTML.
 */

import type { TrajectorySampleDoc } from './types.js';

export interface Extent {
  min: number;
  max: number;
}

export function extent(values: number[]): Extent {
  let min = Infinity;
  let max = -Infinity;
  for (const v of values) {
    if (v < min) min = v;
    if (v > max) max = v;
  }
  if (!Number.isFinite(min)) {
    return { min: 0, max: 1 };
  }
  if (min === max) {
    max = min + 1;
  }
  return { min, max };
}

export function scale(domain: Extent, range: [number, number]): (v: number) => number {
  const k = (range[1] - range[0]) / (domain.max - domain.min);
  return (v: number) => range[0] + (v - domain.min) * k;
}

export function linePath(
  xs: number[],
  ys: number[],
  sx: (v: number) => number,
  sy: (v: number) => number,
): string {
  const parts: string[] = [];
  for (let i = 0; i < xs.length; i++) {
    parts.push(`${i === 0 ? 'M' : 'L'}${sx(xs[i]).toFixed(2)},${sy(ys[i]).toFixed(2)}`);
  }
  return parts.join('');
}

export function stepPath(
  xs: number[],
  ys: number[],
  sx: (v: number) => number,
  sy: (v: number) => number,
): string {
  const parts: string[] = [];
  for (let i = 0; i < xs.length; i++) {
    const x = sx(xs[i]).toFixed(2);
    const y = sy(ys[i]).toFixed(2);
    if (i === 0) {
      parts.push(`M${x},${y}`);
    } else {
      parts.push(`H${x}`, `V${y}`);
    }
  }
  return parts.join('');
}

const W = 680;
const H = 260;
const PAD = { left: 48, right: 12, top: 10, bottom: 22 };

function frame(inner: string, height = H): string {
  return (
    `<svg viewBox="0 0 ${W} ${height}" role="img" xmlns="http://www.w3.org/2000/svg">` +
    inner +
    '</svg>'
  );
}

function axisLabels(tDomain: Extent, vDomain: Extent, height: number): string {
  const fmt = (v: number) => (Math.abs(v) >= 100 ? v.toFixed(0) : v.toPrecision(3));
  return (
    `<text class="axis" x="${PAD.left}" y="${height - 6}">${fmt(tDomain.min)}y</text>` +
    `<text class="axis" x="${W - PAD.right}" y="${height - 6}" text-anchor="end">${fmt(tDomain.max)}y</text>` +
    `<text class="axis" x="4" y="${PAD.top + 10}">${fmt(vDomain.max)}</text>` +
    `<text class="axis" x="4" y="${height - PAD.bottom}">${fmt(vDomain.min)}</text>`
  );
}

/** Balance and principal over time with the critical horizon marked. */
export function balanceChart(samples: TrajectorySampleDoc[], tCritical: number | null): string {
  if (samples.length === 0) {
    return frame('');
  }
  const ts = samples.map((s) => s.t);
  const tDomain = extent(ts);
  const vDomain = extent([
    0,
    ...samples.map((s) => s.balance),
    ...samples.map((s) => s.principal),
  ]);
  const sx = scale(tDomain, [PAD.left, W - PAD.right]);
  const sy = scale(vDomain, [H - PAD.bottom, PAD.top]);

  let marker = '';
  if (tCritical !== null && tCritical > tDomain.min && tCritical < tDomain.max) {
    const x = sx(tCritical).toFixed(2);
    marker =
      `<line class="tc" x1="${x}" y1="${PAD.top}" x2="${x}" y2="${H - PAD.bottom}"/>` +
      `<text class="tc-label" x="${x}" y="${PAD.top + 10}">t_c</text>`;
  }
  return frame(
    `<path class="balance" d="${linePath(ts, samples.map((s) => s.balance), sx, sy)}"/>` +
      `<path class="principal" d="${linePath(ts, samples.map((s) => s.principal), sx, sy)}"/>` +
      marker +
      axisLabels(tDomain, vDomain, H),
  );
}

/** Payment rate as a step series. */
export function paymentChart(samples: TrajectorySampleDoc[]): string {
  if (samples.length === 0) {
    return frame('', 150);
  }
  const h = 150;
  const ts = samples.map((s) => s.t);
  const tDomain = extent(ts);
  const vDomain = extent([0, ...samples.map((s) => s.rate)]);
  const sx = scale(tDomain, [PAD.left, W - PAD.right]);
  const sy = scale(vDomain, [h - PAD.bottom, PAD.top]);
  return frame(
    `<path class="rate" d="${stepPath(ts, samples.map((s) => s.rate), sx, sy)}"/>` +
      axisLabels(tDomain, vDomain, h),
    h,
  );
}
