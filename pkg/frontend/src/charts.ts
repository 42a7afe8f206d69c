// Chart geometry as pure data: scales, ticks, and SVG path strings computed
// from response samples. The app layer only materializes these into elements.

import type { ResponsePoint } from "./model.js";

export interface Margin {
  top: number;
  right: number;
  bottom: number;
  left: number;
}

export interface Viewport {
  width: number;
  height: number;
  margin: Margin;
}

export const DEFAULT_VIEWPORT: Viewport = {
  width: 420,
  height: 260,
  margin: { top: 16, right: 14, bottom: 34, left: 52 },
};

export interface Series {
  label: string;
  points: ResponsePoint[];
  dimmed?: boolean;
}

export interface AxisTick {
  pos: number;
  label: string;
}

export interface PlotArea {
  x: number;
  y: number;
  width: number;
  height: number;
}

export interface LineChart {
  plot: PlotArea;
  paths: { d: string; label: string; dimmed: boolean }[];
  xTicks: AxisTick[];
  yTicks: AxisTick[];
  xLabel: string;
  yLabel: string;
}

function plotArea(vp: Viewport): PlotArea {
  return {
    x: vp.margin.left,
    y: vp.margin.top,
    width: vp.width - vp.margin.left - vp.margin.right,
    height: vp.height - vp.margin.top - vp.margin.bottom,
  };
}

function fmt(v: number): string {
  return String(Math.round(v * 100) / 100);
}

export function decadeTicks(wmin: number, wmax: number): number[] {
  const lo = Math.ceil(Math.log10(wmin) - 1e-9);
  const hi = Math.floor(Math.log10(wmax) + 1e-9);
  const out: number[] = [];
  for (let k = lo; k <= hi; k++) out.push(Math.pow(10, k));
  return out;
}

export function omegaLabel(w: number): string {
  const k = Math.log10(w);
  const rounded = Math.round(k);
  if (Math.abs(k - rounded) < 1e-9 && Math.abs(rounded) <= 4) {
    return String(Math.pow(10, rounded));
  }
  return w.toExponential(0).replace("e+", "e");
}

// 1-2-5 tick steps covering [lo, hi] with about `target` divisions.
export function niceTicks(lo: number, hi: number, target = 5): number[] {
  if (!(hi > lo)) return [lo];
  const span = hi - lo;
  const rough = span / Math.max(target, 1);
  const mag = Math.pow(10, Math.floor(Math.log10(rough)));
  let step = mag;
  for (const m of [1, 2, 5, 10]) {
    if (mag * m >= rough) {
      step = mag * m;
      break;
    }
  }
  const out: number[] = [];
  for (let v = Math.ceil(lo / step) * step; v <= hi + step * 1e-9; v += step) {
    out.push(Math.abs(v) < step * 1e-9 ? 0 : v);
  }
  return out;
}

function tickLabel(v: number): string {
  const rounded = Math.round(v * 1e6) / 1e6;
  return String(rounded);
}

function pathFrom(xs: number[], ys: number[]): string {
  const parts: string[] = [];
  for (let i = 0; i < xs.length; i++) {
    parts.push(`${i === 0 ? "M" : "L"}${fmt(xs[i])} ${fmt(ys[i])}`);
  }
  return parts.join("");
}

function lineChart(
  series: Series[],
  value: (p: ResponsePoint) => number,
  yLabel: string,
  vp: Viewport,
): LineChart {
  const plot = plotArea(vp);
  const all = series.flatMap((s) => s.points);
  if (all.length === 0) {
    return { plot, paths: [], xTicks: [], yTicks: [], xLabel: "omega (rad/s)", yLabel };
  }
  let wmin = Infinity;
  let wmax = -Infinity;
  let vmin = Infinity;
  let vmax = -Infinity;
  for (const p of all) {
    wmin = Math.min(wmin, p.omega);
    wmax = Math.max(wmax, p.omega);
    const v = value(p);
    vmin = Math.min(vmin, v);
    vmax = Math.max(vmax, v);
  }
  if (wmax <= wmin) wmax = wmin * 10;
  if (vmax <= vmin) {
    vmax = vmin + 1;
    vmin = vmin - 1;
  }
  const pad = (vmax - vmin) * 0.06;
  vmin -= pad;
  vmax += pad;

  const lw = Math.log10(wmin);
  const span = Math.log10(wmax) - lw;
  const sx = (w: number) => plot.x + ((Math.log10(w) - lw) / span) * plot.width;
  const sy = (v: number) => plot.y + ((vmax - v) / (vmax - vmin)) * plot.height;

  const paths = series.map((s) => ({
    label: s.label,
    dimmed: s.dimmed ?? false,
    d: pathFrom(s.points.map((p) => sx(p.omega)), s.points.map((p) => sy(value(p)))),
  }));
  const xTicks = decadeTicks(wmin, wmax).map((w) => ({
    pos: sx(w),
    label: omegaLabel(w),
  }));
  const yTicks = niceTicks(vmin, vmax).map((v) => ({
    pos: sy(v),
    label: tickLabel(v),
  }));
  return { plot, paths, xTicks, yTicks, xLabel: "omega (rad/s)", yLabel };
}

export function bodeMagChart(series: Series[], vp: Viewport = DEFAULT_VIEWPORT): LineChart {
  return lineChart(series, (p) => p.mag_db, "magnitude (dB)", vp);
}

export function bodePhaseChart(series: Series[], vp: Viewport = DEFAULT_VIEWPORT): LineChart {
  return lineChart(series, (p) => p.phase_deg, "phase (deg)", vp);
}

export interface NyquistChart {
  plot: PlotArea;
  paths: { d: string; label: string; dimmed: boolean }[];
  mirrors: string[];
  critical: { x: number; y: number } | null;
  xTicks: AxisTick[];
  yTicks: AxisTick[];
  xLabel: string;
  yLabel: string;
}

export function nyquistChart(
  series: Series[],
  vp: Viewport = DEFAULT_VIEWPORT,
): NyquistChart {
  const plot = plotArea(vp);
  const all = series.flatMap((s) => s.points);
  if (all.length === 0) {
    return {
      plot,
      paths: [],
      mirrors: [],
      critical: null,
      xTicks: [],
      yTicks: [],
      xLabel: "Re",
      yLabel: "Im",
    };
  }
  let xmin = -1;
  let xmax = -1;
  let ymin = 0;
  let ymax = 0;
  for (const p of all) {
    xmin = Math.min(xmin, p.re);
    xmax = Math.max(xmax, p.re);
    ymin = Math.min(ymin, p.im, -p.im);
    ymax = Math.max(ymax, p.im, -p.im);
  }
  const padX = Math.max((xmax - xmin) * 0.08, 0.2);
  const padY = Math.max((ymax - ymin) * 0.08, 0.2);
  xmin -= padX;
  xmax += padX;
  ymin -= padY;
  ymax += padY;

  // Equal aspect: one unit maps to the same length on both axes.
  const scale = Math.min(plot.width / (xmax - xmin), plot.height / (ymax - ymin));
  const cx = plot.x + plot.width / 2;
  const cy = plot.y + plot.height / 2;
  const mx = (xmin + xmax) / 2;
  const my = (ymin + ymax) / 2;
  const sx = (x: number) => cx + (x - mx) * scale;
  const sy = (y: number) => cy - (y - my) * scale;

  const paths = series.map((s) => ({
    label: s.label,
    dimmed: s.dimmed ?? false,
    d: pathFrom(s.points.map((p) => sx(p.re)), s.points.map((p) => sy(p.im))),
  }));
  const mirrors = series.map((s) =>
    pathFrom(s.points.map((p) => sx(p.re)), s.points.map((p) => sy(-p.im))),
  );
  const xTicks = niceTicks(mx - plot.width / (2 * scale), mx + plot.width / (2 * scale), 6)
    .map((v) => ({ pos: sx(v), label: tickLabel(v) }));
  const yTicks = niceTicks(my - plot.height / (2 * scale), my + plot.height / (2 * scale), 5)
    .map((v) => ({ pos: sy(v), label: tickLabel(v) }));
  return {
    plot,
    paths,
    mirrors,
    critical: { x: sx(-1), y: sy(0) },
    xTicks,
    yTicks,
    xLabel: "Re",
    yLabel: "Im",
  };
}
