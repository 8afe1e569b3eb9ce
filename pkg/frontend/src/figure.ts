/**
 * Deterministic multi-panel SVG rendering of curve tables: one panel per
 * error component plus the total, one polyline per input table.
 *
 * Every polyline carries its source values verbatim in a `data-values`
 * attribute (JSON); rendering scales coordinates but never alters or
 * reorders the data.
 */

import { COMPONENTS, ComponentName, CurveTable } from "./csv.js";

const PANEL_TITLES: Record<ComponentName, string> = {
  total: "Total",
  localization: "Localization",
  existence_mismatch: "Existence mismatch",
  missed: "Missed detections",
  false: "False detections",
  switch: "Track switches",
};

const PALETTE = ["#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b"];

const PANEL_W = 300;
const PANEL_H = 220;
const MARGIN = { left: 52, right: 12, top: 28, bottom: 34 };
const COLS = 3;
const LEGEND_H = 26;

function esc(text: string): string {
  return text.replace(/&/g, "&amp;").replace(/</g, "&lt;").replace(/>/g, "&gt;").replace(/"/g, "&quot;");
}

function fmtTick(v: number): string {
  if (v === 0) return "0";
  const a = Math.abs(v);
  if (a >= 1000 || a < 0.01) return v.toExponential(1);
  return String(Number(v.toPrecision(3)));
}

function ticks(lo: number, hi: number, n: number): number[] {
  if (hi <= lo) return [lo];
  const out: number[] = [];
  for (let i = 0; i <= n; i++) out.push(lo + ((hi - lo) * i) / n);
  return out;
}

export function checkConsistency(tables: CurveTable[]): void {
  if (tables.length === 0) {
    throw new Error("at least one curve table is required");
  }
  const k = tables[0]!.timeSteps.length;
  for (const t of tables) {
    if (t.timeSteps.length !== k) {
      throw new Error(`window length mismatch: ${t.timeSteps.length} vs ${k}`);
    }
  }
}

function panel(
  component: ComponentName,
  tables: CurveTable[],
  index: number,
): string {
  const x0 = (index % COLS) * PANEL_W;
  const y0 = Math.floor(index / COLS) * PANEL_H + LEGEND_H;
  const innerW = PANEL_W - MARGIN.left - MARGIN.right;
  const innerH = PANEL_H - MARGIN.top - MARGIN.bottom;

  const steps = tables[0]!.timeSteps;
  const xLo = steps[0]!;
  const xHi = steps[steps.length - 1]!;
  let yHi = 0;
  for (const t of tables) {
    for (const v of t.columns[component]) yHi = Math.max(yHi, v);
  }
  if (yHi === 0) yHi = 1;
  yHi *= 1.05;

  const sx = (v: number) => MARGIN.left + (xHi === xLo ? innerW / 2 : ((v - xLo) / (xHi - xLo)) * innerW);
  const sy = (v: number) => MARGIN.top + innerH - (v / yHi) * innerH;

  const parts: string[] = [];
  parts.push(`<g class="panel" data-component="${component}" transform="translate(${x0},${y0})">`);
  parts.push(
    `<text class="title" x="${MARGIN.left + innerW / 2}" y="${MARGIN.top - 10}" text-anchor="middle">${esc(
      PANEL_TITLES[component],
    )}</text>`,
  );
  parts.push(
    `<rect class="frame" x="${MARGIN.left}" y="${MARGIN.top}" width="${innerW}" height="${innerH}" fill="none" stroke="#444"/>`,
  );
  for (const ty of ticks(0, yHi, 4)) {
    const y = sy(ty);
    parts.push(`<line x1="${MARGIN.left - 4}" y1="${y}" x2="${MARGIN.left}" y2="${y}" stroke="#444"/>`);
    parts.push(
      `<text class="tick" x="${MARGIN.left - 7}" y="${y + 3.5}" text-anchor="end">${fmtTick(ty)}</text>`,
    );
  }
  for (const tx of ticks(xLo, xHi, Math.min(4, Math.max(1, steps.length - 1)))) {
    const x = sx(tx);
    const yb = MARGIN.top + innerH;
    parts.push(`<line x1="${x}" y1="${yb}" x2="${x}" y2="${yb + 4}" stroke="#444"/>`);
    parts.push(`<text class="tick" x="${x}" y="${yb + 15}" text-anchor="middle">${fmtTick(tx)}</text>`);
  }
  parts.push(
    `<text class="axis" x="${MARGIN.left + innerW / 2}" y="${PANEL_H - 6}" text-anchor="middle">time step</text>`,
  );
  tables.forEach((t, seriesIndex) => {
    const values = t.columns[component];
    const points = values.map((v, i) => `${sx(t.timeSteps[i]!)},${sy(v)}`).join(" ");
    const color = PALETTE[seriesIndex % PALETTE.length];
    parts.push(
      `<polyline class="series" data-series="${seriesIndex}" data-values="${esc(
        JSON.stringify(values),
      )}" fill="none" stroke="${color}" stroke-width="1.5" points="${points}"/>`,
    );
  });
  parts.push("</g>");
  return parts.join("\n");
}

export function renderFigure(tables: CurveTable[], labels: string[]): string {
  checkConsistency(tables);
  if (labels.length !== tables.length) {
    throw new Error(`got ${labels.length} labels for ${tables.length} tables`);
  }
  const rows = Math.ceil(COMPONENTS.length / COLS);
  const width = COLS * PANEL_W;
  const height = rows * PANEL_H + LEGEND_H;
  const parts: string[] = [];
  parts.push(
    `<svg xmlns="http://www.w3.org/2000/svg" width="${width}" height="${height}" viewBox="0 0 ${width} ${height}" font-family="Helvetica, Arial, sans-serif">`,
  );
  parts.push(
    "<style>text{font-size:11px;fill:#222}text.title{font-size:13px;font-weight:bold}text.tick{font-size:9px}text.axis{font-size:10px}</style>",
  );
  parts.push(`<rect width="${width}" height="${height}" fill="white"/>`);
  let lx = 10;
  labels.forEach((label, i) => {
    const color = PALETTE[i % PALETTE.length];
    parts.push(`<line x1="${lx}" y1="${LEGEND_H / 2}" x2="${lx + 22}" y2="${LEGEND_H / 2}" stroke="${color}" stroke-width="2"/>`);
    parts.push(`<text x="${lx + 27}" y="${LEGEND_H / 2 + 4}">${esc(label)}</text>`);
    lx += 37 + 7 * label.length;
  });
  COMPONENTS.forEach((component, i) => {
    parts.push(panel(component, tables, i));
  });
  parts.push("</svg>");
  return parts.join("\n") + "\n";
}
