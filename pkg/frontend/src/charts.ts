import { writeFileSync } from "fs";

import { InputError, readRiskCsv, readScanCsv, RiskRow, ScanRow } from "./csv";
import { linearScale, px, Scale, tag } from "./svg";

export type FigureKind = "risk" | "scan";

export interface FigureSpec {
  inputCsv: string;
  figureKind: FigureKind;
  outputImage: string;
  /** Vertical-gridline spacing for the scan figure; ignored for risk. */
  nyquistSpacing: number;
}

const WIDTH = 760;
const HEIGHT = 460;
const MARGIN = { left: 70, right: 18, top: 28, bottom: 48 };
const PLOT_W = WIDTH - MARGIN.left - MARGIN.right;
const PLOT_H = HEIGHT - MARGIN.top - MARGIN.bottom;

const PALETTE = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"];

function document(body: string[]): string {
  return tag(
    "svg",
    {
      xmlns: "http://www.w3.org/2000/svg",
      width: String(WIDTH),
      height: String(HEIGHT),
      viewBox: `0 0 ${WIDTH} ${HEIGHT}`,
      "font-family": "sans-serif",
      "font-size": "12",
    },
    [tag("rect", { width: String(WIDTH), height: String(HEIGHT), fill: "white" }), ...body],
  );
}

function frame(): string {
  return tag("rect", {
    x: MARGIN.left,
    y: MARGIN.top,
    width: PLOT_W,
    height: PLOT_H,
    fill: "none",
    stroke: "#333",
  });
}

function xTick(x: number, label: string): string[] {
  const bottom = MARGIN.top + PLOT_H;
  return [
    tag("line", { x1: x, y1: bottom, x2: x, y2: bottom + 5, stroke: "#333" }),
    tag("text", { x, y: bottom + 18, "text-anchor": "middle" }, [], label),
  ];
}

function yTick(y: number, label: string): string[] {
  return [
    tag("line", { x1: MARGIN.left - 5, y1: y, x2: MARGIN.left, y2: y, stroke: "#333" }),
    tag("text", { x: MARGIN.left - 8, y: y + 4, "text-anchor": "end" }, [], label),
  ];
}

function axisTitles(xLabel: string, yLabel: string): string[] {
  const cx = MARGIN.left + PLOT_W / 2;
  const cy = MARGIN.top + PLOT_H / 2;
  return [
    tag("text", { x: cx, y: HEIGHT - 12, "text-anchor": "middle" }, [], xLabel),
    tag(
      "text",
      {
        x: 16,
        y: cy,
        "text-anchor": "middle",
        transform: `rotate(-90 16 ${px(cy)})`,
      },
      [],
      yLabel,
    ),
  ];
}

function polyline(xs: number[], ys: number[], color: string): string {
  const points = xs.map((x, i) => `${px(x)},${px(ys[i])}`).join(" ");
  return tag("polyline", {
    class: "series",
    fill: "none",
    stroke: color,
    "stroke-width": "1.5",
    points,
  });
}

interface Series {
  name: string;
  rows: RiskRow[];
}

function groupByStrategy(rows: RiskRow[]): Series[] {
  const order: Series[] = [];
  const seen = new Map<string, Series>();
  for (const row of rows) {
    let series = seen.get(row.strategy);
    if (!series) {
      series = { name: row.strategy, rows: [] };
      seen.set(row.strategy, series);
      order.push(series);
    }
    series.rows.push(row);
  }
  for (const series of order) {
    series.rows.sort((a, b) => a.n - b.n);
  }
  return order;
}

function legend(names: string[]): string[] {
  const x0 = MARGIN.left + PLOT_W - 190;
  const parts: string[] = [];
  names.forEach((name, i) => {
    const y = MARGIN.top + 16 + 18 * i;
    const color = PALETTE[i % PALETTE.length];
    parts.push(
      tag("line", {
        class: "legend-swatch",
        x1: x0,
        y1: y,
        x2: x0 + 24,
        y2: y,
        stroke: color,
        "stroke-width": "1.5",
      }),
      tag("text", { class: "legend-label", x: x0 + 30, y: y + 4 }, [], name),
    );
  });
  return parts;
}

function riskChart(rows: RiskRow[]): string {
  const series = groupByStrategy(rows);
  const ns = rows.map((r) => r.n);
  const logs = rows.map((r) => Math.log10(r.bayesRisk));
  let [n0, n1] = [Math.min(...ns), Math.max(...ns)];
  if (n0 === n1) {
    n0 -= 1;
    n1 += 1;
  }
  const lo = Math.floor(Math.min(...logs));
  const hi = Math.ceil(Math.max(...logs) + 1e-9);
  const x = linearScale(n0, n1, MARGIN.left, MARGIN.left + PLOT_W);
  const y = linearScale(lo, Math.max(hi, lo + 1), MARGIN.top + PLOT_H, MARGIN.top);

  const body: string[] = [frame()];
  for (let n = Math.ceil(n0); n <= n1; n += Math.max(1, Math.round((n1 - n0) / 12))) {
    body.push(...xTick(x(n), String(n)));
  }
  for (let decade = lo; decade <= Math.max(hi, lo + 1); decade += 1) {
    body.push(...yTick(y(decade), `1e${decade}`));
  }
  series.forEach((s, i) => {
    body.push(
      polyline(
        s.rows.map((r) => x(r.n)),
        s.rows.map((r) => y(Math.log10(r.bayesRisk))),
        PALETTE[i % PALETTE.length],
      ),
    );
  });
  body.push(...legend(series.map((s) => s.name)));
  const model = rows[0].model;
  body.push(
    tag("text", { x: MARGIN.left, y: MARGIN.top - 10 }, [], `Bayes risk vs measurements (${model})`),
  );
  body.push(...axisTitles("number of measurements n", "Bayes risk (log scale)"));
  return document(body);
}

function scanChart(rows: ScanRow[], spacing: number): string {
  const ts = rows.map((r) => r.t);
  const us = rows.map((r) => r.expectedUtility);
  const [t0, t1] = [Math.min(...ts), Math.max(...ts)];
  let [u0, u1] = [Math.min(...us), Math.max(...us)];
  if (u0 === u1) {
    u0 -= 0.5;
    u1 += 0.5;
  }
  const pad = 0.05 * (u1 - u0);
  const x = linearScale(t0, t1 > t0 ? t1 : t0 + 1, MARGIN.left, MARGIN.left + PLOT_W);
  const y = linearScale(u0 - pad, u1 + pad, MARGIN.top + PLOT_H, MARGIN.top);

  const body: string[] = [frame()];
  // vertical gridlines at k * spacing, k >= 1; the y-axis covers k = 0
  const kLast = Math.floor(t1 / spacing + 1e-9);
  for (let k = Math.max(1, Math.ceil(t0 / spacing - 1e-9)); k <= kLast; k += 1) {
    body.push(
      tag("line", {
        class: "nyquist",
        x1: x(k * spacing),
        y1: MARGIN.top,
        x2: x(k * spacing),
        y2: MARGIN.top + PLOT_H,
        stroke: "#bbb",
        "stroke-dasharray": "3 3",
      }),
    );
  }
  const nXTicks = 6;
  for (let i = 0; i <= nXTicks; i += 1) {
    const t = t0 + ((t1 - t0) * i) / nXTicks;
    body.push(...xTick(x(t), t.toFixed(1)));
  }
  const nYTicks = 5;
  for (let i = 0; i <= nYTicks; i += 1) {
    const u = u0 - pad + ((u1 + pad - (u0 - pad)) * i) / nYTicks;
    body.push(...yTick(y(u), u.toPrecision(3)));
  }
  const sorted = [...rows].sort((a, b) => a.t - b.t);
  body.push(
    polyline(
      sorted.map((r) => x(r.t)),
      sorted.map((r) => y(r.expectedUtility)),
      PALETTE[0],
    ),
  );
  body.push(...axisTitles("evolution time t", "expected utility"));
  return document(body);
}

export function render(spec: FigureSpec): string {
  if (!(spec.nyquistSpacing > 0)) {
    throw new InputError(`nyquist spacing must be positive, got ${spec.nyquistSpacing}`);
  }
  if (spec.figureKind === "risk") {
    return riskChart(readRiskCsv(spec.inputCsv));
  }
  if (spec.figureKind === "scan") {
    return scanChart(readScanCsv(spec.inputCsv), spec.nyquistSpacing);
  }
  throw new InputError(`unknown figure kind: ${spec.figureKind}`);
}

/** Validates and renders first; the output file is only written on success. */
export function renderToFile(spec: FigureSpec): void {
  const svg = render(spec);
  writeFileSync(spec.outputImage, svg + "\n");
}
