import { existsSync, mkdtempSync, writeFileSync } from "fs";
import { tmpdir } from "os";
import { join } from "path";

import { describe, expect, it } from "vitest";

import { FigureSpec, render, renderToFile } from "../src/charts";
import { InputError } from "../src/csv";

const dir = mkdtempSync(join(tmpdir(), "qubed-charts-"));
let counter = 0;

function csvFile(text: string): string {
  const path = join(dir, `fig-${counter++}.csv`);
  writeFileSync(path, text);
  return path;
}

function riskSpec(inputCsv: string): FigureSpec {
  return { inputCsv, figureKind: "risk", outputImage: join(dir, "out.svg"), nyquistSpacing: Math.PI };
}

function scanSpec(inputCsv: string, spacing = Math.PI): FigureSpec {
  return { inputCsv, figureKind: "scan", outputImage: join(dir, "out.svg"), nyquistSpacing: spacing };
}

function twoStrategyRisk(): string {
  const lines = ["strategy,n,bayes_risk,model,notes"];
  for (let n = 1; n <= 12; n++) {
    lines.push(`greedy-negvar,${n},${(0.04 * Math.exp(-0.3 * n)).toPrecision(17)},ideal,utility=negvar`);
  }
  for (let n = 1; n <= 12; n++) {
    lines.push(`nyquist-bayes,${n},${(0.05 / n).toPrecision(17)},ideal,omega_max=1.0`);
  }
  return lines.join("\n") + "\n";
}

function scanOverDomain(points: number): string {
  const lines = ["t,expected_utility"];
  const tMax = 12 * Math.PI;
  for (let i = 0; i < points; i++) {
    const t = (tMax * i) / (points - 1);
    lines.push(`${t},${-0.08 + 0.04 * Math.sin(t / 3)}`);
  }
  return lines.join("\n") + "\n";
}

function count(haystack: string, needle: string): number {
  return haystack.split(needle).length - 1;
}

describe("risk figure", () => {
  it("draws one series and one legend entry per strategy", () => {
    const svg = render(riskSpec(csvFile(twoStrategyRisk())));
    expect(count(svg, 'class="series"')).toBe(2);
    expect(count(svg, 'class="legend-label"')).toBe(2);
    expect(svg).toContain("greedy-negvar");
    expect(svg).toContain("nyquist-bayes");
  });

  it("uses a logarithmic y-axis", () => {
    // risks 1e-1, 1e-2, 1e-3 must land equally spaced
    const svg = render(riskSpec(csvFile(
      "strategy,n,bayes_risk,model,notes\n" +
      "greedy-negvar,1,0.1,ideal,\n" +
      "greedy-negvar,2,0.01,ideal,\n" +
      "greedy-negvar,3,0.001,ideal,\n")));
    const match = svg.match(/class="series"[^>]*points="([^"]+)"/);
    expect(match).not.toBeNull();
    const ys = match![1].split(" ").map((pair) => Number(pair.split(",")[1]));
    expect(ys[1] - ys[0]).toBeCloseTo(ys[2] - ys[1], 6);
    expect(svg).toContain("1e-3");
  });

  it("is deterministic for a fixed input", () => {
    const path = csvFile(twoStrategyRisk());
    expect(render(riskSpec(path))).toBe(render(riskSpec(path)));
  });
});

describe("scan figure", () => {
  it("draws 12 nyquist gridlines over [0, 12pi] at spacing pi", () => {
    const svg = render(scanSpec(csvFile(scanOverDomain(241))));
    expect(count(svg, 'class="nyquist"')).toBe(12);
  });

  it("scales the gridline count with the spacing", () => {
    const svg = render(scanSpec(csvFile(scanOverDomain(241)), Math.PI / 2));
    expect(count(svg, 'class="nyquist"')).toBe(24);
  });

  it("rejects a non-positive spacing", () => {
    expect(() => render(scanSpec(csvFile(scanOverDomain(25)), 0))).toThrow(InputError);
  });

  it("draws the utility curve as one series", () => {
    const svg = render(scanSpec(csvFile(scanOverDomain(25))));
    expect(count(svg, 'class="series"')).toBe(1);
  });
});

describe("renderToFile", () => {
  it("writes the image only on success", () => {
    const out = join(dir, "missing-input.svg");
    const spec: FigureSpec = {
      inputCsv: join(dir, "absent.csv"),
      figureKind: "risk",
      outputImage: out,
      nyquistSpacing: Math.PI,
    };
    expect(() => renderToFile(spec)).toThrow(InputError);
    expect(existsSync(out)).toBe(false);
  });

  it("writes an svg document on success", () => {
    const out = join(dir, "ok.svg");
    renderToFile({ ...riskSpec(csvFile(twoStrategyRisk())), outputImage: out });
    expect(existsSync(out)).toBe(true);
  });

  it("refuses a header-only csv and writes nothing", () => {
    const out = join(dir, "empty-rows.svg");
    const spec: FigureSpec = {
      inputCsv: csvFile("t,expected_utility\n"),
      figureKind: "scan",
      outputImage: out,
      nyquistSpacing: Math.PI,
    };
    expect(() => renderToFile(spec)).toThrow(/no data rows/);
    expect(existsSync(out)).toBe(false);
  });
});
