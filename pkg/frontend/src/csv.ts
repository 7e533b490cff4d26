import { readFileSync } from "fs";
import Papa from "papaparse";

export const RISK_HEADER = ["strategy", "n", "bayes_risk", "model", "notes"];
export const SCAN_HEADER = ["t", "expected_utility"];

export interface RiskRow {
  strategy: string;
  n: number;
  bayesRisk: number;
  model: string;
}

export interface ScanRow {
  t: number;
  expectedUtility: number;
}

/** Anything wrong with the input: unreadable file, bad header, bad values. */
export class InputError extends Error {}

function parseTable(path: string): string[][] {
  let text: string;
  try {
    text = readFileSync(path, "utf8");
  } catch {
    throw new InputError(`cannot read input CSV: ${path}`);
  }
  const parsed = Papa.parse<string[]>(text.trim(), { skipEmptyLines: true });
  if (parsed.errors.length > 0) {
    throw new InputError(`malformed CSV in ${path}: ${parsed.errors[0].message}`);
  }
  return parsed.data;
}

function dataRows(path: string, header: string[]): string[][] {
  const rows = parseTable(path);
  const got = rows.length > 0 ? rows[0].join(",") : "";
  if (got !== header.join(",")) {
    throw new InputError(
      `${path}: expected header "${header.join(",")}", got "${got}"`);
  }
  if (rows.length === 1) {
    throw new InputError(`${path}: no data rows`);
  }
  return rows.slice(1);
}

function toNumber(raw: string, what: string): number {
  const value = Number(raw);
  if (raw.trim() === "" || !Number.isFinite(value)) {
    throw new InputError(`${what} is not a finite number: "${raw}"`);
  }
  return value;
}

export function readRiskCsv(path: string): RiskRow[] {
  return dataRows(path, RISK_HEADER).map((row, i) => {
    if (row.length !== RISK_HEADER.length) {
      throw new InputError(`${path}: row ${i + 2} has ${row.length} fields, expected ${RISK_HEADER.length}`);
    }
    const risk = toNumber(row[2], `${path}: row ${i + 2} bayes_risk`);
    if (risk <= 0) {
      // the risk figure has a logarithmic y-axis
      throw new InputError(`${path}: row ${i + 2} bayes_risk must be positive, got ${risk}`);
    }
    return {
      strategy: row[0],
      n: toNumber(row[1], `${path}: row ${i + 2} n`),
      bayesRisk: risk,
      model: row[3],
    };
  });
}

export function readScanCsv(path: string): ScanRow[] {
  return dataRows(path, SCAN_HEADER).map((row, i) => {
    if (row.length !== SCAN_HEADER.length) {
      throw new InputError(`${path}: row ${i + 2} has ${row.length} fields, expected ${SCAN_HEADER.length}`);
    }
    return {
      t: toNumber(row[0], `${path}: row ${i + 2} t`),
      expectedUtility: toNumber(row[1], `${path}: row ${i + 2} expected_utility`),
    };
  });
}
