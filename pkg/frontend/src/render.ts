/**
 * CLI: render one or more curves CSV files into a multi-panel SVG.
 *
 *   node dist/render.js curves_a.csv curves_b.csv --out figure.svg --labels a,b
 *
 * Labels default to file basenames. Any error (unreadable file, column
 * mismatch, inconsistent windows) exits nonzero with a message.
 */

import { readFileSync, writeFileSync } from "node:fs";
import { basename } from "node:path";

import { parseCurveTable } from "./csv.js";
import { renderFigure } from "./figure.js";

interface Args {
  csvPaths: string[];
  out: string;
  labels: string[] | null;
}

function parseArgs(argv: string[]): Args {
  const csvPaths: string[] = [];
  let out = "figure.svg";
  let labels: string[] | null = null;
  for (let i = 0; i < argv.length; i++) {
    const arg = argv[i]!;
    if (arg === "--out") {
      const value = argv[++i];
      if (value === undefined) throw new Error("--out requires a path");
      out = value;
    } else if (arg === "--labels") {
      const value = argv[++i];
      if (value === undefined) throw new Error("--labels requires a comma-separated list");
      labels = value.split(",");
    } else if (arg === "--help" || arg === "-h") {
      console.log("usage: render <curves.csv> [more.csv ...] [--out figure.svg] [--labels a,b]");
      process.exit(0);
    } else if (arg.startsWith("--")) {
      throw new Error(`unknown option ${arg}`);
    } else {
      csvPaths.push(arg);
    }
  }
  if (csvPaths.length === 0) {
    throw new Error("at least one CSV path is required");
  }
  return { csvPaths, out, labels };
}

export function main(argv: string[]): void {
  const args = parseArgs(argv);
  const tables = args.csvPaths.map((path) => {
    let text: string;
    try {
      text = readFileSync(path, "utf-8");
    } catch (err) {
      throw new Error(`cannot read ${path}: ${(err as Error).message}`);
    }
    try {
      return parseCurveTable(text);
    } catch (err) {
      throw new Error(`${path}: ${(err as Error).message}`);
    }
  });
  const labels = args.labels ?? args.csvPaths.map((p) => basename(p, ".csv"));
  if (labels.length !== tables.length) {
    throw new Error(`got ${labels.length} labels for ${tables.length} CSV files`);
  }
  writeFileSync(args.out, renderFigure(tables, labels), "utf-8");
}

const isDirectRun = process.argv[1] !== undefined && import.meta.url.endsWith(basename(process.argv[1]));
if (isDirectRun) {
  try {
    main(process.argv.slice(2));
  } catch (err) {
    console.error(`error: ${(err as Error).message}`);
    process.exit(1);
  }
}
