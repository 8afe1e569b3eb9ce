import { readFileSync } from "node:fs";
import { join } from "node:path";
import { describe, expect, it } from "vitest";

import { COMPONENTS, CsvFormatError, parseCurveTable } from "../src/csv.js";
import { renderFigure } from "../src/figure.js";

const FIXTURES = join(__dirname, "fixtures");
const golden = readFileSync(join(FIXTURES, "golden.csv"), "utf-8");
const singleRun = readFileSync(join(FIXTURES, "single_run.csv"), "utf-8");

function seriesValues(svg: string): Map<string, number[][]> {
  // data-component on each panel group, data-values on each polyline
  const panels = new Map<string, number[][]>();
  const panelRe = /<g class="panel" data-component="([a-z_]+)"[\s\S]*?<\/g>/g;
  for (const match of svg.matchAll(panelRe)) {
    const valuesRe = /data-values="(\[[^"]*\])"/g;
    const series: number[][] = [];
    for (const values of match[0].matchAll(valuesRe)) {
      series.push(JSON.parse(values[1]!));
    }
    panels.set(match[1]!, series);
  }
  return panels;
}

describe("parseCurveTable", () => {
  it("parses the golden CSV", () => {
    const table = parseCurveTable(golden);
    expect(table.timeSteps).toEqual([1, 2, 3]);
    expect(table.columns.total).toHaveLength(3);
    expect(table.columns.missed[0]).toBe(5);
  });

  it("rejects a column mismatch", () => {
    const bad = golden.replace("existence_mismatch", "existence");
    expect(() => parseCurveTable(bad)).toThrow(CsvFormatError);
    expect(() => parseCurveTable(bad)).toThrow(/column mismatch/);
  });

  it("rejects a missing column", () => {
    const lines = golden.trimEnd().split("\n");
    const dropLast = (line: string) => line.slice(0, line.lastIndexOf(","));
    const bad = lines.map(dropLast).join("\n") + "\n";
    expect(() => parseCurveTable(bad)).toThrow(CsvFormatError);
  });

  it("rejects non-numeric cells and ragged rows", () => {
    expect(() => parseCurveTable(golden.replace("3.9375548160924159", "abc"))).toThrow(
      /not a number/,
    );
    expect(() => parseCurveTable(golden.trimEnd() + "\n4,1,2\n")).toThrow(/cells/);
  });

  it("rejects empty input and header-only input", () => {
    expect(() => parseCurveTable("")).toThrow(CsvFormatError);
    expect(() => parseCurveTable(golden.split("\n")[0]! + "\n")).toThrow(/no data rows/);
  });
});

describe("renderFigure", () => {
  it("renders six panels with three-point lines from the golden CSV", () => {
    const table = parseCurveTable(golden);
    const svg = renderFigure([table], ["golden"]);
    const panels = seriesValues(svg);
    expect([...panels.keys()].sort()).toEqual([...COMPONENTS].sort());
    for (const series of panels.values()) {
      expect(series).toHaveLength(1);
      expect(series[0]).toHaveLength(3);
    }
  });

  it("panel values equal the CSV values exactly", () => {
    const table = parseCurveTable(golden);
    const panels = seriesValues(renderFigure([table], ["golden"]));
    for (const name of COMPONENTS) {
      expect(panels.get(name)![0]).toEqual(table.columns[name]);
    }
  });

  it("draws one line per input CSV in every panel, in input order", () => {
    const a = parseCurveTable(golden);
    const b = parseCurveTable(singleRun);
    const panels = seriesValues(renderFigure([a, b], ["a", "b"]));
    for (const name of COMPONENTS) {
      const series = panels.get(name)!;
      expect(series).toHaveLength(2);
      expect(series[0]).toEqual(a.columns[name]);
      expect(series[1]).toEqual(b.columns[name]);
    }
  });

  it("is deterministic", () => {
    const table = parseCurveTable(golden);
    expect(renderFigure([table], ["x"])).toBe(renderFigure([table], ["x"]));
  });

  it("rejects mismatched window lengths and label counts", () => {
    const a = parseCurveTable(golden);
    const short = parseCurveTable(
      golden.trimEnd().split("\n").slice(0, 3).join("\n") + "\n",
    );
    expect(() => renderFigure([a, short], ["a", "b"])).toThrow(/window length mismatch/);
    expect(() => renderFigure([a], [])).toThrow(/labels/);
  });
});
