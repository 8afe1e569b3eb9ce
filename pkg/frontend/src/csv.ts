/**
 * Parser for the curves CSV contract:
 *
 *   time_step,total,localization,existence_mismatch,missed,false,switch
 *
 * one data row per time step, '.' decimal separator, LF or CRLF line
 * endings. The column set must match exactly; anything else is an error.
 */

export const EXPECTED_HEADER = [
  "time_step",
  "total",
  "localization",
  "existence_mismatch",
  "missed",
  "false",
  "switch",
] as const;

export type ComponentName = Exclude<(typeof EXPECTED_HEADER)[number], "time_step">;

export const COMPONENTS: readonly ComponentName[] = EXPECTED_HEADER.slice(1) as ComponentName[];

export interface CurveTable {
  /** 1-based time steps, in file order. */
  timeSteps: number[];
  /** Per-component value series, same length as timeSteps. */
  columns: Record<ComponentName, number[]>;
}

export class CsvFormatError extends Error {}

function parseNumber(cell: string, line: number, column: string): number {
  const value = Number(cell);
  if (cell.trim() === "" || Number.isNaN(value)) {
    throw new CsvFormatError(`line ${line}: column ${column} is not a number: ${JSON.stringify(cell)}`);
  }
  return value;
}

export function parseCurveTable(text: string): CurveTable {
  const lines = text.replace(/\r\n/g, "\n").split("\n");
  while (lines.length > 0 && lines[lines.length - 1] === "") {
    lines.pop();
  }
  if (lines.length === 0) {
    throw new CsvFormatError("empty CSV");
  }
  const header = (lines[0] ?? "").split(",");
  const expected = EXPECTED_HEADER.join(",");
  if (header.join(",") !== expected) {
    throw new CsvFormatError(
      `column mismatch: expected header ${JSON.stringify(expected)}, got ${JSON.stringify(lines[0])}`,
    );
  }
  const table: CurveTable = {
    timeSteps: [],
    columns: {
      total: [],
      localization: [],
      existence_mismatch: [],
      missed: [],
      false: [],
      switch: [],
    },
  };
  for (let i = 1; i < lines.length; i++) {
    const cells = (lines[i] ?? "").split(",");
    if (cells.length !== EXPECTED_HEADER.length) {
      throw new CsvFormatError(
        `line ${i + 1}: expected ${EXPECTED_HEADER.length} cells, got ${cells.length}`,
      );
    }
    table.timeSteps.push(parseNumber(cells[0] ?? "", i + 1, "time_step"));
    COMPONENTS.forEach((name, c) => {
      table.columns[name].push(parseNumber(cells[c + 1] ?? "", i + 1, name));
    });
  }
  if (table.timeSteps.length === 0) {
    throw new CsvFormatError("CSV has a header but no data rows");
  }
  return table;
}
