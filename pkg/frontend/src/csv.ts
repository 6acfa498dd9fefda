/**
 * Reader for the dispersion-sweep CSV artifact.
 *
 * Documented schema: header `nu,gamma,m,level,b,mu,err`, one row per
 * (m, level, b) grid point, numbers in C locale.  Failed sweep points are
 * recorded in-band as `mu = nan`, `err = inf` and are kept here; the model
 * layer decides how to treat them.
 */

export interface DispersionRow {
  nu: number;
  gamma: number;
  m: number;
  level: number;
  b: number;
  mu: number;
  err: number;
}

export class SchemaError extends Error {}
export class EmptySelection extends Error {}

export const DISPERSION_HEADER = "nu,gamma,m,level,b,mu,err";

function parseNumber(token: string, line: number, column: string): number {
  const trimmed = token.trim();
  if (trimmed === "nan") return Number.NaN;
  if (trimmed === "inf") return Number.POSITIVE_INFINITY;
  if (trimmed === "-inf") return Number.NEGATIVE_INFINITY;
  const value = Number(trimmed);
  if (trimmed === "" || Number.isNaN(value)) {
    throw new SchemaError(`line ${line}: cannot parse ${column} from "${token}"`);
  }
  return value;
}

function parseInteger(token: string, line: number, column: string): number {
  const value = parseNumber(token, line, column);
  if (!Number.isInteger(value)) {
    throw new SchemaError(`line ${line}: ${column} must be an integer, got "${token}"`);
  }
  return value;
}

export function parseDispersionCsv(text: string): DispersionRow[] {
  const lines = text.split(/\r?\n/).filter((l) => l.length > 0);
  if (lines.length === 0 || lines[0] !== DISPERSION_HEADER) {
    throw new SchemaError(
      `expected header "${DISPERSION_HEADER}", got "${lines[0] ?? "<empty file>"}"`,
    );
  }
  const rows: DispersionRow[] = [];
  for (let i = 1; i < lines.length; i++) {
    const parts = lines[i].split(",");
    if (parts.length !== 7) {
      throw new SchemaError(`line ${i + 1}: expected 7 fields, got ${parts.length}`);
    }
    rows.push({
      nu: parseNumber(parts[0], i + 1, "nu"),
      gamma: parseNumber(parts[1], i + 1, "gamma"),
      m: parseInteger(parts[2], i + 1, "m"),
      level: parseInteger(parts[3], i + 1, "level"),
      b: parseNumber(parts[4], i + 1, "b"),
      mu: parseNumber(parts[5], i + 1, "mu"),
      err: parseNumber(parts[6], i + 1, "err"),
    });
  }
  return rows;
}
