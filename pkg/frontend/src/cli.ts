#!/usr/bin/env node
/**
 * render_dispersion INPUT.csv --nu 0.25 --out fig.svg
 *                   [--m 0,1,2] [--bmax 8] [--mumax 10]
 *                   [--no-reference] [--no-crossings]
 *
 * Renders one dispersion panel (vector SVG) from the sweep CSV.
 * Exit codes: 0 success, 2 bad arguments, 3 schema/selection error.
 */

import { SchemaError, EmptySelection } from "./csv.js";
import { render } from "./render.js";

function fail(message: string, code: number): never {
  console.error(message);
  process.exit(code);
}

export function main(argv: string[]): number {
  let input: string | null = null;
  let nu: number | null = null;
  let out: string | null = null;
  let mFilter: number[] | null = null;
  let bMax = 8;
  let muMax = 10;
  let reference = true;
  let crossings = true;

  for (let i = 0; i < argv.length; i++) {
    const arg = argv[i];
    const next = () => {
      if (i + 1 >= argv.length) fail(`missing value after ${arg}`, 2);
      return argv[++i];
    };
    if (arg === "--nu") nu = Number(next());
    else if (arg === "--out") out = next();
    else if (arg === "--m") mFilter = next().split(",").map((t) => Number(t));
    else if (arg === "--bmax") bMax = Number(next());
    else if (arg === "--mumax") muMax = Number(next());
    else if (arg === "--no-reference") reference = false;
    else if (arg === "--no-crossings") crossings = false;
    else if (!arg.startsWith("--") && input === null) input = arg;
    else fail(`unknown argument ${arg}`, 2);
  }
  if (input === null || nu === null || out === null || Number.isNaN(nu)) {
    fail("usage: render_dispersion INPUT.csv --nu NU --out FILE.svg [--m 0,1,2]", 2);
  }
  if (mFilter !== null && mFilter.some((m) => !Number.isInteger(m))) {
    fail("--m expects a comma list of integers", 2);
  }

  try {
    const model = render({
      inputCsv: input,
      nu,
      mFilter,
      outputImage: out,
      showReferenceLine: reference,
      markCrossings: crossings,
      bRange: [0, bMax],
      muRange: [0, muMax],
    });
    console.log(
      `wrote ${out} (${model.curves.length} curves, ${model.crossings.length} crossings)`,
    );
    return 0;
  } catch (err) {
    if (err instanceof SchemaError || err instanceof EmptySelection) {
      fail(String(err), 3);
    }
    throw err;
  }
}

main(process.argv.slice(2));
