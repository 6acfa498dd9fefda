/**
 * Figure pipeline: CSV in, SVG panel out.
 */

import { readFileSync, writeFileSync } from "node:fs";

import { parseDispersionCsv } from "./csv.js";
import { buildModel, PlotModel } from "./model.js";
import { renderSvg } from "./svg.js";

export interface FigureSpec {
  inputCsv: string;
  nu: number;
  mFilter: number[] | null;
  outputImage: string;
  showReferenceLine: boolean;
  markCrossings: boolean;
  bRange?: [number, number];
  muRange?: [number, number];
}

export function render(spec: FigureSpec): PlotModel {
  const rows = parseDispersionCsv(readFileSync(spec.inputCsv, "utf-8"));
  const model = buildModel(rows, {
    nu: spec.nu,
    mFilter: spec.mFilter,
    showReferenceLine: spec.showReferenceLine,
    markCrossings: spec.markCrossings,
    bRange: spec.bRange,
    muRange: spec.muRange,
  });
  writeFileSync(spec.outputImage, renderSvg(model), "utf-8");
  return model;
}
