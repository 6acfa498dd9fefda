/**
 * Plot data model for dispersion-curve panels.
 *
 * A panel shows, for one flux offset nu, the lowest dispersion curve of each
 * requested angular momentum against the field strength, the reference line
 * mu = b, and markers where each curve crosses that line.  Crossings are
 * located by linear interpolation of mu - b between adjacent grid points;
 * for the exterior-disk family they sit at b = 2(m - nu) exactly, which the
 * test-suite verifies against the data-derived positions.
 */

import { DispersionRow, EmptySelection } from "./csv.js";

export interface Curve {
  m: number;
  points: Array<[number, number]>; // (b, mu), b ascending
}

export interface Crossing {
  m: number;
  b: number;
}

export interface PlotModel {
  nu: number;
  curves: Curve[];
  crossings: Crossing[];
  showReferenceLine: boolean;
  bRange: [number, number];
  muRange: [number, number];
}

export interface ModelOptions {
  nu: number;
  mFilter?: number[] | null;
  showReferenceLine?: boolean;
  markCrossings?: boolean;
  bRange?: [number, number];
  muRange?: [number, number];
}

const NU_MATCH_TOL = 1e-9;

export function detectCrossings(points: Array<[number, number]>): number[] {
  const out: number[] = [];
  for (let i = 0; i + 1 < points.length; i++) {
    const [b1, mu1] = points[i];
    const [b2, mu2] = points[i + 1];
    const g1 = mu1 - b1;
    const g2 = mu2 - b2;
    if (!Number.isFinite(g1) || !Number.isFinite(g2)) continue;
    if (g1 === 0) {
      out.push(b1);
    } else if (g1 * g2 < 0) {
      out.push(b1 + ((b2 - b1) * g1) / (g1 - g2));
    }
  }
  const last = points[points.length - 1];
  if (last && last[1] - last[0] === 0) out.push(last[0]);
  return out;
}

export function buildModel(rows: DispersionRow[], opts: ModelOptions): PlotModel {
  const filter = opts.mFilter ?? null;
  const byM = new Map<number, Array<[number, number]>>();
  for (const row of rows) {
    if (row.level !== 0) continue;
    if (Math.abs(row.nu - opts.nu) > NU_MATCH_TOL) continue;
    if (filter !== null && !filter.includes(row.m)) continue;
    if (!Number.isFinite(row.mu)) continue;
    if (!byM.has(row.m)) byM.set(row.m, []);
    byM.get(row.m)!.push([row.b, row.mu]);
  }
  if (byM.size === 0) {
    throw new EmptySelection(`no curves left for nu=${opts.nu} after filtering`);
  }
  const curves: Curve[] = [...byM.entries()]
    .sort((a, b) => a[0] - b[0])
    .map(([m, pts]) => ({ m, points: pts.sort((p, q) => p[0] - q[0]) }));

  const crossings: Crossing[] = [];
  if (opts.markCrossings ?? true) {
    for (const curve of curves) {
      for (const b of detectCrossings(curve.points)) {
        crossings.push({ m: curve.m, b });
      }
    }
  }

  const bMax = Math.max(...curves.flatMap((c) => c.points.map((p) => p[0])));
  return {
    nu: opts.nu,
    curves,
    crossings,
    showReferenceLine: opts.showReferenceLine ?? true,
    bRange: opts.bRange ?? [0, Math.max(8, bMax)],
    muRange: opts.muRange ?? [0, 10],
  };
}

/** Angular momentum whose curve is lowest at the smallest available field. */
export function minimizerAtSmallField(model: PlotModel): number {
  const b0 = Math.min(...model.curves.flatMap((c) => (c.points[0] ? [c.points[0][0]] : [])));
  let best: { m: number; mu: number } | null = null;
  for (const curve of model.curves) {
    const pt = curve.points.find((p) => p[0] === b0);
    if (!pt) continue;
    if (best === null || pt[1] < best.mu) best = { m: curve.m, mu: pt[1] };
  }
  if (best === null) throw new EmptySelection("no finite data at the smallest field");
  return best.m;
}
