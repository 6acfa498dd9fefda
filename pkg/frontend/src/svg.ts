/**
 * SVG rendering of a dispersion panel.
 *
 * Pure string templating over the plot model: axes with ticks, one polyline
 * per angular momentum (labeled), the dashed reference line mu = b, and
 * circular markers at the line crossings.  Rendering the same model twice
 * yields byte-identical output.
 */

import { PlotModel } from "./model.js";

const WIDTH = 640;
const HEIGHT = 480;
const MARGIN = { left: 56, right: 16, top: 28, bottom: 44 };

const PALETTE = [
  "#1f77b4",
  "#d62728",
  "#2ca02c",
  "#9467bd",
  "#ff7f0e",
  "#8c564b",
  "#17becf",
  "#7f7f7f",
];

function fmt(x: number): string {
  return Number(x.toFixed(3)).toString();
}

function ticks(lo: number, hi: number, count: number): number[] {
  const out: number[] = [];
  const step = (hi - lo) / count;
  for (let i = 0; i <= count; i++) out.push(lo + i * step);
  return out;
}

export function renderSvg(model: PlotModel): string {
  const [b0, b1] = model.bRange;
  const [m0, m1] = model.muRange;
  const plotW = WIDTH - MARGIN.left - MARGIN.right;
  const plotH = HEIGHT - MARGIN.top - MARGIN.bottom;
  const sx = (b: number) => MARGIN.left + ((b - b0) / (b1 - b0)) * plotW;
  const sy = (mu: number) => MARGIN.top + plotH - ((mu - m0) / (m1 - m0)) * plotH;
  const inside = (b: number, mu: number) => b >= b0 && b <= b1 && mu >= m0 && mu <= m1;

  const parts: string[] = [];
  parts.push(
    `<svg xmlns="http://www.w3.org/2000/svg" width="${WIDTH}" height="${HEIGHT}" ` +
      `viewBox="0 0 ${WIDTH} ${HEIGHT}" font-family="sans-serif" font-size="12">`,
  );
  parts.push(`<rect width="${WIDTH}" height="${HEIGHT}" fill="white"/>`);
  parts.push(
    `<text x="${WIDTH / 2}" y="16" text-anchor="middle">dispersion curves, nu = ${fmt(
      model.nu,
    )}</text>`,
  );

  // axes and ticks
  const axis = `stroke="black" stroke-width="1"`;
  parts.push(
    `<line x1="${MARGIN.left}" y1="${MARGIN.top + plotH}" x2="${MARGIN.left + plotW}" ` +
      `y2="${MARGIN.top + plotH}" ${axis}/>`,
  );
  parts.push(
    `<line x1="${MARGIN.left}" y1="${MARGIN.top}" x2="${MARGIN.left}" ` +
      `y2="${MARGIN.top + plotH}" ${axis}/>`,
  );
  for (const t of ticks(b0, b1, 8)) {
    const x = sx(t);
    parts.push(`<line x1="${fmt(x)}" y1="${MARGIN.top + plotH}" x2="${fmt(x)}" y2="${
      MARGIN.top + plotH + 5
    }" ${axis}/>`);
    parts.push(
      `<text x="${fmt(x)}" y="${MARGIN.top + plotH + 20}" text-anchor="middle">${fmt(t)}</text>`,
    );
  }
  for (const t of ticks(m0, m1, 5)) {
    const y = sy(t);
    parts.push(`<line x1="${MARGIN.left - 5}" y1="${fmt(y)}" x2="${MARGIN.left}" y2="${fmt(
      y,
    )}" ${axis}/>`);
    parts.push(
      `<text x="${MARGIN.left - 9}" y="${fmt(y + 4)}" text-anchor="end">${fmt(t)}</text>`,
    );
  }
  parts.push(
    `<text x="${MARGIN.left + plotW / 2}" y="${HEIGHT - 8}" text-anchor="middle">b</text>`,
  );
  parts.push(
    `<text x="14" y="${MARGIN.top + plotH / 2}" text-anchor="middle" ` +
      `transform="rotate(-90 14 ${MARGIN.top + plotH / 2})">mu</text>`,
  );

  if (model.showReferenceLine) {
    const bEnd = Math.min(b1, m1);
    parts.push(
      `<line class="reference" x1="${fmt(sx(Math.max(b0, m0)))}" y1="${fmt(
        sy(Math.max(b0, m0)),
      )}" x2="${fmt(sx(bEnd))}" y2="${fmt(sy(bEnd))}" stroke="#555" stroke-width="1" ` +
        `stroke-dasharray="6 4"/>`,
    );
  }

  model.curves.forEach((curve, idx) => {
    const color = PALETTE[idx % PALETTE.length];
    const pts = curve.points
      .filter(([b, mu]) => inside(b, mu))
      .map(([b, mu]) => `${fmt(sx(b))},${fmt(sy(mu))}`)
      .join(" ");
    if (pts.length === 0) return;
    parts.push(
      `<polyline class="curve" data-m="${curve.m}" points="${pts}" fill="none" ` +
        `stroke="${color}" stroke-width="1.6"/>`,
    );
    const lastVisible = [...curve.points].reverse().find(([b, mu]) => inside(b, mu));
    if (lastVisible) {
      parts.push(
        `<text x="${fmt(sx(lastVisible[0]) - 12)}" y="${fmt(sy(lastVisible[1]) - 6)}" ` +
          `fill="${color}">m=${curve.m}</text>`,
      );
    }
  });

  for (const crossing of model.crossings) {
    if (!inside(crossing.b, crossing.b)) continue;
    parts.push(
      `<circle class="crossing" data-m="${crossing.m}" data-b="${crossing.b}" ` +
        `cx="${fmt(sx(crossing.b))}" cy="${fmt(sy(crossing.b))}" r="4" fill="black"/>`,
    );
  }

  parts.push("</svg>");
  return parts.join("\n") + "\n";
}
