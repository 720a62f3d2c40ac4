/**
 * Sensitivity curves: one polyline per scheme with gaps where a scheme is
 * undefined, a draggable target-probability line, crossing markers, and a
 * metric toggle (event probability / KL / CD). Every plotted number comes
 * from the backend response.
 */

import { Curve, SweepPoint } from "./api.js";
import { formatBackendFloat } from "./format.js";
import { Store } from "./store.js";

const WIDTH = 640;
const HEIGHT = 300;
const PAD = 40;
const COLORS: Record<string, string> = {
  proportional: "#1f77b4",
  uniform: "#ff7f0e",
  order_preserving: "#2ca02c",
};

type Metric = "probability" | "kl" | "cd";

export function mountCurvePanel(root: HTMLElement, store: Store): void {
  root.classList.add("curve-panel");
  let metric: Metric = "probability";
  let targetLine = 0.3;

  const value = (p: SweepPoint): number | null => p[metric];

  const render = () => {
    const { curves, event } = store.state;
    root.replaceChildren();

    const controls = document.createElement("div");
    controls.className = "metric-row";
    for (const m of ["probability", "kl", "cd"] as Metric[]) {
      const button = document.createElement("button");
      button.textContent = m;
      button.className = m === metric ? "active" : "";
      button.onclick = () => {
        metric = m;
        render();
      };
      controls.append(button);
    }
    root.append(controls);

    if (!curves) {
      const p = document.createElement("p");
      p.className = "muted";
      p.textContent = event
        ? "Pick a parameter to sweep."
        : "Choose an event (e.g. Y3=3) to draw sensitivity curves.";
      root.append(p);
      return;
    }

    const all = curves.curves.flatMap((c) =>
      c.points.map(value).filter((v): v is number => v !== null),
    );
    if (all.length === 0) return;
    const lo = Math.min(...all, metric === "probability" ? targetLine : Infinity);
    const hi = Math.max(...all, metric === "probability" ? targetLine : -Infinity);
    const span = hi - lo || 1;
    const sx = (t: number) => PAD + t * (WIDTH - 2 * PAD);
    const sy = (v: number) =>
      HEIGHT - PAD - ((v - lo) / span) * (HEIGHT - 2 * PAD);

    const svg = document.createElementNS("http://www.w3.org/2000/svg", "svg");
    svg.setAttribute("viewBox", `0 0 ${WIDTH} ${HEIGHT}`);
    svg.setAttribute("class", "chart");

    for (const curve of curves.curves) {
      for (const segment of segments(curve)) {
        const line = document.createElementNS(
          "http://www.w3.org/2000/svg",
          "polyline",
        );
        line.setAttribute(
          "points",
          segment
            .map((p) => `${sx(p.targets[0])},${sy(value(p) as number)}`)
            .join(" "),
        );
        line.setAttribute("fill", "none");
        line.setAttribute("stroke", COLORS[curve.scheme] ?? "#888");
        line.setAttribute("stroke-width", "1.5");
        svg.append(line);
      }
      if (metric === "probability") {
        for (const t of crossings(curve, targetLine)) {
          const mark = document.createElementNS(
            "http://www.w3.org/2000/svg",
            "circle",
          );
          mark.setAttribute("cx", String(sx(t)));
          mark.setAttribute("cy", String(sy(targetLine)));
          mark.setAttribute("r", "4");
          mark.setAttribute("fill", COLORS[curve.scheme] ?? "#888");
          svg.append(mark);
        }
      }
    }

    if (metric === "probability") {
      const line = document.createElementNS("http://www.w3.org/2000/svg", "line");
      line.setAttribute("x1", String(PAD));
      line.setAttribute("x2", String(WIDTH - PAD));
      line.setAttribute("y1", String(sy(targetLine)));
      line.setAttribute("y2", String(sy(targetLine)));
      line.setAttribute("class", "target-line");
      svg.append(line);
      svg.onpointerdown = (down) => {
        const move = (ev: PointerEvent) => {
          const box = svg.getBoundingClientRect();
          const frac = 1 - (ev.clientY - box.top) / box.height;
          targetLine = Math.max(lo, Math.min(hi, lo + frac * span));
          render();
        };
        move(down);
        svg.onpointermove = move;
        svg.onpointerup = () => {
          svg.onpointermove = null;
          svg.onpointerup = null;
        };
      };
    }
    root.append(svg);

    const legend = document.createElement("div");
    legend.className = "legend";
    for (const curve of curves.curves) {
      const item = document.createElement("span");
      item.style.color = COLORS[curve.scheme] ?? "#888";
      const cross = metric === "probability" ? crossings(curve, targetLine) : [];
      item.textContent =
        cross.length > 0
          ? `${curve.scheme} (crosses ${formatBackendFloat(targetLine)} near ` +
            `${formatBackendFloat(cross[0])})`
          : curve.scheme;
      legend.append(item);
    }
    root.append(legend);
  };

  store.subscribe(render);
  render();
}

/** Consecutive defined points, split where the scheme has no value. */
export function segments(curve: Curve): SweepPoint[][] {
  const out: SweepPoint[][] = [];
  let current: SweepPoint[] = [];
  for (const p of curve.points) {
    if (p.probability === null) {
      if (current.length > 0) out.push(current);
      current = [];
    } else {
      current.push(p);
    }
  }
  if (current.length > 0) out.push(current);
  return out;
}

/** Grid abscissas where the curve straddles the target value. */
export function crossings(curve: Curve, target: number): number[] {
  const found: number[] = [];
  const pts = curve.points.filter((p) => p.probability !== null);
  for (let i = 0; i + 1 < pts.length; i += 1) {
    const a = pts[i].probability as number;
    const b = pts[i + 1].probability as number;
    if ((a - target) * (b - target) <= 0) {
      found.push(pts[i].targets[0]);
    }
  }
  return found;
}
