/**
 * Analysis-class badge with a residual histogram and the verdict on
 * whether proportional covariation minimizes the divergence.
 */

import { formatBackendFloat } from "./format.js";
import { Store } from "./store.js";

const KIND_LABELS: Record<string, string> = {
  independent: "independent",
  fully_dependent: "fully dependent",
  conditionally_dependent: "conditionally dependent",
  other: "other",
};

export function mountBadgePanel(root: HTMLElement, store: Store): void {
  root.classList.add("badge-panel");

  const render = () => {
    const { classify, project, projectBlocked } = store.state;
    root.replaceChildren();
    if (!classify) {
      root.append(text("p", "muted", "Run an analysis to classify the variation."));
      return;
    }

    const badge = text("span", `badge kind-${classify.kind}`,
                       KIND_LABELS[classify.kind] ?? classify.kind);
    root.append(badge);

    const stats = document.createElement("dl");
    addStat(stats, "samples", String(classify.samples));
    addStat(stats, "max |residual|", formatBackendFloat(classify.max_abs_residual));
    addStat(stats, "max |identity gap|",
            formatBackendFloat(classify.max_identity_gap));
    root.append(stats);

    root.append(histogram(classify.residuals));

    if (projectBlocked) {
      root.append(text("p", "verdict blocked", projectBlocked));
    } else if (project) {
      const verdict = project.matches_proportional
        ? "proportional covariation is optimal (within one grid step)"
        : "proportional covariation is NOT optimal";
      const detail =
        ` — minimum KL ${formatBackendFloat(project.min_kl)}, ` +
        `proportional KL ${formatBackendFloat(project.proportional_kl)}`;
      root.append(
        text(
          "p",
          project.matches_proportional ? "verdict ok" : "verdict bad",
          verdict + detail,
        ),
      );
    }
  };

  store.subscribe(render);
  render();
}

function histogram(residuals: number[]): HTMLElement {
  const wrap = document.createElement("div");
  wrap.className = "histogram";
  if (residuals.length === 0) return wrap;
  const lo = Math.min(...residuals, 0);
  const hi = Math.max(...residuals, 0);
  const span = hi - lo || 1;
  const buckets = new Array<number>(12).fill(0);
  for (const r of residuals) {
    const b = Math.min(11, Math.floor(((r - lo) / span) * 12));
    buckets[b] += 1;
  }
  const peak = Math.max(...buckets);
  for (const count of buckets) {
    const bar = document.createElement("div");
    bar.className = "hist-bar";
    bar.style.height = `${(count / peak) * 40}px`;
    bar.title = String(count);
    wrap.append(bar);
  }
  const caption = text(
    "div",
    "hist-caption",
    `residuals in [${formatBackendFloat(lo)}, ${formatBackendFloat(hi)}]`,
  );
  wrap.append(caption);
  return wrap;
}

function addStat(list: HTMLElement, name: string, value: string): void {
  const dt = document.createElement("dt");
  dt.textContent = name;
  const dd = document.createElement("dd");
  dd.textContent = value;
  list.append(dt, dd);
}

function text(tag: string, className: string, content: string): HTMLElement {
  const node = document.createElement(tag);
  node.className = className;
  node.textContent = content;
  return node;
}
