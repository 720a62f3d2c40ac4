/**
 * Slider-driven covariation preview: pick parameters, drag targets, and
 * see the old vs new block values the backend computed.
 */

import { ParamInfo } from "./api.js";
import { barWidth, formatBackendFloat } from "./format.js";
import { Store } from "./store.js";

const SLIDER_STEPS = 998; // slider positions map to (0.001 .. 0.999)

function sliderBounds(param: ParamInfo, scheme: string): [number, number] | null {
  if (scheme === "order_preserving") {
    if (param.order_preserving_max === null) return null;
    return [0.001, param.order_preserving_max - 0.001];
  }
  return [0.001, 0.999];
}

export function mountCovaryPanel(
  root: HTMLElement,
  store: Store,
  onSliderChange: () => void,
): void {
  root.classList.add("covary-panel");

  const render = () => {
    const { model, vary, scheme, covary, error } = store.state;
    root.replaceChildren();
    if (!model) {
      root.append(el("p", "muted", "Load a model to begin."));
      return;
    }
    const schemeRow = el("div", "scheme-row");
    for (const name of ["proportional", "uniform", "order_preserving"]) {
      const button = el("button", name === scheme ? "active" : "");
      button.textContent = name;
      button.onclick = () => {
        store.state.scheme = name;
        onSliderChange();
      };
      schemeRow.append(button);
    }
    root.append(schemeRow);

    const newValues = new Map<number, number>();
    if (covary) {
      for (const change of covary.changes) newValues.set(change.index, change.new);
    }

    for (const block of model.blocks) {
      const section = el("div", "block");
      section.append(el("h3", "", `block ${block.index + 1}`));
      for (const j of block.params) {
        const param = model.params[j];
        section.append(paramRow(param, vary, scheme, newValues, store, onSliderChange));
      }
      root.append(section);
    }
    if (error) root.append(el("p", "error", error));
  };

  function paramRow(
    param: ParamInfo,
    vary: Record<string, number>,
    scheme: string,
    newValues: Map<number, number>,
    s: Store,
    notify: () => void,
  ): HTMLElement {
    const row = el("div", "param-row");
    const selected = param.label in vary;
    const title = el("label", "param-label");
    const check = document.createElement("input");
    check.type = "checkbox";
    check.checked = selected;
    check.onchange = () => {
      if (check.checked) s.setSlider(param.label, param.value);
      else s.clearSlider(param.label);
      notify();
    };
    title.append(check, document.createTextNode(` ${param.label}`));
    row.append(title);

    if (selected) {
      const bounds = sliderBounds(param, scheme);
      const slider = document.createElement("input");
      slider.type = "range";
      slider.min = "0";
      slider.max = String(SLIDER_STEPS);
      if (bounds === null) {
        slider.disabled = true;
        row.append(slider, el("span", "muted", "largest in block: no order-preserving move"));
      } else {
        const [lo, hi] = bounds;
        const value = vary[param.label];
        slider.value = String(Math.round(((value - lo) / (hi - lo)) * SLIDER_STEPS));
        slider.oninput = () => {
          const t = lo + (Number(slider.value) / SLIDER_STEPS) * (hi - lo);
          s.setSlider(param.label, t);
          notify();
        };
        row.append(slider);
        row.append(el("span", "target", formatBackendFloat(vary[param.label])));
      }
    }

    const bars = el("div", "bars");
    bars.append(bar("old", param.value));
    const updated = newValues.get(param.index);
    if (updated !== undefined) bars.append(bar("new", updated));
    row.append(bars);
    return row;
  }

  function bar(kind: string, value: number): HTMLElement {
    const wrap = el("div", `bar ${kind}`);
    const fill = el("div", "fill");
    fill.style.width = barWidth(value);
    const text = el("span", "value", formatBackendFloat(value));
    wrap.append(fill, text);
    return wrap;
  }

  store.subscribe(render);
  render();
}

function el(tag: string, className = "", text = ""): HTMLElement {
  const node = document.createElement(tag);
  if (className) node.className = className;
  if (text) node.textContent = text;
  return node;
}
