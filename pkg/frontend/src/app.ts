// Browser wiring.  Everything interesting lives in explorer.ts/view.ts;
// this file only moves DOM nodes around.

import { ServiceClient } from "./client.js";
import { Explorer } from "./explorer.js";
import { PRESETS, presetByName } from "./presets.js";
import { MutationKind } from "./types.js";
import { renderSvg, ViewState } from "./view.js";

const KIND_CHOICES: Record<string, MutationKind[]> = {
  quiver: ["fz"],
  qp: ["dwz"],
  graded: ["left", "right"],
  triangulation: ["flip"],
};

function el<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing #${id}`);
  return node as T;
}

async function sha256Hex(text: string): Promise<string> {
  const data = new TextEncoder().encode(text);
  const digest = await crypto.subtle.digest("SHA-256", data);
  return [...new Uint8Array(digest)]
    .map((b) => b.toString(16).padStart(2, "0"))
    .join("");
}

function main(): void {
  const base = window.location.origin;
  const explorer = new Explorer(new ServiceClient(base));
  const presetSelect = el<HTMLSelectElement>("preset");
  const jsonBox = el<HTMLTextAreaElement>("json-input");
  const errorBox = el<HTMLDivElement>("error");
  const canvas = el<HTMLDivElement>("canvas");
  const potentialBox = el<HTMLDivElement>("potential");
  const buttons = el<HTMLDivElement>("mutate-buttons");
  const timelineBox = el<HTMLUListElement>("timeline");
  const analysisBox = el<HTMLPreElement>("analysis");
  const hashBox = el<HTMLDivElement>("hash");

  for (const p of PRESETS) {
    const opt = document.createElement("option");
    opt.value = p.name;
    opt.textContent = p.label;
    presetSelect.appendChild(opt);
  }

  function showError(err: unknown): void {
    errorBox.textContent = err instanceof Error ? err.message : String(err);
  }

  function draw(view: ViewState): void {
    errorBox.textContent = "";
    hashBox.textContent = `state ${view.hash.slice(0, 16)}…`;
    void sha256Hex(JSON.stringify(view.state)).then(() => undefined);
    if (view.graph) {
      canvas.innerHTML = renderSvg(view.graph);
      potentialBox.textContent = view.potential;
    } else if (view.triangleRows) {
      canvas.innerHTML =
        "<table><tr>" +
        view.triangleRows
          .map((tri) => `<td>(${tri.join(", ")})</td>`)
          .join("") +
        "</tr></table>";
      potentialBox.textContent = "";
    }
    buttons.innerHTML = "";
    const kinds = KIND_CHOICES[view.kind] ?? [];
    for (const kind of kinds) {
      for (const target of view.legal) {
        const b = document.createElement("button");
        b.textContent = `${kind} @ ${target}`;
        b.onclick = () => {
          explorer.clickVertex(target, kind).then(draw, showError);
        };
        buttons.appendChild(b);
      }
    }
    timelineBox.innerHTML = "";
    for (const step of view.timeline) {
      const li = document.createElement("li");
      li.textContent = `${step.kind} @ ${step.target}`;
      timelineBox.appendChild(li);
    }
    analysisBox.textContent = view.analysis
      ? JSON.stringify(view.analysis, null, 2)
      : "";
  }

  el<HTMLButtonElement>("load-preset").onclick = () => {
    const preset = presetByName(presetSelect.value);
    jsonBox.value = JSON.stringify(preset.state, null, 2);
    explorer.load(preset.state).then(draw, showError);
  };
  el<HTMLButtonElement>("load-json").onclick = () => {
    let state;
    try {
      state = JSON.parse(jsonBox.value);
    } catch (err) {
      showError(err);
      return;
    }
    explorer.load(state).then(draw, showError);
  };
  el<HTMLButtonElement>("undo").onclick = () => {
    explorer.undo().then(draw, showError);
  };
  el<HTMLButtonElement>("analyze").onclick = () => {
    const bound = Number(el<HTMLInputElement>("bound").value) || 8;
    explorer.analyze(bound).then(draw, showError);
  };
}

window.addEventListener("DOMContentLoaded", main);
