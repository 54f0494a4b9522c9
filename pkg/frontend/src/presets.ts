import { StateJson } from "./types.js";

export interface Preset {
  name: string;
  label: string;
  state: StateJson;
}

export const PRESETS: Preset[] = [
  {
    name: "a3-path",
    label: "A3 path quiver",
    state: {
      vertices: [1, 2, 3],
      arrows: [
        { id: "a", source: 1, target: 2 },
        { id: "b", source: 2, target: 3 },
      ],
    },
  },
  {
    name: "graded-triangle",
    label: "Graded triangle with relation arrow",
    state: {
      vertices: [1, 2, 3],
      arrows: [
        { id: "a", source: 2, target: 1, degree: 0 },
        { id: "b", source: 3, target: 2, degree: 0 },
        { id: "c", source: 1, target: 3, degree: 0 },
        { id: "r0", source: 1, target: 3, degree: 1 },
      ],
      potential: [{ coeff: "1", cycle: ["b", "a", "r0"] }],
    },
  },
  {
    name: "four-vertex-potential",
    label: "Four-vertex quiver with cycle potential",
    state: {
      vertices: [1, 2, 3, 4],
      arrows: [
        { id: "a", source: 1, target: 2 },
        { id: "b", source: 2, target: 3 },
        { id: "c", source: 1, target: 3 },
        { id: "d", source: 3, target: 4 },
        { id: "e", source: 4, target: 1 },
      ],
      potential: [{ coeff: "1", cycle: ["c", "d", "e"] }],
    },
  },
  {
    name: "hexagon-fan",
    label: "Hexagon, fan triangulation",
    state: {
      sides: [
        { id: "1", kind: "arc" },
        { id: "2", kind: "arc" },
        { id: "3", kind: "arc" },
        { id: "b1", kind: "boundary" },
        { id: "b2", kind: "boundary" },
        { id: "b3", kind: "boundary" },
        { id: "b4", kind: "boundary" },
        { id: "b5", kind: "boundary" },
        { id: "b6", kind: "boundary" },
      ],
      triangles: [
        ["1", "b2", "b1"],
        ["2", "b3", "1"],
        ["3", "b4", "2"],
        ["b6", "b5", "3"],
      ],
    },
  },
];

export function presetByName(name: string): Preset {
  const hit = PRESETS.find((p) => p.name === name);
  if (!hit) throw new Error(`no preset ${name}`);
  return hit;
}
