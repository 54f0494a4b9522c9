import { PotentialTermJson } from "./types.js";

// Cycles arrive in traversal order; products are written right-to-left, so
// the display reverses each cycle.  Multi-character arrow names get a
// separating dot to stay unambiguous.

export function termText(term: PotentialTermJson): string {
  const names = [...term.cycle].reverse();
  const sep = names.some((n) => n.length > 1) ? "·" : "";
  return names.join(sep);
}

export function coeffPrefix(coeff: string, first: boolean): string {
  if (coeff === "1") return first ? "" : " + ";
  if (coeff === "-1") return first ? "-" : " - ";
  if (coeff.startsWith("-")) {
    return (first ? "-" : " - ") + coeff.slice(1) + "·";
  }
  return (first ? "" : " + ") + coeff + "·";
}

export function potentialText(terms: PotentialTermJson[] | undefined): string {
  if (!terms || terms.length === 0) return "W = 0";
  const parts = terms.map(
    (t, k) => coeffPrefix(t.coeff, k === 0) + termText(t),
  );
  return "W = " + parts.join("");
}
