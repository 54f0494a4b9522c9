// Deterministic force layout: seeded positions, fixed iteration count, no
// randomness at render time, so the same graph always lands identically.

export interface LaidOutVertex {
  id: number;
  x: number;
  y: number;
}

function mulberry32(seed: number): () => number {
  let a = seed >>> 0;
  return () => {
    a = (a + 0x6d2b79f5) >>> 0;
    let t = a;
    t = Math.imul(t ^ (t >>> 15), t | 1);
    t ^= t + Math.imul(t ^ (t >>> 7), t | 61);
    return ((t ^ (t >>> 14)) >>> 0) / 4294967296;
  };
}

export function forceLayout(
  vertices: number[],
  edges: [number, number][],
  width = 480,
  height = 360,
  iterations = 250,
): LaidOutVertex[] {
  const n = vertices.length;
  if (n === 0) return [];
  const rand = mulberry32(20161 + n * 7);
  const px = vertices.map(() => rand() * width);
  const py = vertices.map(() => rand() * height);
  const index = new Map(vertices.map((v, k) => [v, k]));
  const k = Math.sqrt((width * height) / n);

  for (let it = 0; it < iterations; it++) {
    const temp = 0.1 * Math.max(width, height) * (1 - it / iterations);
    const dx = new Array<number>(n).fill(0);
    const dy = new Array<number>(n).fill(0);
    for (let i = 0; i < n; i++) {
      for (let j = i + 1; j < n; j++) {
        let ex = px[i]! - px[j]!;
        let ey = py[i]! - py[j]!;
        let d = Math.hypot(ex, ey);
        if (d < 1e-6) {
          ex = 0.01 * (i - j);
          ey = 0.01;
          d = Math.hypot(ex, ey);
        }
        const rep = (k * k) / d;
        dx[i]! += (ex / d) * rep;
        dy[i]! += (ey / d) * rep;
        dx[j]! -= (ex / d) * rep;
        dy[j]! -= (ey / d) * rep;
      }
    }
    for (const [s, t] of edges) {
      const i = index.get(s)!;
      const j = index.get(t)!;
      const ex = px[i]! - px[j]!;
      const ey = py[i]! - py[j]!;
      const d = Math.hypot(ex, ey) || 1e-6;
      const att = (d * d) / k;
      dx[i]! -= (ex / d) * att;
      dy[i]! -= (ey / d) * att;
      dx[j]! += (ex / d) * att;
      dy[j]! += (ey / d) * att;
    }
    for (let i = 0; i < n; i++) {
      const d = Math.hypot(dx[i]!, dy[i]!) || 1e-6;
      const step = Math.min(d, temp);
      px[i]! += (dx[i]! / d) * step;
      py[i]! += (dy[i]! / d) * step;
      px[i] = Math.min(width - 30, Math.max(30, px[i]!));
      py[i] = Math.min(height - 30, Math.max(30, py[i]!));
    }
  }
  return vertices.map((v, i) => ({
    id: v,
    x: Math.round(px[i]! * 100) / 100,
    y: Math.round(py[i]! * 100) / 100,
  }));
}
