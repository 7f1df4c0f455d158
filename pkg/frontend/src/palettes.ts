import type { MatrixJson } from "./types.js";

// Curated matrices for continuous games: unitaries, projections, and
// partial isometries, generated per dimension.  Free-form entry is out of
// scope; every palette element already satisfies the unit-ball rule.

function zeros(m: number): number[][] {
  return Array.from({ length: m }, () => new Array(m).fill(0));
}

function asMatrix(m: number, re: number[][], im?: number[][]): MatrixJson {
  return { m, re, im: im ?? zeros(m) };
}

export interface PaletteEntry {
  name: string;
  matrix: MatrixJson;
}

export function palette(m: number): PaletteEntry[] {
  const out: PaletteEntry[] = [];
  const eye = zeros(m);
  for (let i = 0; i < m; i++) eye[i][i] = 1;
  out.push({ name: "identity", matrix: asMatrix(m, eye) });
  out.push({ name: "zero", matrix: asMatrix(m, zeros(m)) });

  // block shift: sends the back half of the basis onto the front half
  const half = Math.floor(m / 2);
  const shift = zeros(m);
  for (let i = 0; i < half; i++) shift[i][half + i] = 1;
  out.push({ name: m % 2 === 0 ? "halving shift" : "truncated shift", matrix: asMatrix(m, shift) });
  const shiftAdj = zeros(m);
  for (let i = 0; i < half; i++) shiftAdj[half + i][i] = 1;
  out.push({ name: "shift adjoint", matrix: asMatrix(m, shiftAdj) });

  // rank-(m-half) diagonal projection
  const diagProj = zeros(m);
  for (let i = half; i < m; i++) diagProj[i][i] = 1;
  out.push({ name: "back-half projection", matrix: asMatrix(m, diagProj) });

  // symmetric rank-one projection onto the all-ones direction
  const ones = zeros(m);
  for (let i = 0; i < m; i++) for (let j = 0; j < m; j++) ones[i][j] = 1 / m;
  out.push({ name: "mean projection", matrix: asMatrix(m, ones) });

  if (m === 2) {
    for (const [label, angle] of [
      ["rotation pi/6", Math.PI / 6],
      ["rotation pi/4", Math.PI / 4],
      ["rotation pi/2", Math.PI / 2],
    ] as const) {
      const c = Math.cos(angle);
      const s = Math.sin(angle);
      out.push({
        name: label,
        matrix: asMatrix(2, [
          [c, -s],
          [s, c],
        ]),
      });
    }
    out.push({
      name: "diagonal line projection",
      matrix: asMatrix(2, [
        [0.5, 0.5],
        [0.5, 0.5],
      ]),
    });
  } else {
    // planar rotation acting on the first two coordinates
    const rot = zeros(m);
    for (let i = 2; i < m; i++) rot[i][i] = 1;
    const c = Math.SQRT1_2;
    rot[0][0] = c;
    rot[0][1] = -c;
    rot[1][0] = c;
    rot[1][1] = c;
    out.push({ name: "corner rotation pi/4", matrix: asMatrix(m, rot) });
  }
  return out;
}

export function identityPermutation(m: number): number[] {
  return Array.from({ length: m }, (_, i) => i);
}

export function rotationPermutation(m: number, shift: number): number[] {
  return Array.from({ length: m }, (_, i) => (i + shift) % m);
}
