/**
 * Feasible-region geometry for the two-firm case.
 *
 * Allocations live on the segment q1 + q2 = 1 with q1, q2 >= 0; the
 * stability bounds add q1 >= q1min and q2 >= q2min.  Projected onto the
 * (q1, q2) plane the admissible set {q1 >= q1min, q2 >= q2min,
 * q1 + q2 <= 1} is a right triangle with vertices
 * (q1min, 1 - q1min), (1 - q2min, q2min) and (q1min, q2min); its
 * hypotenuse is the segment of actual allocations.
 */

export interface Point {
  x: number;
  y: number;
}

export interface FeasibleTriangle {
  vertices: [Point, Point, Point];
  /** Slack along the allocation segment: 1 - q1min - q2min. */
  slack: number;
}

/**
 * Vertices of the feasible triangle, or null when the bounds leave no
 * admissible allocation (q1min + q2min > 1, i.e. not viable).
 */
export function feasibleTriangle(
  q1min: number,
  q2min: number,
): FeasibleTriangle | null {
  // tolerate floating residue at the exact-boundary (slack 0) case,
  // matching the service's viability check
  const SLACK_TOLERANCE = 1e-12;
  const slack = Math.max(1 - q1min - q2min, 0);
  if (1 - q1min - q2min < -SLACK_TOLERANCE) {
    return null;
  }
  return {
    vertices: [
      { x: q1min, y: 1 - q1min },
      { x: 1 - q2min, y: q2min },
      { x: q1min, y: q2min },
    ],
    slack,
  };
}

/** SVG polygon points attribute for a triangle in unit coordinates. */
export function trianglePoints(
  triangle: FeasibleTriangle,
  size: number,
): string {
  return triangle.vertices
    .map((p) => `${p.x * size},${(1 - p.y) * size}`)
    .join(" ");
}
