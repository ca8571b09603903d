import { z } from "zod";

/**
 * Wire schema for the scenario documents the service accepts.  The
 * service rejects unknown fields, so the schemas are strict, and the
 * cross-field invariants the service enforces with a 422 are encoded
 * here too: slider output that passes this validator is guaranteed to
 * be accepted server-side.
 */

export const SUM_TOLERANCE = 1e-9;

export const firmSchema = z
  .object({
    name: z.string().min(1),
    share: z.number().min(0).max(1),
    loyalty: z.number().min(0).max(1),
    leave_rate: z.number().min(0).max(1),
  })
  .strict()
  .refine((firm) => firm.loyalty + firm.leave_rate <= 1 + SUM_TOLERANCE, {
    message: "loyalty + leave_rate must not exceed 1",
  });

export const scenarioSchema = z
  .object({
    version: z.literal(1),
    population: z.number().positive().optional(),
    growth_rate: z.number().min(0),
    firms: z.array(firmSchema).min(1),
  })
  .strict()
  .refine(
    (doc) => {
      const total = doc.firms.reduce((sum, firm) => sum + firm.share, 0);
      return Math.abs(total - 1) <= SUM_TOLERANCE;
    },
    { message: "firm shares must sum to 1" },
  );

export type Firm = z.infer<typeof firmSchema>;
export type ScenarioDoc = z.infer<typeof scenarioSchema>;

/**
 * Renormalize shares after editing one firm's slider: the edited firm
 * is pinned at its new value and the remaining firms scale
 * proportionally so the total returns to exactly 1.  When the other
 * firms previously held zero weight the remainder is split evenly.
 */
export function renormalizeShares(
  shares: readonly number[],
  editedIndex: number,
  newValue: number,
): number[] {
  if (editedIndex < 0 || editedIndex >= shares.length) {
    throw new RangeError(`no firm at index ${editedIndex}`);
  }
  const pinned = Math.min(1, Math.max(0, newValue));
  if (shares.length === 1) {
    return [1];
  }
  const remainder = 1 - pinned;
  const othersTotal = shares.reduce(
    (sum, value, i) => (i === editedIndex ? sum : sum + value),
    0,
  );
  const result = shares.map((value, i) => {
    if (i === editedIndex) {
      return pinned;
    }
    if (othersTotal <= 0) {
      return remainder / (shares.length - 1);
    }
    return (value / othersTotal) * remainder;
  });
  // absorb the final floating-point residue into the largest
  // non-edited entry so the sum is exactly 1
  const residue = 1 - result.reduce((sum, value) => sum + value, 0);
  let target = editedIndex === 0 ? 1 : 0;
  result.forEach((value, i) => {
    if (i !== editedIndex && value > result[target]) {
      target = i;
    }
  });
  result[target] += residue;
  return result;
}

/** The q-allocation sliders renormalize by the same pin-and-scale rule. */
export const renormalizeQ = renormalizeShares;
