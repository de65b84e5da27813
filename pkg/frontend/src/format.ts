/** Display formatting. Every on-screen fraction goes through these. */

/** Round with banker's (half-even) tie-breaking at the given decimals. */
export function roundHalfEven(value: number, decimals = 0): number {
  const scale = Math.pow(10, decimals);
  const scaled = value * scale;
  const floor = Math.floor(scaled);
  const diff = scaled - floor;
  const eps = 1e-9 * Math.max(1, Math.abs(scaled));
  let units: number;
  if (diff > 0.5 + eps) {
    units = floor + 1;
  } else if (diff < 0.5 - eps) {
    units = floor;
  } else {
    units = floor % 2 === 0 ? floor : floor + 1;
  }
  return units / scale;
}

/** A fraction in [0, 1] as a percentage with one decimal, e.g. "33.3%". */
export function formatPercent(fraction: number): string {
  return `${roundHalfEven(fraction * 100, 1).toFixed(1)}%`;
}

/** Signed gap to the 1/(n+1) benchmark, e.g. "+16.7 pts vs 33.3%". */
export function gapText(fraction: number, bound: number): string {
  const gap = roundHalfEven((fraction - bound) * 100, 1);
  const sign = gap >= 0 ? "+" : "";
  return `${sign}${gap.toFixed(1)} pts vs ${formatPercent(bound)}`;
}

/** Whether the fraction meets the 1/(n+1) guarantee (display tolerance). */
export function meetsGuarantee(fraction: number, bound: number): boolean {
  return fraction >= bound - 1e-3;
}

export function boundLabel(dim: number): string {
  return `1/(n+1) = 1/${dim + 1}`;
}
