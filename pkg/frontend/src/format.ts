/**
 * Render a double exactly the way the backend serializes it.
 *
 * The backend emits shortest round-trip decimals (both in JSON and in its
 * CSV output). JavaScript's Number#toString is also shortest round-trip,
 * but the positional/scientific switchover points and the exponent layout
 * differ, so this reimplements the backend's formatting rules: scientific
 * notation below 1e-4 and at/above 1e16, a two-digit exponent, and a
 * trailing ".0" on integral positional values.
 */
export function formatBackendFloat(x: number): string {
  if (Number.isNaN(x)) return "nan";
  if (!Number.isFinite(x)) return x > 0 ? "inf" : "-inf";
  if (x === 0) return Object.is(x, -0) ? "-0.0" : "0.0";
  const abs = Math.abs(x);
  if (abs >= 1e16 || abs < 1e-4) {
    const [mantissa, exponent] = x.toExponential().split("e");
    const expNum = Number(exponent);
    const sign = expNum < 0 ? "-" : "+";
    const digits = Math.abs(expNum).toString().padStart(2, "0");
    return `${mantissa}e${sign}${digits}`;
  }
  let s = x.toString();
  if (!s.includes(".")) s += ".0";
  return s;
}

/** Fixed-width percentage used for bar widths only (never displayed). */
export function barWidth(value: number): string {
  return `${Math.max(0, Math.min(100, value * 100)).toFixed(2)}%`;
}
