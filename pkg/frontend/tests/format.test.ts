import { describe, expect, it } from "vitest";
import { readFileSync } from "node:fs";
import { fileURLToPath } from "node:url";
import { dirname, join } from "node:path";

import { formatBackendFloat } from "../src/format.js";

const here = dirname(fileURLToPath(import.meta.url));
const pairs: [number, string][] = JSON.parse(
  readFileSync(join(here, "fixtures", "float_repr.json"), "utf-8"),
);

describe("formatBackendFloat", () => {
  it("matches the backend's repr on the fixture corpus", () => {
    for (const [value, expected] of pairs) {
      expect(formatBackendFloat(value)).toBe(expected);
    }
  });

  it("round-trips every fixture value", () => {
    for (const [value] of pairs) {
      expect(Number(formatBackendFloat(value))).toBe(value);
    }
  });

  it("handles signed zero and integral values", () => {
    expect(formatBackendFloat(0)).toBe("0.0");
    expect(formatBackendFloat(-0)).toBe("-0.0");
    expect(formatBackendFloat(2)).toBe("2.0");
    expect(formatBackendFloat(-3.5)).toBe("-3.5");
  });
});
