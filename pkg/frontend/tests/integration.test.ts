/**
 * End-to-end checks against the real backend:
 *
 * - parity: values rendered by the UI formatting of live responses equal
 *   the CLI's CSV output digit for digit for the covariation goldens and
 *   the 99-point sensitivity sweep (the backend is the single source of
 *   truth, and both frontends serialize it identically);
 * - interactivity: a slider-induced covary preview settles within 300 ms
 *   (100 ms debounce plus one local round trip).
 */

import { afterAll, beforeAll, describe, expect, it } from "vitest";
import { execFileSync, spawn, ChildProcess } from "node:child_process";
import { fileURLToPath } from "node:url";
import { dirname, join } from "node:path";

import { Client } from "../src/api.js";
import { debounce } from "../src/debounce.js";
import { formatBackendFloat } from "../src/format.js";
import { Store } from "../src/store.js";

const here = dirname(fileURLToPath(import.meta.url));
const repoRoot = join(here, "..", "..");
const blockModel = join(here, "fixtures", "simplex_block.json");
const bnModel = join(repoRoot, "models", "ternary_bn.json");
const port = 18000 + Math.floor(Math.random() * 2000);
const base = `http://127.0.0.1:${port}`;

let server: ChildProcess;

function cli(args: string[]): string {
  return execFileSync("python3", ["-m", "mmsa.cli", ...args], {
    cwd: repoRoot,
    encoding: "utf-8",
  });
}

async function waitForServer(): Promise<void> {
  for (let attempt = 0; attempt < 100; attempt += 1) {
    try {
      const response = await fetch(`${base}/api/model`);
      if (response.status === 200 || response.status === 404) return;
    } catch {
      // not listening yet
    }
    await new Promise((resolve) => setTimeout(resolve, 100));
  }
  throw new Error("backend did not come up");
}

beforeAll(async () => {
  server = spawn(
    "python3",
    ["-m", "mmsa.cli", "serve", "--port", String(port), "-m", blockModel],
    { cwd: repoRoot, stdio: "ignore" },
  );
  await waitForServer();
}, 30000);

afterAll(() => {
  server?.kill();
});

describe("UI/CLI parity", () => {
  it("covary preview equals the CLI CSV digit for digit", async () => {
    const client = new Client(base);
    const response = await client.covary({
      vary: { theta1: 0.4 },
      scheme: "proportional",
    });
    const rendered = response.changes.map((c) => ({
      label: c.label,
      old: formatBackendFloat(c.old),
      neu: formatBackendFloat(c.new),
    }));

    const csv = cli([
      "covary", "-m", blockModel, "--vary", "theta1=0.4",
      "--scheme", "proportional", "--format", "csv",
    ]);
    const rows = csv.trim().split("\n").slice(1).map((line) => {
      const [index, label, oldValue, newValue] = line.split(",");
      return { index, label: label.replace(/"/g, ""), oldValue, newValue };
    });

    expect(rows.length).toBe(rendered.length);
    for (let i = 0; i < rows.length; i += 1) {
      expect(rendered[i].label).toBe(rows[i].label);
      expect(rendered[i].old).toBe(rows[i].oldValue);
      expect(rendered[i].neu).toBe(rows[i].newValue);
    }
    // the proportional goldens themselves
    expect(rendered.map((r) => r.neu)).toEqual([
      "0.4",
      formatBackendFloat(0.2 * 0.6 / 0.9),
      formatBackendFloat(0.7 * 0.6 / 0.9),
    ]);
  }, 30000);

  it("uniform covariation maps different blocks to the same image", async () => {
    const client = new Client(base);
    const low = await client.covary({ vary: { theta1: 0.4 }, scheme: "uniform" });
    await client.uploadModel({
      atoms: ["a", "b", "c"],
      params: ["theta1", "theta2", "theta3"],
      partition: [[0, 1, 2]],
      exponents: [[0, 0], [1, 1], [2, 2]],
      theta: [0.6, 0.3, 0.1],
    });
    const high = await client.covary({ vary: { theta1: 0.4 }, scheme: "uniform" });
    expect(low.theta_new).toEqual([0.4, 0.3, 0.3]);
    expect(high.theta_new).toEqual([0.4, 0.3, 0.3]);
  }, 30000);

  it("sensitivity sweep equals the CLI CSV digit for digit", async () => {
    const client = new Client(base);
    const bnPayload = JSON.parse(
      execFileSync("python3", ["-c",
        "import json,sys; print(open(sys.argv[1]).read())", bnModel],
        { encoding: "utf-8" }),
    );
    await client.uploadModel(bnPayload);
    const schemes = ["proportional", "uniform", "order_preserving"];
    const response = await client.sensitivity({
      vary: ["theta2"],
      event: "Y3=3",
      schemes,
      grid: 99,
    });

    const csv = cli([
      "sensitivity", "-m", bnModel, "--vary", "theta2", "--event", "Y3=3",
      "--schemes", schemes.join(","), "--grid", "99", "--format", "csv",
    ]);
    const lines = csv.trim().split("\n");
    expect(lines[0]).toBe("target_1,scheme,probability,kl,cd");

    const renderedRows: string[] = [];
    for (const curve of response.curves) {
      for (const point of curve.points) {
        renderedRows.push(
          [
            formatBackendFloat(point.targets[0]),
            curve.scheme,
            point.probability === null ? "" : formatBackendFloat(point.probability),
            point.kl === null ? "" : formatBackendFloat(point.kl),
            point.cd === null ? "" : formatBackendFloat(point.cd),
          ].join(","),
        );
      }
    }
    expect(renderedRows).toEqual(lines.slice(1));
  }, 60000);
});

describe("interactivity", () => {
  it("a slider change renders a covary preview within 300 ms", async () => {
    const client = new Client(base);
    await client.uploadModel(
      JSON.parse(
        execFileSync("python3", ["-c",
          "import json,sys; print(open(sys.argv[1]).read())", blockModel],
          { encoding: "utf-8" }),
      ),
    );
    await client.getModel(); // connection warm-up

    const store = new Store(client);
    const settled = new Promise<void>((resolve) => {
      store.subscribe((state) => {
        if (state.covary) resolve();
      });
    });
    const refresh = debounce(() => void store.requestCovary(), 100);

    const start = performance.now();
    store.setSlider("theta1", 0.4);
    refresh();
    await settled;
    const elapsed = performance.now() - start;
    expect(store.state.covary?.theta_new[0]).toBe(0.4);
    expect(elapsed).toBeLessThan(300);
  }, 30000);
});
