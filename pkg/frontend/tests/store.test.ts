import { afterEach, beforeEach, describe, expect, it, vi } from "vitest";

import { Client, CovaryResponse } from "../src/api.js";
import { debounce } from "../src/debounce.js";
import { LatestGate, Store } from "../src/store.js";

function covaryResponse(marker: number): CovaryResponse {
  return {
    theta_new: [marker],
    labels: ["theta1"],
    touched_blocks: [0],
    scale_factors: {},
    changes: [{ index: 0, label: "theta1", old: 0.5, new: marker }],
  };
}

/** fetch stub whose responses resolve only when the test releases them. */
function deferredFetch() {
  const queue: ((body: unknown) => void)[] = [];
  const fetchFn = (async () => {
    const body = await new Promise<unknown>((resolve) => queue.push(resolve));
    return {
      ok: true,
      status: 200,
      json: async () => body,
    } as Response;
  }) as unknown as typeof fetch;
  return { fetchFn, release: (body: unknown) => queue.shift()?.(body), queue };
}

describe("LatestGate", () => {
  it("drops tickets at or below the applied one", () => {
    const gate = new LatestGate();
    const first = gate.issue();
    const second = gate.issue();
    expect(gate.tryApply(second)).toBe(true);
    expect(gate.tryApply(first)).toBe(false);
    expect(gate.tryApply(second)).toBe(false);
    expect(gate.tryApply(gate.issue())).toBe(true);
  });
});

describe("stale responses", () => {
  it("a late first response never overwrites a newer applied one", async () => {
    const { fetchFn, release, queue } = deferredFetch();
    const store = new Store(new Client("", fetchFn));
    store.state.vary = { theta1: 0.4 };

    const first = store.requestCovary();
    const second = store.requestCovary();
    expect(queue.length).toBe(2);

    // resolve out of order: the second request completes first
    const releaseFirst = queue.shift()!;
    const releaseSecond = queue.shift()!;
    releaseSecond(covaryResponse(2));
    await second;
    expect(store.state.covary?.theta_new).toEqual([2]);

    releaseFirst(covaryResponse(1));
    await first;
    expect(store.state.covary?.theta_new).toEqual([2]);
    void release;
  });

  it("in-order responses apply normally", async () => {
    const { fetchFn, queue } = deferredFetch();
    const store = new Store(new Client("", fetchFn));
    store.state.vary = { theta1: 0.4 };
    const call = store.requestCovary();
    queue.shift()!(covaryResponse(7));
    await call;
    expect(store.state.covary?.theta_new).toEqual([7]);
  });
});

describe("debounce", () => {
  beforeEach(() => vi.useFakeTimers());
  afterEach(() => vi.useRealTimers());

  it("collapses a burst into a single trailing call", () => {
    const calls: number[] = [];
    const d = debounce((x: number) => calls.push(x), 100);
    for (let i = 0; i < 50; i += 1) {
      d(i);
      vi.advanceTimersByTime(10);
    }
    expect(calls).toEqual([]);
    vi.advanceTimersByTime(100);
    expect(calls).toEqual([49]);
  });

  it("keeps the request rate at or under one per wait window", () => {
    const calls: number[] = [];
    const d = debounce((x: number) => calls.push(x), 100);
    // continuous dragging for one second with pauses every 200 ms
    for (let burst = 0; burst < 5; burst += 1) {
      d(burst);
      vi.advanceTimersByTime(50);
      d(burst + 100);
      vi.advanceTimersByTime(150);
    }
    expect(calls.length).toBeLessThanOrEqual(10);
    expect(calls.length).toBe(5);
  });

  it("cancel drops the pending call", () => {
    const calls: number[] = [];
    const d = debounce((x: number) => calls.push(x), 100);
    d(1);
    d.cancel();
    vi.advanceTimersByTime(500);
    expect(calls).toEqual([]);
  });
});
