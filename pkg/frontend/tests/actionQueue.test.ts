// Action queue: strict sequential execution, failure isolation.

import { describe, expect, it } from "vitest";
import { ActionQueue } from "../src/actionQueue";

const sleep = (ms: number) => new Promise((resolve) => setTimeout(resolve, ms));

describe("ActionQueue", () => {
  it("runs tasks strictly one after another", async () => {
    const queue = new ActionQueue();
    const trace: string[] = [];

    const first = queue.run(async () => {
      trace.push("a:start");
      await sleep(30);
      trace.push("a:end");
      return "a";
    });
    const second = queue.run(async () => {
      trace.push("b:start");
      await sleep(5);
      trace.push("b:end");
      return "b";
    });

    expect(queue.pending).toBe(2);
    expect(await first).toBe("a");
    expect(await second).toBe("b");
    expect(trace).toEqual(["a:start", "a:end", "b:start", "b:end"]);
    await queue.idle();
    expect(queue.pending).toBe(0);
  });

  it("keeps running after a task rejects", async () => {
    const queue = new ActionQueue();
    const failing = queue.run(async () => {
      throw new Error("boom");
    });
    const next = queue.run(async () => "ok");

    await expect(failing).rejects.toThrow("boom");
    expect(await next).toBe("ok");
  });
});
