// Integration against a live analysis service: the editor's client must get
// byte-identical transfer payloads to the CLI's structured output, and the
// error contract must separate malformed requests (HTTP 400) from valid
// graphs with degenerate answers (HTTP 200 plus a typed error body).

import { type ChildProcess, execFileSync, spawn } from "node:child_process";
import * as fs from "node:fs";
import * as os from "node:os";
import * as path from "node:path";
import { afterAll, beforeAll, describe, expect, it } from "vitest";
import { ServiceClient } from "../src/api.js";

const port = 8100 + Math.floor(Math.random() * 800);
const base = `http://127.0.0.1:${port}`;
const client = new ServiceClient(base);
let server: ChildProcess | null = null;

const tmpDir = fs.mkdtempSync(path.join(os.tmpdir(), "sfgsvc-"));

const CASCADE_GRAPH = {
  nodes: [{ id: 1 }, { id: 2 }, { id: 3 }, { id: 4 }, { id: 5 }],
  branches: [
    { from: 1, to: 2, num: [1], den: [1, 1] },
    { from: 2, to: 3, num: [4, 1], den: [2, 1] },
    { from: 3, to: 4, num: [1], den: [1], symbols: ["V"] },
    { from: 4, to: 5, num: [2], den: [1] },
  ],
  input: 1,
  output: 5,
};

beforeAll(async () => {
  server = spawn("sfg", ["serve", "--port", String(port)], { stdio: "ignore" });
  const deadline = Date.now() + 25_000;
  for (;;) {
    try {
      const reply = await fetch(`${base}/health`);
      if (reply.ok) return;
    } catch {
      // not listening yet
    }
    if (Date.now() > deadline) throw new Error("analysis service did not come up");
    await new Promise((resolve) => setTimeout(resolve, 250));
  }
}, 30_000);

afterAll(() => {
  server?.kill();
  fs.rmSync(tmpDir, { recursive: true, force: true });
});

describe("live service", () => {
  it("answers health checks", async () => {
    const result = await client.health();
    expect(result.ok).toBe(true);
    if (!result.ok) return;
    expect(result.value.status).toBe("ok");
    expect(result.value.name).toBe("sfgkit");
  });

  it("returns transfer payloads byte-identical to the CLI", async () => {
    const file = path.join(tmpDir, "cascade.json");
    fs.writeFileSync(file, JSON.stringify(CASCADE_GRAPH) + "\n");
    const cliOut = execFileSync(
      "sfg",
      ["compute", file, "--format", "structured"],
      { encoding: "utf8" },
    );
    expect(cliOut.endsWith("\n")).toBe(true);

    const result = await client.transfer({ graph: CASCADE_GRAPH });
    expect(result.ok).toBe(true);
    if (!result.ok) return;
    expect(result.raw).toBe(cliOut.slice(0, -1));
    expect(result.value.variable).toBe("s");
  });

  it("rejects a malformed request with HTTP 400 and a typed error", async () => {
    const result = await client.transfer({ graph: undefined });
    expect(result.ok).toBe(false);
    if (result.ok) return;
    expect(result.status).toBe(400);
    expect(result.error.kind).toBe("ValueError");
    expect(result.error.detail).toContain("graph");
  });

  it("reports a degenerate computation with HTTP 200 and a typed error", async () => {
    const graph = {
      nodes: [{ id: 1 }, { id: 2 }, { id: 3 }],
      branches: [{ from: 1, to: 2, num: [1], den: [1] }],
      input: 1,
      output: 3,
    };
    const result = await client.transfer({ graph });
    expect(result.ok).toBe(false);
    if (result.ok) return;
    expect(result.status).toBe(200);
    expect(result.error.kind).toBe("NoForwardPath");
  });

  it("serves the full analysis bundle the editor renders", async () => {
    const result = await client.analyze({
      graph: CASCADE_GRAPH,
      substitutions: { V: "1" },
      grid: { wmin: 0.01, wmax: 100, points: 40 },
      routh: true,
      roots: true,
      reduce: 1,
    });
    expect(result.ok).toBe(true);
    if (!result.ok) return;
    const data = result.value;
    expect(data.transfer.num).toEqual([8, 2]);
    expect(data.transfer.den).toEqual([2, 3, 1]);
    expect(data.response).toHaveLength(40);
    for (const key of ["omega", "re", "im", "mag_db", "phase_deg"] as const) {
      expect(typeof data.response[0][key]).toBe("number");
    }
    expect(data.routh?.verdict).toBe("stable");
    expect(data.roots?.poles).toHaveLength(2);
    const poleRes = data.roots ? Math.max(...data.roots.pole_residuals, 0) : 1;
    expect(poleRes).toBeLessThan(1e-6);
    expect(data.reduced?.den).toHaveLength(2);

    // the reduced-order overlay comes from a second call on the reduced parts
    const overlay = await client.analyze({
      tf: data.reduced!,
      grid: { wmin: 0.01, wmax: 100, points: 40 },
    });
    expect(overlay.ok).toBe(true);
    if (!overlay.ok) return;
    expect(overlay.value.response).toHaveLength(40);
  });
});
