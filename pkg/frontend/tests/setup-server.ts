// Global setup: run the real HTTP service against the repository corpus so
// the editor tests exercise the genuine wire format end to end.

import { spawn, type ChildProcess } from "node:child_process";
import { fileURLToPath } from "node:url";
import type { TestProject } from "vitest/node";

declare module "vitest" {
  interface ProvidedContext {
    baseUrl: string;
  }
}

let server: ChildProcess | undefined;

const RUNNER = `
import uvicorn
from pathlib import Path
from kara.service import create_app
uvicorn.run(create_app(corpus_dir=Path("corpus")), host="127.0.0.1", port=PORT, log_level="error")
`;

export default async function setup(project: TestProject): Promise<() => Promise<void>> {
  const port = 8750 + Math.floor(Math.random() * 200);
  const repoRoot = fileURLToPath(new URL("../..", import.meta.url));
  server = spawn("python3", ["-c", RUNNER.replace("PORT", String(port))], {
    cwd: repoRoot,
    stdio: ["ignore", "inherit", "inherit"],
  });
  const baseUrl = `http://127.0.0.1:${port}`;

  let ready = false;
  for (let attempt = 0; attempt < 200 && !ready; attempt++) {
    if (server.exitCode !== null) break;
    try {
      const response = await fetch(`${baseUrl}/api/corpus`);
      ready = response.ok;
    } catch {
      await new Promise((resolve) => setTimeout(resolve, 100));
    }
  }
  if (!ready) {
    server.kill();
    throw new Error("the kara service did not come up; is the python package installed?");
  }

  project.provide("baseUrl", baseUrl);
  return async () => {
    server?.kill();
  };
}
