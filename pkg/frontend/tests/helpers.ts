/** Shared test fixtures: a scriptable stub API server, fake event streams
and a mounted page shell.

The stub speaks the same wire protocol as the real server (multipart create,
error envelopes, newest-first listing) but is fully scripted from the tests.
*/

import http from "node:http";
import { AddressInfo } from "node:net";

import { ApiClient } from "../src/api.js";
import { App } from "../src/controller.js";
import type { AppOptions } from "../src/controller.js";
import { SHELL_HTML } from "../src/shell.js";
import type { EventSourceLike } from "../src/stream.js";
import type { JobRecordWire, JobState, ModelInfo } from "../src/types.js";

export const HAPPY_STATES: readonly JobState[] = [
  "CREATED",
  "CONVERTING",
  "TRANSCRIBING",
  "DIARIZING",
  "ALIGNING",
  "EXPORTING",
  "COMPLETED",
];

export const EXPORTS = [
  "transcript_timestamps.txt",
  "transcript.txt",
  "transcript_qda.txt",
  "transcript.json",
];

export function makeRecord(partial: Partial<JobRecordWire> & { job_id: string }): JobRecordWire {
  return {
    state: "CREATED",
    config: {
      input_path: `/data/uploads/${partial.job_id}.wav`,
      model_id: "medium",
      language: "auto",
      num_speakers: "auto",
      device: "auto",
      translate: false,
      gap_tolerance_s: 2.0,
    },
    directory: `/data/jobs/${partial.job_id}`,
    created_at: new Date().toISOString(),
    started_at: null,
    finished_at: null,
    duration_s: null,
    processing_time_s: null,
    rpt: null,
    error: null,
    stage_times_s: {},
    files: [],
    ...partial,
  };
}

export function defaultModels(): ModelInfo[] {
  return [
    { model_id: "tiny", tier: "tiny", installed: false, hint: "smallest/fastest" },
    { model_id: "base", tier: "base", installed: false, hint: "mid-range" },
    { model_id: "small", tier: "small", installed: true, hint: "mid-range" },
    { model_id: "medium", tier: "medium", installed: true, hint: "mid-range" },
    { model_id: "large", tier: "large", installed: false, hint: "largest/most accurate" },
  ];
}

interface CreateCall {
  fileName: string;
  size: number;
  config: Record<string, unknown> | null;
}

interface ScriptedError {
  status: number;
  code: string;
  message: string;
}

export class StubApi {
  readonly jobs = new Map<string, JobRecordWire>();
  readonly fileBodies = new Map<string, Map<string, string>>();
  models: ModelInfo[] = defaultModels();
  readonly requests: { method: string; path: string }[] = [];
  readonly createCalls: CreateCall[] = [];
  nextCreateError: ScriptedError | null = null;

  private server: http.Server | null = null;
  private seq = 0;
  port = 0;

  get url(): string {
    return `http://127.0.0.1:${this.port}`;
  }

  async start(port = 0): Promise<void> {
    this.server = http.createServer((req, res) => {
      void this.handle(req, res);
    });
    await new Promise<void>((resolve) => {
      this.server!.listen(port, "127.0.0.1", resolve);
    });
    this.port = (this.server!.address() as AddressInfo).port;
  }

  async stop(): Promise<void> {
    const server = this.server;
    if (!server) return;
    this.server = null;
    await new Promise<void>((resolve, reject) => {
      server.close((err) => (err ? reject(err) : resolve()));
    });
  }

  addJob(record: JobRecordWire, files: Record<string, string> = {}): JobRecordWire {
    this.jobs.set(record.job_id, record);
    this.fileBodies.set(record.job_id, new Map(Object.entries(files)));
    return record;
  }

  /** Mark a job completed with all four export files present. */
  completeJob(jobId: string): void {
    const record = this.jobs.get(jobId);
    if (!record) throw new Error(`no stub job ${jobId}`);
    record.state = "COMPLETED";
    record.finished_at = new Date().toISOString();
    record.files = [...EXPORTS];
    const bodies = this.fileBodies.get(jobId) ?? new Map();
    for (const name of EXPORTS) {
      if (!bodies.has(name)) bodies.set(name, `${name} for ${jobId}\n`);
    }
    this.fileBodies.set(jobId, bodies);
  }

  private async handle(req: http.IncomingMessage, res: http.ServerResponse): Promise<void> {
    const path = (req.url ?? "/").split("?")[0] ?? "/";
    const method = req.method ?? "GET";
    this.requests.push({ method, path });
    try {
      if (method === "POST" && path === "/api/jobs") {
        await this.handleCreate(req, res);
      } else if (method === "GET" && path === "/api/jobs") {
        this.sendJson(res, 200, { jobs: this.listRecords() });
      } else if (method === "GET" && path === "/api/models") {
        this.sendJson(res, 200, { models: this.models });
      } else {
        const jobMatch = path.match(/^\/api\/jobs\/([^/]+)$/);
        const fileMatch = path.match(/^\/api\/jobs\/([^/]+)\/files\/([^/]+)$/);
        if (jobMatch && method === "GET") {
          this.handleGetJob(res, decodeURIComponent(jobMatch[1]!));
        } else if (jobMatch && method === "DELETE") {
          this.handleDelete(res, decodeURIComponent(jobMatch[1]!));
        } else if (fileMatch && method === "GET") {
          this.handleFile(res, decodeURIComponent(fileMatch[1]!), decodeURIComponent(fileMatch[2]!));
        } else {
          this.sendError(res, 404, "not_found", `no route for ${method} ${path}`);
        }
      }
    } catch (err) {
      this.sendError(res, 500, "stub_error", String(err));
    }
  }

  private listRecords(): JobRecordWire[] {
    return [...this.jobs.values()].sort((a, b) => b.created_at.localeCompare(a.created_at));
  }

  private async handleCreate(req: http.IncomingMessage, res: http.ServerResponse): Promise<void> {
    const chunks: Buffer[] = [];
    for await (const chunk of req) chunks.push(chunk as Buffer);
    const body = Buffer.concat(chunks);
    if (this.nextCreateError) {
      const scripted = this.nextCreateError;
      this.nextCreateError = null;
      this.sendError(res, scripted.status, scripted.code, scripted.message);
      return;
    }
    const parsed = await new Response(body, {
      headers: { "content-type": req.headers["content-type"] ?? "" },
    }).formData();
    const file = parsed.get("file") as { name: string; size: number } | string | null;
    // implementations differ on the exact File class; duck-check the part
    if (file === null || typeof file === "string" || typeof file.name !== "string") {
      this.sendError(res, 400, "bad_request", "multipart field 'file' is required");
      return;
    }
    const rawConfig = parsed.get("config");
    const config = typeof rawConfig === "string" ? (JSON.parse(rawConfig) as Record<string, unknown>) : null;
    this.createCalls.push({ fileName: file.name, size: file.size, config });
    this.seq += 1;
    const jobId = `job-${this.seq}`;
    const record = makeRecord({
      job_id: jobId,
      created_at: new Date(Date.now() + this.seq).toISOString(),
    });
    record.config.input_path = `/data/uploads/${file.name}`;
    if (config) {
      const model = config["model"] ?? config["model_id"];
      if (typeof model === "string") record.config.model_id = model;
      if (typeof config["language"] === "string") record.config.language = config["language"];
      if (typeof config["num_speakers"] === "string") record.config.num_speakers = config["num_speakers"];
      if (typeof config["device"] === "string") record.config.device = config["device"];
      if (typeof config["translate"] === "boolean") record.config.translate = config["translate"];
      if (typeof config["gap_tolerance_s"] === "number") {
        record.config.gap_tolerance_s = config["gap_tolerance_s"];
      }
    }
    this.addJob(record);
    this.sendJson(res, 201, { job_id: jobId });
  }

  private handleGetJob(res: http.ServerResponse, jobId: string): void {
    const record = this.jobs.get(jobId);
    if (!record) {
      this.sendError(res, 404, "not_found", `job '${jobId}' not found`);
      return;
    }
    this.sendJson(res, 200, record);
  }

  private handleDelete(res: http.ServerResponse, jobId: string): void {
    if (!this.jobs.delete(jobId)) {
      this.sendError(res, 404, "not_found", `job '${jobId}' not found`);
      return;
    }
    this.fileBodies.delete(jobId);
    this.sendJson(res, 200, { deleted: jobId });
  }

  private handleFile(res: http.ServerResponse, jobId: string, name: string): void {
    const body = this.fileBodies.get(jobId)?.get(name);
    if (body === undefined) {
      this.sendError(res, 404, "not_found", `file '${name}' not found for job '${jobId}'`);
      return;
    }
    res.writeHead(200, { "content-type": name.endsWith(".json") ? "application/json" : "text/plain" });
    res.end(body);
  }

  private sendJson(res: http.ServerResponse, status: number, payload: unknown): void {
    res.writeHead(status, { "content-type": "application/json" });
    res.end(JSON.stringify(payload));
  }

  private sendError(res: http.ServerResponse, status: number, code: string, message: string): void {
    this.sendJson(res, status, { error: { code, message } });
  }
}

// -- fake event streams ----------------------------------------------------

export class FakeEventSource implements EventSourceLike {
  onmessage: ((ev: { data: string }) => void) | null = null;
  onerror: ((ev?: unknown) => void) | null = null;
  closed = false;

  constructor(readonly url: string) {}

  emit(event: object): void {
    this.onmessage?.({ data: JSON.stringify(event) });
  }

  emitRaw(data: string): void {
    this.onmessage?.({ data });
  }

  fail(): void {
    this.onerror?.();
  }

  close(): void {
    this.closed = true;
  }
}

export class FakeStreamHub {
  readonly instances: FakeEventSource[] = [];

  readonly factory = (url: string): EventSourceLike => {
    const source = new FakeEventSource(url);
    this.instances.push(source);
    return source;
  };

  forJob(jobId: string): FakeEventSource[] {
    return this.instances.filter((s) => s.url.includes(`/jobs/${encodeURIComponent(jobId)}/events`));
  }

  openFor(jobId: string): FakeEventSource {
    const open = this.forJob(jobId).filter((s) => !s.closed);
    const last = open[open.length - 1];
    if (!last) throw new Error(`no open stream for ${jobId}`);
    return last;
  }
}

// -- page mounting ---------------------------------------------------------

export function mountShell(): void {
  document.body.innerHTML = SHELL_HTML;
}

export interface Mounted {
  api: ApiClient;
  app: App;
  hub: FakeStreamHub;
}

export function mountApp(baseUrl: string, overrides: Partial<AppOptions> = {}): Mounted {
  mountShell();
  const hub = new FakeStreamHub();
  const api = new ApiClient({ baseUrl });
  const app = new App(document, api, {
    esFactory: hub.factory,
    tickMs: 0,
    toastMs: 0,
    backoffMs: [10, 20, 40],
    confirmFn: () => true,
    ...overrides,
  });
  return { api, app, hub };
}

// -- async helpers ---------------------------------------------------------

export async function waitFor(check: () => boolean, timeoutMs = 3000): Promise<void> {
  const start = Date.now();
  while (!check()) {
    if (Date.now() - start > timeoutMs) {
      throw new Error("condition not met within timeout");
    }
    await sleep(5);
  }
}

export function sleep(ms: number): Promise<void> {
  return new Promise((resolve) => setTimeout(resolve, ms));
}

/** Drain pending microtasks plus one macrotask turn. */
export async function flush(): Promise<void> {
  await sleep(0);
}

export function setFile(input: HTMLInputElement, file: File): void {
  Object.defineProperty(input, "files", {
    value: [file] as unknown as FileList,
    configurable: true,
  });
}

export function rows(): HTMLElement[] {
  return [...document.querySelectorAll<HTMLElement>("#job-list .job-row")];
}

export function rowFor(jobId: string): HTMLElement {
  const row = document.querySelector<HTMLElement>(`#job-list .job-row[data-job-id="${jobId}"]`);
  if (!row) throw new Error(`no row for ${jobId}`);
  return row;
}

export function badgeText(row: HTMLElement): string {
  return row.querySelector('[data-role="badge"]')?.textContent ?? "";
}
