/** Thin client for the atrain job API.

The client only issues the documented calls: job CRUD, the model list and
export file downloads. Transport failures and API error envelopes are split
into two error types so the UI can tell "server down" from "server said no".
*/

import type { JobOptions, JobRecordWire, ModelInfo } from "./types.js";

export type FetchFn = typeof fetch;

/** The server rejected the request and sent an error envelope. */
export class ApiRequestError extends Error {
  readonly code: string;
  readonly status: number;

  constructor(code: string, message: string, status: number) {
    super(message);
    this.name = "ApiRequestError";
    this.code = code;
    this.status = status;
  }
}

/** The request never reached the server (connection refused, timeout). */
export class ConnectionError extends Error {
  constructor(cause: unknown) {
    super("cannot reach the transcription server");
    this.name = "ConnectionError";
    this.cause = cause;
  }
}

async function raiseForEnvelope(response: Response): Promise<void> {
  if (response.ok) return;
  let code = "error";
  let message = `request failed with status ${response.status}`;
  try {
    const body = (await response.json()) as { error?: { code?: string; message?: string } };
    if (body.error) {
      code = body.error.code ?? code;
      message = body.error.message ?? message;
    }
  } catch {
    // non-JSON error body; keep the status fallback
  }
  throw new ApiRequestError(code, message, response.status);
}

export class ApiClient {
  private readonly baseUrl: string;
  private readonly fetchFn: FetchFn;

  constructor(options: { baseUrl?: string; fetchFn?: FetchFn } = {}) {
    this.baseUrl = (options.baseUrl ?? "").replace(/\/+$/, "");
    this.fetchFn = options.fetchFn ?? fetch.bind(globalThis);
  }

  url(path: string): string {
    return this.baseUrl + path;
  }

  fileUrl(jobId: string, name: string): string {
    return this.url(`/api/jobs/${encodeURIComponent(jobId)}/files/${encodeURIComponent(name)}`);
  }

  eventsUrl(jobId: string): string {
    return this.url(`/api/jobs/${encodeURIComponent(jobId)}/events`);
  }

  private async request(path: string, init?: RequestInit): Promise<Response> {
    let response: Response;
    try {
      response = await this.fetchFn(this.url(path), init);
    } catch (cause) {
      throw new ConnectionError(cause);
    }
    await raiseForEnvelope(response);
    return response;
  }

  async createJob(file: File, options: JobOptions = {}): Promise<{ job_id: string }> {
    const form = new FormData();
    form.append("file", file);
    if (Object.keys(options).length > 0) {
      form.append("config", JSON.stringify(options));
    }
    const response = await this.request("/api/jobs", { method: "POST", body: form });
    return (await response.json()) as { job_id: string };
  }

  async listJobs(): Promise<JobRecordWire[]> {
    const response = await this.request("/api/jobs");
    const body = (await response.json()) as { jobs: JobRecordWire[] };
    return body.jobs;
  }

  async getJob(jobId: string): Promise<JobRecordWire> {
    const response = await this.request(`/api/jobs/${encodeURIComponent(jobId)}`);
    return (await response.json()) as JobRecordWire;
  }

  async deleteJob(jobId: string): Promise<void> {
    await this.request(`/api/jobs/${encodeURIComponent(jobId)}`, { method: "DELETE" });
  }

  async listModels(): Promise<ModelInfo[]> {
    const response = await this.request("/api/models");
    const body = (await response.json()) as { models: ModelInfo[] };
    return body.models;
  }

  /** Fetch an export file; the caller decides what to do with the bytes. */
  async downloadFile(jobId: string, name: string): Promise<Blob> {
    const response = await this.request(`/api/jobs/${encodeURIComponent(jobId)}/files/${encodeURIComponent(name)}`);
    return await response.blob();
  }
}
