/** Page controller: owns the job table, the form and the live streams.

Display state is rederived from the latest server payloads on every change;
the only client-held state is the form in progress and the stream overlays,
which are themselves just the most recent server frames.
*/

import { ApiClient, ApiRequestError, ConnectionError } from "./api.js";
import { applyEvent, deriveJobView } from "./jobview.js";
import type { JobView, StreamOverlay } from "./jobview.js";
import { JobStream } from "./stream.js";
import type { EventSourceFactory } from "./stream.js";
import { TERMINAL_STATES } from "./types.js";
import type { JobOptions, JobRecordWire } from "./types.js";
import { validateForm } from "./validate.js";
import type { FormValues } from "./validate.js";
import { renderJobRow, renderModelOptions, showToast } from "./view.js";

interface JobEntry {
  record: JobRecordWire;
  overlay: StreamOverlay;
  stream: JobStream | null;
}

export interface AppOptions {
  esFactory: EventSourceFactory;
  confirmFn?: (message: string) => boolean;
  now?: () => number;
  /** Elapsed-time refresh period; 0 disables the ticker. */
  tickMs?: number;
  backoffMs?: readonly number[];
  toastMs?: number;
}

function requireElement<T extends HTMLElement>(doc: Document, id: string): T {
  const el = doc.getElementById(id);
  if (!el) throw new Error(`shell element missing: #${id}`);
  return el as T;
}

export class App {
  private readonly entries = new Map<string, JobEntry>();
  private order: string[] = [];
  private ticker: ReturnType<typeof setInterval> | null = null;

  private readonly confirmFn: (message: string) => boolean;
  private readonly now: () => number;
  private readonly tickMs: number;
  private readonly toastMs: number;

  private readonly form: HTMLFormElement;
  private readonly fileInput: HTMLInputElement;
  private readonly modelSelect: HTMLSelectElement;
  private readonly languageSelect: HTMLSelectElement;
  private readonly speakersSelect: HTMLSelectElement;
  private readonly speakersHint: HTMLElement;
  private readonly deviceSelect: HTMLSelectElement;
  private readonly translateBox: HTMLInputElement;
  private readonly gapInput: HTMLInputElement;
  private readonly submitBtn: HTMLButtonElement;
  private readonly formError: HTMLElement;
  private readonly banner: HTMLElement;
  private readonly jobList: HTMLElement;
  private readonly jobsEmpty: HTMLElement;
  private readonly toasts: HTMLElement;

  constructor(
    private readonly doc: Document,
    private readonly api: ApiClient,
    private readonly options: AppOptions,
  ) {
    this.confirmFn = options.confirmFn ?? ((message) => globalThis.confirm(message));
    this.now = options.now ?? (() => Date.now());
    this.tickMs = options.tickMs ?? 1000;
    this.toastMs = options.toastMs ?? 4000;

    this.form = requireElement(doc, "submit-form");
    this.fileInput = requireElement(doc, "field-file");
    this.modelSelect = requireElement(doc, "field-model");
    this.languageSelect = requireElement(doc, "field-language");
    this.speakersSelect = requireElement(doc, "field-speakers");
    this.speakersHint = requireElement(doc, "speakers-hint");
    this.deviceSelect = requireElement(doc, "field-device");
    this.translateBox = requireElement(doc, "field-translate");
    this.gapInput = requireElement(doc, "field-gap");
    this.submitBtn = requireElement(doc, "submit-btn");
    this.formError = requireElement(doc, "form-error");
    this.banner = requireElement(doc, "conn-banner");
    this.jobList = requireElement(doc, "job-list");
    this.jobsEmpty = requireElement(doc, "jobs-empty");
    this.toasts = requireElement(doc, "toasts");
  }

  async init(): Promise<void> {
    this.form.addEventListener("submit", (ev) => {
      ev.preventDefault();
      void this.submit();
    });
    this.speakersSelect.addEventListener("change", () => {
      this.speakersHint.hidden = this.speakersSelect.value !== "auto";
    });
    await this.refreshModels();
    await this.refreshJobs();
    if (this.tickMs > 0) {
      this.ticker = setInterval(() => this.renderJobs(), this.tickMs);
    }
  }

  dispose(): void {
    if (this.ticker !== null) {
      clearInterval(this.ticker);
      this.ticker = null;
    }
    for (const entry of this.entries.values()) {
      entry.stream?.close();
    }
  }

  // -- server sync ---------------------------------------------------------

  async refreshModels(): Promise<void> {
    try {
      const models = await this.api.listModels();
      this.setConnection(true);
      renderModelOptions(this.modelSelect, models);
    } catch (err) {
      if (err instanceof ConnectionError) {
        this.setConnection(false);
        return;
      }
      throw err;
    }
  }

  async refreshJobs(): Promise<void> {
    let records: JobRecordWire[];
    try {
      records = await this.api.listJobs();
      this.setConnection(true);
    } catch (err) {
      if (err instanceof ConnectionError) {
        this.setConnection(false);
        return;
      }
      throw err;
    }
    const seen = new Set<string>();
    this.order = records.map((record) => record.job_id);
    for (const record of records) {
      seen.add(record.job_id);
      const entry = this.entries.get(record.job_id);
      if (entry) {
        entry.record = record;
      } else {
        this.entries.set(record.job_id, { record, overlay: {}, stream: null });
      }
    }
    for (const [jobId, entry] of [...this.entries]) {
      if (!seen.has(jobId)) {
        entry.stream?.close();
        this.entries.delete(jobId);
      }
    }
    this.ensureStreams();
    this.renderJobs();
  }

  /** Pull one job's record again and drop its overlay (stream has ended). */
  private async reconcile(jobId: string): Promise<void> {
    const entry = this.entries.get(jobId);
    if (!entry) return;
    entry.stream = null;
    try {
      entry.record = await this.api.getJob(jobId);
      entry.overlay = {};
      this.setConnection(true);
    } catch (err) {
      if (err instanceof ConnectionError) {
        this.setConnection(false);
      } else if (err instanceof ApiRequestError && err.status === 404) {
        this.removeEntry(jobId);
      } else {
        throw err;
      }
    }
    this.renderJobs();
  }

  private ensureStreams(): void {
    for (const [jobId, entry] of this.entries) {
      const state = entry.overlay.state ?? entry.record.state;
      if (TERMINAL_STATES.has(state)) {
        if (entry.stream) {
          entry.stream.close();
          entry.stream = null;
        }
        continue;
      }
      if (!entry.stream) {
        entry.stream = new JobStream(
          this.api.eventsUrl(jobId),
          this.options.esFactory,
          {
            onEvent: (event) => {
              entry.overlay = applyEvent(entry.overlay, event);
              this.renderJobs();
            },
            onTerminal: () => {
              void this.reconcile(jobId);
            },
          },
          this.options.backoffMs,
        );
        entry.stream.open();
      }
    }
  }

  private removeEntry(jobId: string): void {
    const entry = this.entries.get(jobId);
    entry?.stream?.close();
    this.entries.delete(jobId);
    this.order = this.order.filter((id) => id !== jobId);
  }

  // -- form ----------------------------------------------------------------

  private readForm(): FormValues {
    return {
      file: this.fileInput.files?.[0] ?? null,
      model: this.modelSelect.value,
      language: this.languageSelect.value,
      numSpeakers: this.speakersSelect.value,
      device: this.deviceSelect.value,
      translate: this.translateBox.checked,
      gapTolerance: this.gapInput.value,
    };
  }

  private renderFieldErrors(errors: Partial<Record<keyof FormValues, string>>): void {
    const spans = this.form.querySelectorAll<HTMLElement>("[data-error-for]");
    for (const span of spans) {
      const key = span.dataset.errorFor as keyof FormValues | undefined;
      const message = key ? errors[key] : undefined;
      if (message) {
        span.textContent = message;
        span.hidden = false;
      } else {
        span.textContent = "";
        span.hidden = true;
      }
    }
  }

  private showFormError(message: string): void {
    this.formError.textContent = message;
    this.formError.hidden = false;
  }

  async submit(): Promise<void> {
    const values = this.readForm();
    const result = validateForm(values);
    this.renderFieldErrors(result.errors);
    this.formError.hidden = true;
    this.formError.textContent = "";
    if (!result.ok || !values.file) {
      return;
    }
    const options: JobOptions = {
      model: values.model,
      language: values.language,
      num_speakers: values.numSpeakers,
      device: values.device,
      translate: values.translate,
    };
    const gap = values.gapTolerance.trim();
    if (gap !== "") {
      options.gap_tolerance_s = Number(gap);
    }
    this.submitBtn.disabled = true;
    try {
      const created = await this.api.createJob(values.file, options);
      this.setConnection(true);
      this.fileInput.value = "";
      await this.afterCreate(created.job_id);
    } catch (err) {
      if (err instanceof ConnectionError) {
        this.setConnection(false);
      } else if (err instanceof ApiRequestError) {
        this.setConnection(true);
        this.showFormError(err.message);
      } else {
        throw err;
      }
    } finally {
      this.submitBtn.disabled = false;
    }
  }

  private async afterCreate(jobId: string): Promise<void> {
    try {
      const record = await this.api.getJob(jobId);
      this.entries.set(jobId, { record, overlay: {}, stream: null });
      this.order = [jobId, ...this.order.filter((id) => id !== jobId)];
    } catch (err) {
      if (!(err instanceof ConnectionError)) throw err;
      this.setConnection(false);
    }
    this.ensureStreams();
    this.renderJobs();
  }

  // -- row actions ---------------------------------------------------------

  private async deleteJob(view: JobView): Promise<void> {
    if (view.running) {
      const name = view.record.config.input_path.split(/[\\/]/).pop() ?? view.jobId;
      const message =
        `"${name}" is still processing. Deleting it cancels the run ` +
        "and removes its working files. Delete anyway?";
      if (!this.confirmFn(message)) return;
    }
    try {
      await this.api.deleteJob(view.jobId);
      this.setConnection(true);
      this.removeEntry(view.jobId);
    } catch (err) {
      if (err instanceof ConnectionError) {
        this.setConnection(false);
      } else if (err instanceof ApiRequestError) {
        if (err.status === 404) {
          this.removeEntry(view.jobId);
        }
        this.toast(err.message);
      } else {
        throw err;
      }
    }
    this.renderJobs();
  }

  private async download(view: JobView, name: string): Promise<void> {
    try {
      const blob = await this.api.downloadFile(view.jobId, name);
      this.setConnection(true);
      this.saveBlob(name, blob);
    } catch (err) {
      if (err instanceof ConnectionError) {
        this.setConnection(false);
      } else if (err instanceof ApiRequestError) {
        this.toast(err.message);
        await this.refreshRow(view.jobId);
      } else {
        throw err;
      }
    }
  }

  private async refreshRow(jobId: string): Promise<void> {
    try {
      const record = await this.api.getJob(jobId);
      const entry = this.entries.get(jobId);
      if (entry) entry.record = record;
      this.setConnection(true);
    } catch (err) {
      if (err instanceof ApiRequestError && err.status === 404) {
        this.removeEntry(jobId);
      } else if (err instanceof ConnectionError) {
        this.setConnection(false);
      } else {
        throw err;
      }
    }
    this.renderJobs();
  }

  private saveBlob(name: string, blob: Blob): void {
    // jsdom has no createObjectURL; saving is browser-only behaviour
    if (typeof URL.createObjectURL !== "function") return;
    const url = URL.createObjectURL(blob);
    const anchor = this.doc.createElement("a");
    anchor.href = url;
    anchor.download = name;
    anchor.click();
    URL.revokeObjectURL(url);
  }

  // -- rendering -----------------------------------------------------------

  private setConnection(ok: boolean): void {
    this.banner.hidden = ok;
  }

  private toast(message: string): void {
    showToast(this.toasts, message, this.toastMs);
  }

  renderJobs(): void {
    const nowMs = this.now();
    this.jobList.textContent = "";
    for (const jobId of this.order) {
      const entry = this.entries.get(jobId);
      if (!entry) continue;
      const view = deriveJobView(entry.record, entry.overlay, nowMs);
      const row = renderJobRow(view, {
        fileUrl: (id, name) => this.api.fileUrl(id, name),
        onDownload: (v, name) => {
          void this.download(v, name);
        },
        onDelete: (v) => {
          void this.deleteJob(v);
        },
      });
      this.jobList.append(row);
    }
    this.jobsEmpty.hidden = this.order.length > 0;
  }
}
