/** DOM construction for job rows and small page-level widgets.

All user-controlled strings go through textContent, never innerHTML.
*/

import type { JobView } from "./jobview.js";
import type { ModelInfo } from "./types.js";

export interface RowActions {
  fileUrl: (jobId: string, name: string) => string;
  onDownload: (view: JobView, name: string, anchor: HTMLAnchorElement) => void;
  onDelete: (view: JobView) => void;
}

function baseName(path: string): string {
  const parts = path.split(/[\\/]/);
  return parts[parts.length - 1] || path;
}

function metaText(view: JobView): string {
  const cfg = view.record.config;
  const bits = [
    `model ${cfg.model_id}`,
    `language ${cfg.language}`,
    `speakers ${cfg.num_speakers}`,
  ];
  if (cfg.translate) bits.push("translate to en");
  if (view.record.rpt !== null && view.record.rpt !== undefined) {
    bits.push(`rpt ${view.record.rpt.toFixed(2)}`);
  }
  return bits.join(" | ");
}

export function renderJobRow(view: JobView, actions: RowActions): HTMLLIElement {
  const row = document.createElement("li");
  row.className = "job-row";
  row.dataset.jobId = view.jobId;
  row.dataset.state = view.state;

  const head = document.createElement("div");
  head.className = "job-head";
  const name = document.createElement("span");
  name.className = "job-name";
  name.textContent = baseName(view.record.config.input_path);
  const badge = document.createElement("span");
  badge.className = `badge badge-${view.badge}`;
  badge.dataset.role = "badge";
  badge.textContent = view.state;
  const elapsed = document.createElement("span");
  elapsed.className = "job-elapsed";
  elapsed.dataset.role = "elapsed";
  elapsed.textContent = view.elapsedText;
  head.append(name, badge, elapsed);
  row.append(head);

  if (view.state !== "FAILED") {
    const bar = document.createElement("div");
    bar.className = "progress";
    const fill = document.createElement("div");
    fill.className = "progress-fill";
    fill.dataset.role = "progress";
    fill.style.width = `${view.percent}%`;
    fill.dataset.percent = String(view.percent);
    bar.append(fill);
    row.append(bar);
  }

  const meta = document.createElement("div");
  meta.className = "job-meta";
  meta.textContent = metaText(view);
  row.append(meta);

  if (view.state === "FAILED" && view.error) {
    const panel = document.createElement("div");
    panel.className = "job-error";
    panel.dataset.role = "error";
    panel.textContent = view.error;
    row.append(panel);
  }

  const actionsBar = document.createElement("div");
  actionsBar.className = "job-actions";
  if (view.state === "COMPLETED") {
    for (const fileName of view.files) {
      const link = document.createElement("a");
      link.className = "download";
      link.href = actions.fileUrl(view.jobId, fileName);
      link.textContent = fileName;
      link.addEventListener("click", (ev) => {
        ev.preventDefault();
        actions.onDownload(view, fileName, link);
      });
      actionsBar.append(link);
    }
  }
  const del = document.createElement("button");
  del.type = "button";
  del.className = "delete-btn";
  del.textContent = "Delete";
  del.addEventListener("click", () => actions.onDelete(view));
  actionsBar.append(del);
  row.append(actionsBar);

  return row;
}

export function renderModelOptions(select: HTMLSelectElement, models: ModelInfo[]): void {
  if (models.length === 0) return;
  select.textContent = "";
  for (const model of models) {
    const option = document.createElement("option");
    option.value = model.model_id;
    const status = model.installed ? "installed" : "not installed";
    option.textContent = `${model.model_id} (${model.hint}, ${status})`;
    option.dataset.installed = String(model.installed);
    select.append(option);
  }
  // prefer the first installed model, fall back to the server default
  const installed = models.find((m) => m.installed);
  const ids = models.map((m) => m.model_id);
  select.value = installed ? installed.model_id : ids.includes("medium") ? "medium" : ids[0]!;
}

export function showToast(container: HTMLElement, message: string, ttlMs = 4000): void {
  const toast = document.createElement("div");
  toast.className = "toast";
  toast.textContent = message;
  container.append(toast);
  if (ttlMs > 0) {
    setTimeout(() => toast.remove(), ttlMs);
  }
}
