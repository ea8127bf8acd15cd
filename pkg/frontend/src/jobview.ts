/** Pure derivations from job records and stream events to display state.

Everything here is a function of server payloads (the latest record plus the
latest stream frames); nothing reaches back into the DOM or the network.
*/

import { TERMINAL_STATES } from "./types.js";
import type { JobEvent, JobRecordWire, JobState } from "./types.js";

/** Latest stream-derived facts layered over a persisted record. */
export interface StreamOverlay {
  state?: JobState;
  stage?: string;
  fraction?: number;
  error?: string;
}

export interface JobView {
  jobId: string;
  record: JobRecordWire;
  state: JobState;
  badge: BadgeKind;
  /** 0..100, monotone per job while the stream is live. */
  percent: number;
  running: boolean;
  terminal: boolean;
  elapsedText: string;
  error: string | null;
  files: string[];
}

export type BadgeKind = "queued" | "running" | "done" | "failed";

// Share of the progress bar given to each stage, in pipeline order.
// Transcription dominates wall time, so it gets most of the bar.
const STAGE_SPANS: ReadonlyArray<readonly [JobState, number]> = [
  ["CONVERTING", 8],
  ["TRANSCRIBING", 57],
  ["DIARIZING", 20],
  ["ALIGNING", 7],
  ["EXPORTING", 8],
];

function spansFor(diarization: boolean): ReadonlyArray<readonly [JobState, number]> {
  if (diarization) return STAGE_SPANS;
  const kept = STAGE_SPANS.filter(([stage]) => stage !== "DIARIZING");
  const total = kept.reduce((sum, [, span]) => sum + span, 0);
  return kept.map(([stage, span]) => [stage, (span * 100) / total] as const);
}

/** Progress percentage for a job in `state`, `fraction` through that stage. */
export function progressPercent(state: JobState, fraction: number, diarization: boolean): number {
  if (state === "CREATED" || state === "FAILED") return 0;
  if (state === "COMPLETED") return 100;
  const clamped = Math.min(Math.max(fraction, 0), 1);
  let start = 0;
  for (const [stage, span] of spansFor(diarization)) {
    if (stage === state) {
      return Math.round(start + clamped * span);
    }
    start += span;
  }
  return 0; // unknown stage name
}

export function badgeKind(state: JobState): BadgeKind {
  if (state === "CREATED") return "queued";
  if (state === "COMPLETED") return "done";
  if (state === "FAILED") return "failed";
  return "running";
}

export function formatElapsed(seconds: number): string {
  const s = Math.max(0, Math.floor(seconds));
  if (s < 60) return `${s}s`;
  const m = Math.floor(s / 60);
  if (m < 60) return `${m}m ${String(s % 60).padStart(2, "0")}s`;
  const h = Math.floor(m / 60);
  return `${h}h ${String(m % 60).padStart(2, "0")}m`;
}

/** Wall-clock seconds the job has been running (or ran, once finished). */
export function elapsedSeconds(record: JobRecordWire, nowMs: number): number {
  const startIso = record.started_at ?? record.created_at;
  const start = Date.parse(startIso);
  if (Number.isNaN(start)) return 0;
  const end = record.finished_at ? Date.parse(record.finished_at) : nowMs;
  return (end - start) / 1000;
}

/** Merge the persisted record with the latest stream frames into one view. */
export function deriveJobView(
  record: JobRecordWire,
  overlay: StreamOverlay,
  nowMs: number,
): JobView {
  const state = overlay.state ?? record.state;
  const diarization = record.config.num_speakers !== "off";
  const fraction = overlay.fraction ?? 0;
  return {
    jobId: record.job_id,
    record,
    state,
    badge: badgeKind(state),
    percent: progressPercent(state, fraction, diarization),
    running: !TERMINAL_STATES.has(state),
    terminal: TERMINAL_STATES.has(state),
    elapsedText: formatElapsed(elapsedSeconds(record, nowMs)),
    error: overlay.error ?? record.error,
    files: record.files ?? [],
  };
}

/** Fold one stream frame into the overlay, returning the next overlay. */
export function applyEvent(overlay: StreamOverlay, event: JobEvent): StreamOverlay {
  const next: StreamOverlay = { ...overlay };
  if (event.type === "state" && event.state) {
    next.state = event.state;
    next.fraction = 0;
    if (event.stage) next.stage = event.stage;
    if (event.error) next.error = event.error;
  } else if (event.type === "progress" && typeof event.fraction === "number") {
    next.stage = event.stage ?? next.stage;
    next.fraction = event.fraction;
  } else if (event.type === "phase") {
    next.stage = event.stage ?? next.stage;
  }
  return next;
}
