/** Wire types for the atrain HTTP API. Field names match the server JSON. */

export type JobState =
  | "CREATED"
  | "CONVERTING"
  | "TRANSCRIBING"
  | "DIARIZING"
  | "ALIGNING"
  | "EXPORTING"
  | "COMPLETED"
  | "FAILED";

export const TERMINAL_STATES: ReadonlySet<JobState> = new Set(["COMPLETED", "FAILED"]);

export interface JobConfigWire {
  input_path: string;
  model_id: string;
  language: string;
  num_speakers: number | string;
  device: string;
  translate: boolean;
  gap_tolerance_s: number;
}

export interface JobRecordWire {
  job_id: string;
  state: JobState;
  config: JobConfigWire;
  directory: string;
  created_at: string;
  started_at: string | null;
  finished_at: string | null;
  duration_s: number | null;
  processing_time_s: number | null;
  rpt: number | null;
  error: string | null;
  stage_times_s: Record<string, number>;
  /** Export files present in the job directory, added by the API layer. */
  files: string[];
}

export interface ModelInfo {
  model_id: string;
  tier: string;
  installed: boolean;
  hint: string;
}

/** One frame from the job event stream. */
export interface JobEvent {
  type: "state" | "phase" | "progress";
  ts?: string;
  state?: JobState;
  stage?: string;
  phase?: string;
  fraction?: number;
  error?: string;
}

/** Options sent as the multipart "config" field when creating a job. */
export interface JobOptions {
  model?: string;
  language?: string;
  num_speakers?: string;
  device?: string;
  translate?: boolean;
  gap_tolerance_s?: number;
}

export const EXPORT_FILE_NAMES = [
  "transcript_timestamps.txt",
  "transcript.txt",
  "transcript_qda.txt",
  "transcript.json",
] as const;
