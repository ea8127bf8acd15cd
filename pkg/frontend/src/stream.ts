/** Live job updates over server-sent events.

Wraps one EventSource per running job. The factory is injected so tests can
script streams; the browser build passes the real constructor. A dropped
stream is reopened with backoff (the server replays the full event log on
each connect, so replays are safe). Reaching a terminal state closes the
stream for good.
*/

import { TERMINAL_STATES } from "./types.js";
import type { JobEvent, JobState } from "./types.js";

export interface EventSourceLike {
  onmessage: ((ev: { data: string }) => void) | null;
  onerror: ((ev?: unknown) => void) | null;
  close(): void;
}

export type EventSourceFactory = (url: string) => EventSourceLike;

export interface StreamHandlers {
  onEvent: (event: JobEvent) => void;
  /** Called once, after the stream saw COMPLETED or FAILED and closed. */
  onTerminal: (state: JobState) => void;
  /** Called on each drop, before the resubscribe timer is armed. */
  onDrop?: (attempt: number, delayMs: number) => void;
}

const DEFAULT_BACKOFF_MS = [500, 1000, 2000, 4000, 8000];

export class JobStream {
  private source: EventSourceLike | null = null;
  private timer: ReturnType<typeof setTimeout> | null = null;
  private attempt = 0;
  private closed = false;

  constructor(
    private readonly url: string,
    private readonly factory: EventSourceFactory,
    private readonly handlers: StreamHandlers,
    private readonly backoffMs: readonly number[] = DEFAULT_BACKOFF_MS,
  ) {}

  open(): void {
    if (this.closed || this.source) return;
    this.source = this.factory(this.url);
    this.source.onmessage = (ev) => this.handleMessage(ev.data);
    this.source.onerror = () => this.handleDrop();
  }

  close(): void {
    this.closed = true;
    this.dropSource();
    if (this.timer !== null) {
      clearTimeout(this.timer);
      this.timer = null;
    }
  }

  get isOpen(): boolean {
    return this.source !== null;
  }

  private dropSource(): void {
    if (this.source) {
      this.source.onmessage = null;
      this.source.onerror = null;
      this.source.close();
      this.source = null;
    }
  }

  private handleMessage(data: string): void {
    let event: JobEvent;
    try {
      event = JSON.parse(data) as JobEvent;
    } catch {
      return; // skip malformed frames
    }
    this.attempt = 0;
    this.handlers.onEvent(event);
    if (event.type === "state" && event.state && TERMINAL_STATES.has(event.state)) {
      const state = event.state;
      this.close();
      this.handlers.onTerminal(state);
    }
  }

  private handleDrop(): void {
    if (this.closed) return;
    this.dropSource();
    const index = Math.min(this.attempt, this.backoffMs.length - 1);
    const delay = this.backoffMs[index] ?? 1000;
    this.attempt += 1;
    this.handlers.onDrop?.(this.attempt, delay);
    this.timer = setTimeout(() => {
      this.timer = null;
      if (!this.closed) {
        this.source = null;
        this.open();
      }
    }, delay);
  }
}
