/* Client-side event capture.
 *
 * Events queue locally and flush in batches: a short timer after the first
 * queued event, plus a final beacon when the page goes away. Nothing here is
 * allowed to throw into the viewer; telemetry never breaks the page.
 */

export interface TelemetryIds {
  url: string | null;
  pid: string | null;
  sid: string | null;
  did: string;
}

export interface QueuedEvent {
  t: string;
  type: string;
  pid: string;
  sid: string;
  did: string;
  detail: Record<string, unknown>;
}

const FLUSH_MS = 500;

export class TelemetryClient {
  private win: Window;
  private ids: TelemetryIds;
  private queue: QueuedEvent[] = [];
  private flushTimer: ReturnType<typeof setTimeout> | null = null;

  constructor(win: Window, ids: TelemetryIds) {
    this.win = win;
    this.ids = ids;
  }

  get enabled(): boolean {
    return Boolean(this.ids.url && this.ids.pid && this.ids.sid);
  }

  emit(type: string, detail: Record<string, unknown>): void {
    if (!this.enabled) return;
    this.queue.push({
      t: new Date().toISOString(),
      type,
      pid: this.ids.pid as string,
      sid: this.ids.sid as string,
      did: this.ids.did,
      detail,
    });
    if (this.flushTimer === null) {
      this.flushTimer = setTimeout(() => {
        this.flushTimer = null;
        this.flush(false);
      }, FLUSH_MS);
    }
  }

  flush(unloading: boolean): void {
    if (!this.queue.length || !this.ids.url) return;
    const batch = this.queue;
    this.queue = [];
    const body = JSON.stringify(batch);
    const win = this.win;
    try {
      if (unloading && win.navigator && win.navigator.sendBeacon) {
        win.navigator.sendBeacon(this.ids.url, new Blob([body], { type: "application/json" }));
        return;
      }
      if (win.fetch) {
        win
          .fetch(this.ids.url, {
            method: "POST",
            headers: { "Content-Type": "application/json" },
            body,
            keepalive: true,
          })
          .catch(() => {});
      }
    } catch {
      /* swallowed on purpose */
    }
  }

  installUnloadFlush(doc: Document): void {
    this.win.addEventListener("pagehide", () => this.flush(true));
    this.win.addEventListener("visibilitychange", () => {
      if (doc.visibilityState === "hidden") this.flush(true);
    });
  }

  /* Visible for tests: the events waiting for the next flush. */
  get pending(): readonly QueuedEvent[] {
    return this.queue;
  }
}
