/* Shared setup: load the converter-produced fixture into jsdom and capture
 * outgoing telemetry batches.
 *
 * The fixture is real converter output checked in under tests/fixtures; it
 * keeps these tests honest about the DOM contract without shelling out to
 * the converter on every run.
 */

import { readFileSync } from "node:fs";
import { dirname, join } from "node:path";
import { fileURLToPath } from "node:url";
import { Viewer } from "../src/viewer";
import type { QueuedEvent } from "../src/telemetry";

const here = dirname(fileURLToPath(import.meta.url));

export function loadFixture(): void {
  const html = readFileSync(join(here, "fixtures", "encrypt-message.html"), "utf8");
  const parsed = new DOMParser().parseFromString(html, "text/html");
  for (const attr of Array.from(document.body.attributes)) {
    document.body.removeAttribute(attr.name);
  }
  for (const attr of Array.from(parsed.body.attributes)) {
    document.body.setAttribute(attr.name, attr.value);
  }
  // innerHTML leaves any <script> tag inert, which is exactly what we want
  document.body.innerHTML = parsed.body.innerHTML;
}

export function makeViewer(): Viewer {
  loadFixture();
  document.cookie = "pid=7";
  document.cookie = "sid=s1";
  const viewer = new Viewer(document);
  viewer.hydrate();
  return viewer;
}

export interface TelemetryTap {
  sent: QueuedEvent[][];
  all(): QueuedEvent[];
  ofType(type: string): QueuedEvent[];
}

/* jsdom has no fetch; without a stand-in the client would drop batches on
 * flush. Install one that records them instead.
 */
export function tapTelemetry(viewer: Viewer): TelemetryTap {
  const sent: QueuedEvent[][] = [];
  (viewer.win as unknown as { fetch: unknown }).fetch = (_url: string, init: { body: string }) => {
    sent.push(JSON.parse(init.body));
    return { catch: () => undefined };
  };
  const all = () => [...sent.flat(), ...viewer.telemetry.pending];
  return { sent, all, ofType: (type) => all().filter((e) => e.type === type) };
}

export function mouse(type: string, init: MouseEventInit = {}): MouseEvent {
  return new MouseEvent(type, { cancelable: true, ...init });
}

export function pinnedDialog(id: string): HTMLElement | null {
  return document.querySelector(`.cd-dialog.cd-pinned[data-ann="${id}"]`);
}

export function floatingDialog(id: string): HTMLElement | null {
  return document.querySelector(`.cd-dialog:not(.cd-pinned)[data-ann="${id}"]`);
}

export function codeAnchor(markerId: string): HTMLElement {
  const el = document.querySelector(`.cd-code [data-marker-id="${markerId}"]`);
  if (!el) throw new Error(`fixture is missing code anchor ${markerId}`);
  return el as HTMLElement;
}
