/* Marker interaction contract: a hover that settles for a second is one
 * marker interaction, a click pins, a second click unpins, and pin actions
 * replay faithfully through undo and redo.
 */

import { afterEach, beforeEach, expect, test, vi } from "vitest";
import { codeAnchor, floatingDialog, loadFixture, makeViewer, mouse, pinnedDialog, tapTelemetry } from "./helpers";
import { Viewer } from "../src/viewer";

beforeEach(() => {
  vi.useFakeTimers();
});

afterEach(() => {
  vi.useRealTimers();
  window.location.hash = "";
});

test("hovering a marker for a second emits exactly one marker interaction", () => {
  const viewer = makeViewer();
  const tap = tapTelemetry(viewer);
  const anchor = codeAnchor("a2-1@0");

  anchor.dispatchEvent(mouse("mouseenter"));
  expect(floatingDialog("a2-1")).not.toBeNull();
  expect(tap.ofType("interact_marker")).toHaveLength(0); // not yet: dwell is 1s

  vi.advanceTimersByTime(1000);
  expect(tap.ofType("interact_marker")).toHaveLength(1);
  expect(tap.ofType("interact_marker")[0].detail).toEqual({ marker: "a2-1@0" });

  vi.advanceTimersByTime(5000); // lingering emits nothing further
  expect(tap.ofType("interact_marker")).toHaveLength(1);
});

test("a glance under the dwell threshold emits nothing", () => {
  const viewer = makeViewer();
  const tap = tapTelemetry(viewer);
  const anchor = codeAnchor("a2-1@0");

  anchor.dispatchEvent(mouse("mouseenter"));
  vi.advanceTimersByTime(500);
  anchor.dispatchEvent(mouse("mouseleave", { clientX: 500, clientY: 500 }));

  expect(floatingDialog("a2-1")).toBeNull();
  expect(tap.ofType("interact_marker")).toHaveLength(0);
  expect(tap.ofType("open_close_annotation")).toHaveLength(0);
});

test("dismissing a settled hover reports its duration", () => {
  const viewer = makeViewer();
  const tap = tapTelemetry(viewer);
  const anchor = codeAnchor("a2-1@0");

  anchor.dispatchEvent(mouse("mouseenter"));
  vi.advanceTimersByTime(3500);
  anchor.dispatchEvent(mouse("mouseleave", { clientX: 500, clientY: 500 }));

  const hovers = tap.ofType("open_close_annotation");
  expect(hovers).toHaveLength(1);
  expect(hovers[0].detail).toEqual({ annotation: "a2-1", action: "hover", duration_ms: 3500 });
  expect(floatingDialog("a2-1")).toBeNull();
});

test("leaving toward the open panel keeps the chain alive", () => {
  const viewer = makeViewer();
  tapTelemetry(viewer);
  const anchor = codeAnchor("a2-1@0");

  anchor.dispatchEvent(mouse("mouseenter"));
  const dialog = floatingDialog("a2-1");
  expect(dialog).not.toBeNull();
  anchor.dispatchEvent(mouse("mouseleave", { relatedTarget: dialog as Element }));
  expect(floatingDialog("a2-1")).not.toBeNull();
});

test("click pins, second click unpins; anchors mirror the pinned state", () => {
  const viewer = makeViewer();
  const tap = tapTelemetry(viewer);
  const anchor = codeAnchor("a2-1@0");
  const twin = codeAnchor("a2-1@1"); // second marker for the same annotation

  anchor.dispatchEvent(mouse("click"));
  expect(pinnedDialog("a2-1")).not.toBeNull();
  expect(viewer.pinned["a2-1"]).toBeDefined();
  expect(anchor.classList.contains("cd-pinned-anchor")).toBe(true);
  expect(twin.classList.contains("cd-pinned-anchor")).toBe(true);

  anchor.dispatchEvent(mouse("click"));
  expect(pinnedDialog("a2-1")).toBeNull();
  expect(anchor.classList.contains("cd-pinned-anchor")).toBe(false);
  expect(twin.classList.contains("cd-pinned-anchor")).toBe(false);

  const actions = tap.ofType("open_close_annotation").map((e) => e.detail.action);
  expect(actions).toEqual(["pin", "unpin"]);
  // each click is also a marker interaction
  expect(tap.ofType("interact_marker")).toHaveLength(2);
});

test("the pinned dialog's close button unpins", () => {
  const viewer = makeViewer();
  const tap = tapTelemetry(viewer);
  codeAnchor("a3-1@0").dispatchEvent(mouse("click"));
  const dialog = pinnedDialog("a3-1") as HTMLElement;
  (dialog.querySelector(".cd-close") as HTMLElement).dispatchEvent(mouse("click"));
  expect(pinnedDialog("a3-1")).toBeNull();
  expect(tap.ofType("open_close_annotation").map((e) => e.detail.action)).toEqual(["pin", "unpin"]);
});

test("dragging by the dialog head moves the pin by the pointer delta", () => {
  const viewer = makeViewer();
  tapTelemetry(viewer);
  codeAnchor("a1-1@0").dispatchEvent(mouse("click"));
  const before = { ...viewer.pinned["a1-1"].placement };

  const head = (pinnedDialog("a1-1") as HTMLElement).querySelector(".cd-dialog-head") as HTMLElement;
  head.dispatchEvent(mouse("pointerdown", { clientX: 100, clientY: 100 }));
  document.dispatchEvent(mouse("pointermove", { clientX: 130, clientY: 115 }));
  document.dispatchEvent(mouse("pointerup"));

  const after = viewer.pinned["a1-1"].placement;
  expect(after.x).toBe(before.x + 30);
  expect(after.y).toBe(before.y + 15);

  // released: further pointer movement changes nothing
  document.dispatchEvent(mouse("pointermove", { clientX: 400, clientY: 400 }));
  expect(viewer.pinned["a1-1"].placement).toEqual(after);
});

function pinSnapshot(viewer: Viewer): string {
  const ids = Object.keys(viewer.pinned).sort();
  return JSON.stringify(ids.map((id) => [id, viewer.pinned[id].placement]));
}

function lcg(seed: number): () => number {
  let s = seed >>> 0;
  return () => {
    s = (Math.imul(s, 1664525) + 1013904223) >>> 0;
    return s / 2 ** 32;
  };
}

test("undo and redo replay twenty mixed pin actions exactly", () => {
  const viewer = makeViewer();
  const tap = tapTelemetry(viewer);
  const rng = lcg(2026);
  const ids = ["a1-1", "a2-1", "a3-1", "a4-1", "a5-1", "entropy", "api-javax-crypto-cipher"];

  const undoBtn = document.getElementById("cd-undo") as HTMLButtonElement;
  const redoBtn = document.getElementById("cd-redo") as HTMLButtonElement;
  expect(undoBtn.disabled).toBe(true);
  expect(redoBtn.disabled).toBe(true);

  const snapshots: string[] = [pinSnapshot(viewer)];
  const performed: string[] = [];
  for (let i = 0; i < 20; i++) {
    const id = ids[Math.floor(rng() * ids.length)];
    performed.push((viewer.pinned[id] ? "unpin" : "pin") + ":" + id);
    viewer.togglePin(id, null);
    snapshots.push(pinSnapshot(viewer));
  }
  expect(new Set(performed.map((a) => a.split(":")[0])).size).toBe(2); // both kinds occurred
  expect(undoBtn.disabled).toBe(false);

  for (let i = 20; i > 0; i--) {
    undoBtn.dispatchEvent(mouse("click"));
    expect(pinSnapshot(viewer)).toBe(snapshots[i - 1]);
  }
  expect(pinSnapshot(viewer)).toBe(snapshots[0]);
  expect(undoBtn.disabled).toBe(true);
  expect(redoBtn.disabled).toBe(false);

  for (let i = 1; i <= 20; i++) {
    redoBtn.dispatchEvent(mouse("click"));
    expect(pinSnapshot(viewer)).toBe(snapshots[i]);
  }
  expect(redoBtn.disabled).toBe(true);

  const undoEvents = tap.ofType("navigation_widget").filter((e) => e.detail.widget === "undo");
  const redoEvents = tap.ofType("navigation_widget").filter((e) => e.detail.widget === "redo");
  expect(undoEvents.map((e) => e.detail.result)).toEqual([...performed].reverse());
  expect(redoEvents.map((e) => e.detail.result)).toEqual(performed);
});

test("a fresh action clears the redo branch", () => {
  const viewer = makeViewer();
  tapTelemetry(viewer);
  viewer.togglePin("a1-1", null);
  viewer.togglePin("a3-1", null);
  viewer.undo();
  expect(viewer.pinned["a3-1"]).toBeUndefined();

  viewer.togglePin("a4-1", null); // diverge from the undone branch
  const redoBtn = document.getElementById("cd-redo") as HTMLButtonElement;
  expect(redoBtn.disabled).toBe(true);
  viewer.redo(); // no-op
  expect(viewer.pinned["a3-1"]).toBeUndefined();
  expect(viewer.pinned["a4-1"]).toBeDefined();
});

test("telemetry flushes queued events as one JSON batch", () => {
  const viewer = makeViewer();
  const tap = tapTelemetry(viewer);
  codeAnchor("a1-1@0").dispatchEvent(mouse("click"));
  expect(viewer.telemetry.pending.length).toBeGreaterThan(0);

  vi.advanceTimersByTime(500);
  expect(viewer.telemetry.pending).toHaveLength(0);
  expect(tap.sent).toHaveLength(1);
  for (const event of tap.sent[0]) {
    expect(event.pid).toBe("7");
    expect(event.sid).toBe("s1");
    expect(event.did).toBe("EncryptMessage");
    expect(typeof event.t).toBe("string");
  }
});

test("without participant cookies nothing is recorded", () => {
  loadFixture();
  document.cookie = "pid=; expires=Thu, 01 Jan 1970 00:00:00 GMT";
  document.cookie = "sid=; expires=Thu, 01 Jan 1970 00:00:00 GMT";
  const anonymous = new Viewer(document);
  const tap = tapTelemetry(anonymous);
  anonymous.hydrate();
  codeAnchor("a1-1@0").dispatchEvent(mouse("click"));
  expect(pinnedDialog("a1-1")).not.toBeNull(); // the UI still works
  vi.advanceTimersByTime(1000);
  expect(tap.all()).toHaveLength(0);
});

test("booting twice reuses the same viewer", async () => {
  makeViewer(); // loads the fixture DOM; its viewer instance is separate
  delete (window as unknown as { __cdViewer?: unknown }).__cdViewer;
  const main = await import("../src/main");
  const first = main.boot();
  const second = main.boot();
  expect(second).toBe(first);
  expect((window as unknown as { CasdocViewer?: unknown }).CasdocViewer).toBeDefined();
  delete (window as unknown as { __cdViewer?: unknown }).__cdViewer;
});
