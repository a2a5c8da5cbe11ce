/* Saving an arrangement and reloading it through the URL must land every
 * pinned dialog where it was left, within a pixel.
 */

import { afterEach, expect, test } from "vitest";
import { loadFixture, makeViewer, pinnedDialog, tapTelemetry } from "./helpers";
import { encodeState } from "../src/state";
import { Viewer } from "../src/viewer";
import type { Placement } from "../src/geometry";

afterEach(() => {
  window.location.hash = "";
});

function reload(): Viewer {
  // simulate a fresh page visit at the current URL
  loadFixture();
  const viewer = new Viewer(document);
  viewer.hydrate();
  return viewer;
}

test("three moved pins survive a save and reload within a pixel", () => {
  const viewer = makeViewer();
  tapTelemetry(viewer);

  viewer.togglePin("a1-1", null);
  viewer.togglePin("a2-1", null);
  viewer.togglePin("entropy", null);
  viewer.moveResize("a1-1", { x: 40, y: 60 });
  viewer.moveResize("a2-1", { x: 300, y: 210, w: 400, h: 240 });
  viewer.moveResize("entropy", { x: 10, y: 500, w: 360, h: 150 });

  const saved: Record<string, Placement> = {};
  for (const id of Object.keys(viewer.pinned)) saved[id] = { ...viewer.pinned[id].placement };

  const url = viewer.saveState();
  expect(url).toContain("#cds=");
  expect(window.location.hash).toBe(url.slice(url.indexOf("#")));

  const restored = reload();
  expect(Object.keys(restored.pinned).sort()).toEqual(["a1-1", "a2-1", "entropy"]);
  for (const id of Object.keys(saved)) {
    const got = restored.pinned[id].placement;
    for (const axis of ["x", "y", "w", "h"] as const) {
      expect(Math.abs(got[axis] - saved[id][axis]), `${id}.${axis}`).toBeLessThanOrEqual(1);
    }
    const dialog = pinnedDialog(id) as HTMLElement;
    expect(dialog).not.toBeNull();
    expect(dialog.style.left).toBe(got.x + "px");
    expect(dialog.style.top).toBe(got.y + "px");
    expect(dialog.style.width).toBe(got.w + "px");
    expect(dialog.style.height).toBe(got.h + "px");
  }
});

test("restored pins are undoable state, not ghosts", () => {
  const viewer = makeViewer();
  tapTelemetry(viewer);
  viewer.togglePin("a3-1", null);
  viewer.saveState();

  const restored = reload();
  const tap = tapTelemetry(restored);
  expect(restored.pinned["a3-1"]).toBeDefined();
  // restoring is silent: no pin events for the reader's old actions
  expect(tap.ofType("open_close_annotation")).toHaveLength(0);

  restored.togglePin("a3-1", null); // unpin works on a restored dialog
  expect(restored.pinned["a3-1"]).toBeUndefined();
  expect(pinnedDialog("a3-1")).toBeNull();
});

test("a stale id from some other document is skipped, the rest load", () => {
  window.location.hash = encodeState([
    { id: "ghost", x: 5, y: 5, w: 100, h: 100 },
    { id: "a1-1", x: 64, y: 48, w: 320, h: 200 },
  ]);
  const viewer = reload();
  expect(Object.keys(viewer.pinned)).toEqual(["a1-1"]);
  expect(viewer.pinned["a1-1"].placement).toEqual({ x: 64, y: 48, w: 320, h: 200 });
});

test("mangled state opens a clean page", () => {
  for (const fragment of [
    "#cds=definitely-not-base64!",
    "#cds=" + btoa('{"v":9,"pins":[]}').replace(/\+/g, "-").replace(/\//g, "_"),
    "#cds=" +
      btoa('{"v":1,"pins":[{"id":"a1-1","x":-4,"y":0,"w":100,"h":100}]}')
        .replace(/\+/g, "-")
        .replace(/\//g, "_"),
    "#cds=",
  ]) {
    window.location.hash = fragment;
    const viewer = reload();
    expect(Object.keys(viewer.pinned), fragment).toEqual([]);
  }
});

test("save reflects later rearrangement, not the first layout", () => {
  const viewer = makeViewer();
  tapTelemetry(viewer);
  viewer.togglePin("a4-1", null);
  const first = viewer.saveState();
  viewer.moveResize("a4-1", { x: 222, y: 333 });
  const second = viewer.saveState();
  expect(second).not.toBe(first);

  const restored = reload();
  expect(restored.pinned["a4-1"].placement.x).toBe(222);
  expect(restored.pinned["a4-1"].placement.y).toBe(333);
});

test("the save widget reports how many pins it captured", () => {
  const viewer = makeViewer();
  const tap = tapTelemetry(viewer);
  viewer.togglePin("a1-1", null);
  viewer.togglePin("a5-1", null);
  (document.getElementById("cd-save-state") as HTMLElement).dispatchEvent(
    new MouseEvent("click", { cancelable: true }),
  );
  const saves = tap.ofType("navigation_widget").filter((e) => e.detail.widget === "save-state");
  expect(saves).toHaveLength(1);
  expect(saves[0].detail.result).toBe("2");
});
