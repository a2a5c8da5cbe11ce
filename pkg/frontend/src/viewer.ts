/* Viewer runtime for interactive code example documents.
 *
 * Hydrates a document produced by the converter: markers reveal floating
 * annotations, clicking pins them into movable dialogs, hidden content is
 * searchable, pin/unpin actions are undoable, stepped annotations form a
 * walkthrough, and the arrangement can be captured in a shareable URL.
 * Interaction events are posted to the telemetry endpoint fire-and-forget;
 * nothing in the UI waits on the network.
 */

import {
  clampPlacement,
  inKeepRegion,
  type Box,
  type Placement,
} from "./geometry";
import { ActionHistory, type PinAction } from "./history";
import { searchAnnotations, type Searchable } from "./search";
import { decodeFragment, encodeState, type Pin } from "./state";
import { TelemetryClient } from "./telemetry";

const DWELL_MS = 1000;
const PIN_OFFSET = 24;
const CASCADE = 16;
const DEFAULT_W = 320;
const DEFAULT_H = 200;

interface AnnotationInfo {
  el: Element;
  title: string;
  text: string;
  parentId: string | null;
  step: number | null;
}

interface FloatingEntry {
  id: string;
  markerId: string;
  anchorEl: Element;
  dialog: HTMLElement;
  openedAt: number;
  markerEmitted: boolean;
  dwellTimer: ReturnType<typeof setTimeout> | null;
}

interface PinnedEntry {
  dialog: HTMLElement;
  placement: Placement;
}

function parseCookies(doc: Document): Record<string, string> {
  const out: Record<string, string> = {};
  let raw: string;
  try {
    raw = doc.cookie || "";
  } catch {
    raw = "";
  }
  for (const part of raw.split(";")) {
    const eq = part.indexOf("=");
    if (eq > 0) out[part.slice(0, eq).trim()] = part.slice(eq + 1).trim();
  }
  return out;
}

export class Viewer {
  doc: Document;
  win: Window;
  did: string;

  annotations: Record<string, AnnotationInfo> = {};
  anchorsByAnn: Record<string, Element[]> = {};
  pinned: Record<string, PinnedEntry> = {};
  floating: FloatingEntry[] = [];
  history = new ActionHistory();
  walkthroughIds: string[] = [];
  wtCursor: number | null = null;
  wtDialog: { id: string; dialog: HTMLElement } | null = null;
  telemetry: TelemetryClient;

  private pinCount = 0;

  constructor(doc: Document) {
    this.doc = doc;
    this.win = doc.defaultView as Window;
    const body = doc.body;
    this.did = body.getAttribute("data-cd-document-id") || "";
    const cookies = parseCookies(doc);
    this.telemetry = new TelemetryClient(this.win, {
      url: body.getAttribute("data-cd-telemetry-url") || null,
      pid: cookies.pid || null,
      sid: cookies.sid || null,
      did: this.did,
    });
  }

  hydrate(): void {
    this.doc.querySelectorAll("#cd-annotations .cd-annotation").forEach((el) => {
      const id = el.getAttribute("data-id");
      if (!id) return;
      const stepAttr = el.getAttribute("data-step");
      this.annotations[id] = {
        el,
        title: el.getAttribute("data-title") || "",
        text: el.textContent || "",
        parentId: el.getAttribute("data-parent") || null,
        step: stepAttr === null ? null : parseInt(stepAttr, 10),
      };
    });
    this.walkthroughIds = Object.keys(this.annotations)
      .filter((id) => this.annotations[id].step !== null)
      .sort((a, b) => (this.annotations[a].step as number) - (this.annotations[b].step as number));

    this.doc
      .querySelectorAll(".cd-code .cd-anchor, .cd-code .cd-marker-block")
      .forEach((el) => this.attachMarker(el));

    this.initToolbar();
    this.applyFragment();
    this.telemetry.installUnloadFlush(this.doc);
  }

  private emit(type: string, detail: Record<string, unknown>): void {
    this.telemetry.emit(type, detail);
  }

  attachMarker(el: Element): void {
    const id = el.getAttribute("data-ann");
    if (!id) return;
    (this.anchorsByAnn[id] = this.anchorsByAnn[id] || []).push(el);
    el.addEventListener("mouseenter", () => this.openFloating(id, el));
    el.addEventListener("mouseleave", (ev) => this.maybeDismiss(ev as MouseEvent));
    el.addEventListener("click", (ev) => {
      ev.preventDefault();
      this.emit("interact_marker", { marker: el.getAttribute("data-marker-id") || id + "@0" });
      this.togglePin(id, el);
    });
  }

  // --- floating chain --------------------------------------------------------

  openFloating(id: string, anchorEl: Element): void {
    // hovering an anchor in the code starts a fresh chain; hovering a nested
    // anchor inside a floating panel extends the chain
    const level = this.chainLevelOf(anchorEl);
    if (level === -1) {
      this.closeFloatingFrom(0);
    } else {
      this.closeFloatingFrom(level + 1);
    }
    if (this.pinned[id] || this.findFloating(id)) return;

    const dialog = this.buildDialog(id, false);
    this.doc.body.appendChild(dialog);
    this.placeFloating(dialog, anchorEl);
    const entry: FloatingEntry = {
      id,
      markerId: anchorEl.getAttribute("data-marker-id") || id + "@0",
      anchorEl,
      dialog,
      openedAt: Date.now(),
      markerEmitted: false,
      dwellTimer: null,
    };
    entry.dwellTimer = setTimeout(() => {
      entry.markerEmitted = true;
      this.emit("interact_marker", { marker: entry.markerId });
    }, DWELL_MS);
    this.floating.push(entry);
  }

  findFloating(id: string): FloatingEntry | null {
    for (const entry of this.floating) {
      if (entry.id === id) return entry;
    }
    return null;
  }

  chainLevelOf(el: Element): number {
    for (let i = 0; i < this.floating.length; i++) {
      if (this.floating[i].dialog.contains(el)) return i;
    }
    return -1;
  }

  closeFloatingFrom(level: number): void {
    while (this.floating.length > level) {
      const entry = this.floating.pop() as FloatingEntry;
      if (entry.dwellTimer !== null) clearTimeout(entry.dwellTimer);
      const duration = Date.now() - entry.openedAt;
      if (duration >= DWELL_MS) {
        this.emit("open_close_annotation", {
          annotation: entry.id,
          action: "hover",
          duration_ms: Math.round(duration),
        });
      }
      if (entry.dialog.parentNode) entry.dialog.parentNode.removeChild(entry.dialog);
    }
  }

  placeFloating(dialog: HTMLElement, anchorEl: Element): void {
    const rect = anchorEl.getBoundingClientRect();
    dialog.style.left = Math.max(0, rect.left + (this.win.scrollX || 0)) + "px";
    dialog.style.top = Math.max(0, rect.bottom + 4 + (this.win.scrollY || 0)) + "px";
  }

  maybeDismiss(ev: MouseEvent): void {
    // The chain stays open while the pointer is over any anchor, any panel,
    // or the corridor between an anchor and its panel.
    if (!this.floating.length) return;
    const x = ev.clientX;
    const y = ev.clientY;
    let keep = -1;
    for (let i = 0; i < this.floating.length; i++) {
      if (this.inRegion(this.floating[i], x, y)) keep = i;
    }
    const target = ev.relatedTarget as Node | null;
    if (target) {
      for (let j = 0; j < this.floating.length; j++) {
        if (this.floating[j].dialog.contains(target) || this.floating[j].anchorEl.contains(target)) {
          keep = Math.max(keep, j);
        }
      }
    }
    this.closeFloatingFrom(keep + 1);
  }

  private inRegion(entry: FloatingEntry, x: number, y: number): boolean {
    const a = entry.anchorEl.getBoundingClientRect() as Box;
    const p = entry.dialog.getBoundingClientRect() as Box;
    return inKeepRegion(a, p, x, y);
  }

  // --- dialogs ---------------------------------------------------------------

  buildDialog(id: string, pinnedStyle: boolean, onClose?: () => void): HTMLElement {
    const ann = this.annotations[id];
    const dialog = this.doc.createElement("div");
    dialog.className = "cd-dialog" + (pinnedStyle ? " cd-pinned" : "");
    dialog.setAttribute("data-ann", id);

    const head = this.doc.createElement("div");
    head.className = "cd-dialog-head";
    const title = this.doc.createElement("span");
    title.className = "cd-dialog-title";
    title.textContent = ann && ann.title ? ann.title : "";
    head.appendChild(title);
    if (pinnedStyle) {
      const close = this.doc.createElement("button");
      close.className = "cd-close";
      close.setAttribute("type", "button");
      close.setAttribute("title", onClose ? "Close" : "Unpin");
      close.textContent = "×";
      close.addEventListener("click", () => {
        if (onClose) onClose();
        else this.unpin(id, true);
      });
      head.appendChild(close);
      this.makeDraggable(head, id);
    }
    dialog.appendChild(head);

    const crumbs = this.breadcrumbTrail(id);
    if (pinnedStyle && crumbs.length) {
      dialog.appendChild(this.buildBreadcrumbs(crumbs));
    }

    const body = this.doc.createElement("div");
    body.className = "cd-dialog-body";
    if (ann) {
      ann.el.querySelectorAll(".cd-part").forEach((part) => {
        body.appendChild(part.cloneNode(true));
      });
    }
    dialog.appendChild(body);

    // cloneNode copies no listeners, so nested anchors rewire per dialog
    body.querySelectorAll(".cd-anchor").forEach((el) => this.attachNestedAnchor(el));
    return dialog;
  }

  attachNestedAnchor(el: Element): void {
    const id = el.getAttribute("data-ann");
    if (!id) return;
    el.addEventListener("mouseenter", () => this.openFloating(id, el));
    el.addEventListener("mouseleave", (ev) => this.maybeDismiss(ev as MouseEvent));
    el.addEventListener("click", (ev) => {
      ev.preventDefault();
      ev.stopPropagation();
      this.emit("interact_marker", { marker: el.getAttribute("data-marker-id") || id + "@0" });
      this.togglePin(id, el);
    });
  }

  breadcrumbTrail(id: string): string[] {
    const trail: string[] = [];
    let cur = this.annotations[id] ? this.annotations[id].parentId : null;
    let guard = 0;
    while (cur && this.annotations[cur] && guard++ < 32) {
      trail.unshift(cur);
      cur = this.annotations[cur].parentId;
    }
    return trail;
  }

  buildBreadcrumbs(trail: string[]): HTMLElement {
    const nav = this.doc.createElement("nav");
    nav.className = "cd-breadcrumbs";
    trail.forEach((ancestorId, i) => {
      if (i) nav.appendChild(this.doc.createTextNode(" › "));
      const btn = this.doc.createElement("button");
      btn.setAttribute("type", "button");
      const ann = this.annotations[ancestorId];
      btn.textContent = ann && ann.title ? ann.title : ancestorId;
      btn.addEventListener("click", () => {
        this.emit("navigation_widget", { widget: "breadcrumb", result: ancestorId });
        if (!this.pinned[ancestorId]) {
          // navigating up the trail opens the ancestor; it is not the
          // reader pressing pin, so the event says "open", not "pin"
          this.pin(ancestorId, null, true, true);
          this.emit("open_close_annotation", { annotation: ancestorId, action: "open" });
        }
      });
      nav.appendChild(btn);
    });
    return nav;
  }

  // --- pinning ---------------------------------------------------------------

  private codeOrigin(): { x: number; y: number } {
    const pre = this.doc.querySelector(".cd-code");
    if (!pre) return { x: 0, y: 0 };
    const rect = pre.getBoundingClientRect();
    return { x: rect.left + (this.win.scrollX || 0), y: rect.top + (this.win.scrollY || 0) };
  }

  togglePin(id: string, anchorEl: Element | null): void {
    if (this.pinned[id]) {
      this.unpin(id, true);
    } else {
      // a hover chain ending in a click becomes a pin; flush its hover first
      const open = this.findFloating(id);
      const level = open ? this.floating.indexOf(open) : -1;
      if (level !== -1) this.closeFloatingFrom(level);
      this.pin(id, this.defaultPlacement(anchorEl), true);
    }
  }

  defaultPlacement(anchorEl: Element | null): Placement {
    const origin = this.codeOrigin();
    const cascade = (this.pinCount % 8) * CASCADE;
    let x = PIN_OFFSET + cascade;
    let y = PIN_OFFSET + cascade;
    if (anchorEl && anchorEl.getBoundingClientRect) {
      const rect = anchorEl.getBoundingClientRect();
      x = Math.max(0, Math.round(rect.right + (this.win.scrollX || 0) - origin.x) + PIN_OFFSET + cascade);
      y = Math.max(0, Math.round(rect.bottom + (this.win.scrollY || 0) - origin.y) + PIN_OFFSET + cascade);
    }
    return { x, y, w: DEFAULT_W, h: DEFAULT_H };
  }

  pin(id: string, placement: Placement | null, recordAction: boolean, silent?: boolean): void {
    if (this.pinned[id] || !this.annotations[id]) return;
    const resolved = this.clampPlacement(placement || this.defaultPlacement(null));
    const dialog = this.buildDialog(id, true);
    this.doc.body.appendChild(dialog);
    this.applyPlacement(dialog, resolved);
    this.pinned[id] = { dialog, placement: resolved };
    this.pinCount++;
    this.setAnchorPinned(id, true);
    if (recordAction) {
      this.pushAction({ kind: "pin", id, placement: resolved });
    }
    if (!silent) {
      this.emit("open_close_annotation", { annotation: id, action: "pin" });
    }
  }

  unpin(id: string, recordAction: boolean, silent?: boolean): void {
    const entry = this.pinned[id];
    if (!entry) return;
    if (entry.dialog.parentNode) entry.dialog.parentNode.removeChild(entry.dialog);
    const last = entry.placement;
    delete this.pinned[id];
    this.setAnchorPinned(id, false);
    if (recordAction) {
      this.pushAction({ kind: "unpin", id, placement: last });
    }
    if (!silent) {
      this.emit("open_close_annotation", { annotation: id, action: "unpin" });
    }
  }

  private setAnchorPinned(id: string, on: boolean): void {
    for (const el of this.anchorsByAnn[id] || []) {
      if (on) el.classList.add("cd-pinned-anchor");
      else el.classList.remove("cd-pinned-anchor");
    }
  }

  private applyPlacement(dialog: HTMLElement, placement: Placement): void {
    const origin = this.codeOrigin();
    dialog.style.left = origin.x + placement.x + "px";
    dialog.style.top = origin.y + placement.y + "px";
    dialog.style.width = placement.w + "px";
    dialog.style.height = placement.h + "px";
  }

  clampPlacement(p: Placement): Placement {
    return clampPlacement(p, this.win.innerWidth || 1024, this.win.innerHeight || 768);
  }

  moveResize(id: string, placement: Partial<Placement>): void {
    const entry = this.pinned[id];
    if (!entry) return;
    const next = this.clampPlacement({
      x: placement.x !== undefined ? placement.x : entry.placement.x,
      y: placement.y !== undefined ? placement.y : entry.placement.y,
      w: placement.w !== undefined ? placement.w : entry.placement.w,
      h: placement.h !== undefined ? placement.h : entry.placement.h,
    });
    entry.placement = next;
    this.applyPlacement(entry.dialog, next);
  }

  private makeDraggable(handle: HTMLElement, id: string): void {
    handle.addEventListener("pointerdown", (down) => {
      const downTarget = down.target as Element | null;
      if (downTarget && downTarget.tagName === "BUTTON") return;
      const entry = this.pinned[id];
      if (!entry) return;
      const startX = (down as PointerEvent).clientX;
      const startY = (down as PointerEvent).clientY;
      const base = { x: entry.placement.x, y: entry.placement.y };
      const onMove = (move: Event) => {
        this.moveResize(id, {
          x: base.x + ((move as PointerEvent).clientX - startX),
          y: base.y + ((move as PointerEvent).clientY - startY),
        });
      };
      const onUp = () => {
        this.doc.removeEventListener("pointermove", onMove);
        this.doc.removeEventListener("pointerup", onUp);
      };
      this.doc.addEventListener("pointermove", onMove);
      this.doc.addEventListener("pointerup", onUp);
      if (down.preventDefault) down.preventDefault();
    });
  }

  // --- undo / redo -----------------------------------------------------------

  private pushAction(action: PinAction): void {
    this.history.record(action);
    this.updateHistoryButtons();
  }

  undo(): void {
    const action = this.history.undo();
    if (!action) return;
    if (action.kind === "pin") this.unpin(action.id, false, true);
    else this.pin(action.id, action.placement, false, true);
    this.emit("navigation_widget", { widget: "undo", result: action.kind + ":" + action.id });
    this.updateHistoryButtons();
  }

  redo(): void {
    const action = this.history.redo();
    if (!action) return;
    if (action.kind === "pin") this.pin(action.id, action.placement, false, true);
    else this.unpin(action.id, false, true);
    this.emit("navigation_widget", { widget: "redo", result: action.kind + ":" + action.id });
    this.updateHistoryButtons();
  }

  private updateHistoryButtons(): void {
    const u = this.doc.getElementById("cd-undo") as HTMLButtonElement | null;
    const r = this.doc.getElementById("cd-redo") as HTMLButtonElement | null;
    if (u) u.disabled = !this.history.canUndo;
    if (r) r.disabled = !this.history.canRedo;
  }

  // --- search ----------------------------------------------------------------

  search(query: string) {
    const corpus: Searchable[] = Object.keys(this.annotations).map((id) => ({
      id,
      title: this.annotations[id].title,
      text: this.annotations[id].text,
    }));
    return searchAnnotations(corpus, query);
  }

  private initSearch(): void {
    const input = this.doc.getElementById("cd-search") as HTMLInputElement | null;
    const results = this.doc.getElementById("cd-search-results");
    if (!input || !results) return;

    input.addEventListener("input", () => {
      const query = input.value;
      this.emit("search", { query, results: [] });
      if (!query) {
        results.hidden = true;
        results.textContent = "";
        return;
      }
      const hits = this.search(query);
      results.textContent = "";
      if (!hits.length) {
        const none = this.doc.createElement("span");
        none.className = "cd-search-empty";
        none.textContent = "No matches";
        results.appendChild(none);
      }
      hits.slice(0, 20).forEach((hit) => {
        const btn = this.doc.createElement("button");
        btn.className = "cd-search-hit";
        btn.setAttribute("type", "button");
        btn.setAttribute("data-ann", hit.id);
        const t = this.doc.createElement("span");
        t.className = "cd-hit-title";
        t.textContent = hit.title;
        const s = this.doc.createElement("span");
        s.className = "cd-hit-snippet";
        s.textContent = hit.snippet;
        btn.appendChild(t);
        btn.appendChild(s);
        btn.addEventListener("mouseenter", () => {
          this.emit("search", { query, results: [{ id: hit.id, action: "hovered" }] });
          this.previewAnnotation(hit.id, btn);
        });
        btn.addEventListener("mouseleave", (ev) => this.maybeDismiss(ev as MouseEvent));
        btn.addEventListener("click", () => {
          this.emit("search", { query, results: [{ id: hit.id, action: "selected" }] });
          this.closeFloatingFrom(0);
          if (!this.pinned[hit.id]) this.pin(hit.id, null, true, true);
          this.emit("open_close_annotation", { annotation: hit.id, action: "open" });
          results.hidden = true;
          input.value = "";
        });
        results.appendChild(btn);
      });
      results.hidden = false;
    });

    this.doc.addEventListener("click", (ev) => {
      if (results.hidden) return;
      const target = ev.target as Node | null;
      const inside = (target && results.contains(target)) || ev.target === input;
      if (!inside) {
        results.hidden = true;
      }
    });
  }

  previewAnnotation(id: string, nearEl: Element): void {
    this.closeFloatingFrom(0);
    if (this.pinned[id]) return;
    const dialog = this.buildDialog(id, false);
    this.doc.body.appendChild(dialog);
    this.placeFloating(dialog, nearEl);
    this.floating.push({
      id,
      markerId: id + "@0",
      anchorEl: nearEl,
      dialog,
      openedAt: Date.now(),
      markerEmitted: true, // search previews are not marker interactions
      dwellTimer: null,
    });
  }

  // --- walkthrough -----------------------------------------------------------

  private initWalkthrough(): void {
    const button = this.doc.getElementById("cd-walkthrough");
    const bar = this.doc.getElementById("cd-walkthrough-bar");
    if (!button || !bar) return;
    button.addEventListener("click", () => {
      // opening the bar reveals nothing yet; the first Next shows step one
      this.walkthroughClearDialog();
      this.wtCursor = -1;
      bar.hidden = false;
      this.walkthroughStatus();
      this.emit("navigation_widget", { widget: "walkthrough", result: "start" });
    });
    const next = this.doc.getElementById("cd-wt-next");
    const prev = this.doc.getElementById("cd-wt-prev");
    const stop = this.doc.getElementById("cd-wt-stop");
    if (next) next.addEventListener("click", () => this.walkthroughNext());
    if (prev) prev.addEventListener("click", () => this.walkthroughPrev());
    if (stop) stop.addEventListener("click", () => this.walkthroughStop());
  }

  walkthroughGo(index: number): void {
    if (index < 0 || index >= this.walkthroughIds.length) return;
    this.walkthroughClearDialog();
    this.wtCursor = index;
    const id = this.walkthroughIds[index];
    const dialog = this.buildDialog(id, true, () => this.walkthroughStop());
    dialog.classList.add("cd-wt-dialog");
    this.doc.body.appendChild(dialog);
    this.applyPlacement(
      dialog,
      this.clampPlacement(this.defaultPlacement((this.anchorsByAnn[id] || [])[0] || null)),
    );
    this.wtDialog = { id, dialog };
    this.markCurrent(id, true);
    this.walkthroughStatus();
    this.emit("open_close_annotation", { annotation: id, action: "open" });
  }

  private walkthroughClearDialog(): void {
    if (this.wtDialog) {
      if (this.wtDialog.dialog.parentNode) {
        this.wtDialog.dialog.parentNode.removeChild(this.wtDialog.dialog);
      }
      this.markCurrent(this.wtDialog.id, false);
      this.emit("open_close_annotation", { annotation: this.wtDialog.id, action: "close" });
      this.wtDialog = null;
    }
  }

  private walkthroughStatus(): void {
    const status = this.doc.getElementById("cd-wt-status");
    if (!status) return;
    const n = this.walkthroughIds.length;
    if (this.wtCursor === null || this.wtCursor < 0) {
      status.textContent = n === 1 ? "1 step" : n + " steps";
    } else {
      status.textContent = "Step " + (this.wtCursor + 1) + " of " + n;
    }
  }

  private markCurrent(id: string, on: boolean): void {
    for (const el of this.anchorsByAnn[id] || []) {
      if (on) el.classList.add("cd-wt-current");
      else el.classList.remove("cd-wt-current");
    }
  }

  walkthroughNext(): void {
    if (this.wtCursor === null) return;
    this.emit("navigation_widget", { widget: "walkthrough", result: "next" });
    if (this.wtCursor + 1 >= this.walkthroughIds.length) {
      this.walkthroughStop();
      return;
    }
    this.walkthroughGo(this.wtCursor + 1);
  }

  walkthroughPrev(): void {
    if (this.wtCursor === null) return;
    this.emit("navigation_widget", { widget: "walkthrough", result: "prev" });
    if (this.wtCursor <= 0) return; // stay at the first step
    this.walkthroughGo(this.wtCursor - 1);
  }

  walkthroughStop(): void {
    this.walkthroughClearDialog();
    this.wtCursor = null;
    const bar = this.doc.getElementById("cd-walkthrough-bar");
    if (bar) (bar as HTMLElement).hidden = true;
  }

  // --- save state ------------------------------------------------------------

  saveState(): string {
    const ids = Object.keys(this.pinned).sort();
    const pins: Pin[] = ids.map((id) => {
      const p = this.pinned[id].placement;
      return { id, x: Math.round(p.x), y: Math.round(p.y), w: Math.round(p.w), h: Math.round(p.h) };
    });
    const fragment = encodeState(pins);
    const url = this.win.location.href.split("#")[0] + fragment;
    try {
      this.win.history.replaceState(null, "", fragment);
    } catch {
      /* file:// or sandbox; the returned URL still works */
    }
    try {
      const clipboard = this.win.navigator.clipboard;
      if (clipboard) clipboard.writeText(url).catch(() => {});
    } catch {
      /* clipboard unavailable */
    }
    this.emit("navigation_widget", { widget: "save-state", result: String(pins.length) });
    return url;
  }

  applyFragment(): void {
    const pins = decodeFragment(this.win.location.hash || "");
    if (pins === null) return; // invalid or absent state: open clean
    for (const pin of pins) {
      if (!this.annotations[pin.id]) continue; // stale id from another document
      if (!this.pinned[pin.id]) {
        this.pin(pin.id, { x: pin.x, y: pin.y, w: pin.w, h: pin.h }, false, true);
      }
    }
  }

  // --- toolbar ---------------------------------------------------------------

  private initToolbar(): void {
    this.initSearch();
    this.initWalkthrough();
    const undoBtn = this.doc.getElementById("cd-undo");
    const redoBtn = this.doc.getElementById("cd-redo");
    const saveBtn = this.doc.getElementById("cd-save-state");
    if (undoBtn) undoBtn.addEventListener("click", () => this.undo());
    if (redoBtn) redoBtn.addEventListener("click", () => this.redo());
    if (saveBtn) saveBtn.addEventListener("click", () => this.saveState());
    this.updateHistoryButtons();

    const toggle = this.doc.querySelector(".cd-format-toggle");
    if (toggle) {
      toggle.addEventListener("click", () => {
        const format = toggle.getAttribute("data-format") || "baseline";
        try {
          this.doc.cookie = "format=" + format + "; path=/; max-age=31536000";
        } catch {
          /* cookies unavailable from disk */
        }
      });
    }
  }
}
