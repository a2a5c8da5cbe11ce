/* Viewer runtime for interactive code example documents.
 *
 * Hydrates a document produced by the converter: markers reveal floating
 * annotations, clicking pins them into movable dialogs, hidden content is
 * searchable, pin/unpin actions are undoable, stepped annotations form a
 * walkthrough, and the arrangement can be captured in a shareable URL.
 * Interaction events are posted to the telemetry endpoint fire-and-forget;
 * nothing in the UI waits on the network.
 *
 * This file is generated from the frontend package (frontend/src); edits
 * belong there. Rebuild with: npm run sync
 */
"use strict";
(() => {
  // src/geometry.ts
  var MIN_W = 80;
  var MIN_H = 40;
  var HANDLE_PX = 16;
  var CORRIDOR_PX = 12;
  function clampPlacement(p, viewportW, viewportH) {
    const maxX = Math.max(0, viewportW - HANDLE_PX);
    const maxY = Math.max(0, viewportH - HANDLE_PX);
    return {
      x: Math.min(Math.max(0, Math.round(p.x)), maxX),
      y: Math.min(Math.max(0, Math.round(p.y)), maxY),
      w: Math.max(MIN_W, Math.round(p.w)),
      h: Math.max(MIN_H, Math.round(p.h))
    };
  }
  function inBox(b, x, y, pad) {
    return x >= b.left - pad && x <= b.right + pad && y >= b.top - pad && y <= b.bottom + pad;
  }
  function inKeepRegion(anchor, panel, x, y) {
    if (inBox(anchor, x, y, CORRIDOR_PX) || inBox(panel, x, y, CORRIDOR_PX)) return true;
    const corridor = {
      left: Math.min(anchor.left, panel.left) - CORRIDOR_PX,
      right: Math.max(anchor.right, panel.right) + CORRIDOR_PX,
      top: Math.min(anchor.bottom, panel.bottom),
      bottom: Math.max(anchor.top, panel.top)
    };
    return x >= corridor.left && x <= corridor.right && y >= corridor.top && y <= corridor.bottom;
  }

  // src/history.ts
  var HISTORY_DEPTH = 50;
  var ActionHistory = class {
    constructor() {
      this.past = [];
      this.future = [];
    }
    record(action) {
      this.past.push(action);
      if (this.past.length > HISTORY_DEPTH) this.past.shift();
      this.future = [];
    }
    undo() {
      const action = this.past.pop();
      if (!action) return null;
      this.future.push(action);
      return action;
    }
    redo() {
      const action = this.future.pop();
      if (!action) return null;
      this.past.push(action);
      return action;
    }
    get canUndo() {
      return this.past.length > 0;
    }
    get canRedo() {
      return this.future.length > 0;
    }
  };

  // src/search.ts
  var CONTEXT = 30;
  function searchAnnotations(entries, query) {
    const needle = query.toLowerCase();
    if (!needle) return [];
    const hits = [];
    for (const entry of entries) {
      const haystack = entry.title + "\n" + entry.text;
      const at = haystack.toLowerCase().indexOf(needle);
      if (at < 0) continue;
      const start = Math.max(0, at - CONTEXT);
      const end = Math.min(haystack.length, at + needle.length + CONTEXT);
      const snippet = haystack.slice(start, end).replace(/\s+/g, " ").trim();
      hits.push({ id: entry.id, title: entry.title || entry.id, snippet });
    }
    return hits;
  }

  // src/state.ts
  var STATE_VERSION = 1;
  var SLUG = /^[A-Za-z0-9][A-Za-z0-9_-]*$/;
  var PIN_KEYS = ["id", "x", "y", "w", "h"];
  function b64urlEncode(text) {
    const bytes = new TextEncoder().encode(text);
    let bin = "";
    for (let i = 0; i < bytes.length; i++) bin += String.fromCharCode(bytes[i]);
    return btoa(bin).replace(/\+/g, "-").replace(/\//g, "_");
  }
  function b64urlDecode(payload) {
    let b64 = payload.replace(/-/g, "+").replace(/_/g, "/");
    while (b64.length % 4) b64 += "=";
    let bin;
    try {
      bin = atob(b64);
    } catch (e) {
      return null;
    }
    const bytes = new Uint8Array(bin.length);
    for (let i = 0; i < bin.length; i++) bytes[i] = bin.charCodeAt(i);
    try {
      return new TextDecoder("utf-8", { fatal: true }).decode(bytes);
    } catch (e) {
      return null;
    }
  }
  function pinProblem(pin) {
    for (const name of ["x", "y", "w", "h"]) {
      if (!Number.isInteger(pin[name])) return `pin ${pin.id}: ${name} must be an integer`;
    }
    if (typeof pin.id !== "string" || !SLUG.test(pin.id)) return `bad pin id ${pin.id}`;
    if (pin.x < 0 || pin.y < 0) return `pin ${pin.id}: position must be non-negative`;
    if (pin.w < 1 || pin.h < 1) return `pin ${pin.id}: size must be at least 1x1`;
    return null;
  }
  function encodeState(pins) {
    const sorted = [...pins].sort((a, b) => a.id < b.id ? -1 : a.id > b.id ? 1 : 0);
    const seen = /* @__PURE__ */ new Set();
    for (const pin of sorted) {
      const problem = pinProblem(pin);
      if (problem) throw new Error(problem);
      if (seen.has(pin.id)) throw new Error(`duplicate pin id ${pin.id}`);
      seen.add(pin.id);
    }
    const doc = {
      v: STATE_VERSION,
      pins: sorted.map((p) => ({ id: p.id, x: p.x, y: p.y, w: p.w, h: p.h }))
    };
    return "#cds=" + b64urlEncode(JSON.stringify(doc));
  }
  function decodeFragment(fragment) {
    const raw = fragment.startsWith("#") ? fragment.slice(1) : fragment;
    let payload = null;
    for (const part of raw.split("&")) {
      if (part.startsWith("cds=")) {
        payload = part.slice(4);
        break;
      }
    }
    if (payload === null) return null;
    const text = b64urlDecode(payload);
    if (text === null) return null;
    let doc;
    try {
      doc = JSON.parse(text);
    } catch (e) {
      return null;
    }
    if (typeof doc !== "object" || doc === null || Array.isArray(doc)) return null;
    const keys = Object.keys(doc);
    if (keys.length !== 2 || !("v" in doc) || !("pins" in doc)) return null;
    const body = doc;
    if (body.v !== STATE_VERSION || !Array.isArray(body.pins)) return null;
    const pins = [];
    const seen = /* @__PURE__ */ new Set();
    for (const entry of body.pins) {
      if (typeof entry !== "object" || entry === null || Array.isArray(entry)) return null;
      const entryKeys = Object.keys(entry);
      if (entryKeys.length !== PIN_KEYS.length || PIN_KEYS.some((k) => !(k in entry))) return null;
      const pin = entry;
      if (typeof pin.id !== "string" || pinProblem(pin) !== null) return null;
      if (seen.has(pin.id)) return null;
      seen.add(pin.id);
      pins.push({ id: pin.id, x: pin.x, y: pin.y, w: pin.w, h: pin.h });
    }
    return pins;
  }

  // src/telemetry.ts
  var FLUSH_MS = 500;
  var TelemetryClient = class {
    constructor(win, ids) {
      this.queue = [];
      this.flushTimer = null;
      this.win = win;
      this.ids = ids;
    }
    get enabled() {
      return Boolean(this.ids.url && this.ids.pid && this.ids.sid);
    }
    emit(type, detail) {
      if (!this.enabled) return;
      this.queue.push({
        t: (/* @__PURE__ */ new Date()).toISOString(),
        type,
        pid: this.ids.pid,
        sid: this.ids.sid,
        did: this.ids.did,
        detail
      });
      if (this.flushTimer === null) {
        this.flushTimer = setTimeout(() => {
          this.flushTimer = null;
          this.flush(false);
        }, FLUSH_MS);
      }
    }
    flush(unloading) {
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
          win.fetch(this.ids.url, {
            method: "POST",
            headers: { "Content-Type": "application/json" },
            body,
            keepalive: true
          }).catch(() => {
          });
        }
      } catch (e) {
      }
    }
    installUnloadFlush(doc) {
      this.win.addEventListener("pagehide", () => this.flush(true));
      this.win.addEventListener("visibilitychange", () => {
        if (doc.visibilityState === "hidden") this.flush(true);
      });
    }
    /* Visible for tests: the events waiting for the next flush. */
    get pending() {
      return this.queue;
    }
  };

  // src/viewer.ts
  var DWELL_MS = 1e3;
  var PIN_OFFSET = 24;
  var CASCADE = 16;
  var DEFAULT_W = 320;
  var DEFAULT_H = 200;
  function parseCookies(doc) {
    const out = {};
    let raw;
    try {
      raw = doc.cookie || "";
    } catch (e) {
      raw = "";
    }
    for (const part of raw.split(";")) {
      const eq = part.indexOf("=");
      if (eq > 0) out[part.slice(0, eq).trim()] = part.slice(eq + 1).trim();
    }
    return out;
  }
  var Viewer = class {
    constructor(doc) {
      this.annotations = {};
      this.anchorsByAnn = {};
      this.pinned = {};
      this.floating = [];
      this.history = new ActionHistory();
      this.walkthroughIds = [];
      this.wtCursor = null;
      this.wtDialog = null;
      this.pinCount = 0;
      this.doc = doc;
      this.win = doc.defaultView;
      const body = doc.body;
      this.did = body.getAttribute("data-cd-document-id") || "";
      const cookies = parseCookies(doc);
      this.telemetry = new TelemetryClient(this.win, {
        url: body.getAttribute("data-cd-telemetry-url") || null,
        pid: cookies.pid || null,
        sid: cookies.sid || null,
        did: this.did
      });
    }
    hydrate() {
      this.doc.querySelectorAll("#cd-annotations .cd-annotation").forEach((el) => {
        const id = el.getAttribute("data-id");
        if (!id) return;
        const stepAttr = el.getAttribute("data-step");
        this.annotations[id] = {
          el,
          title: el.getAttribute("data-title") || "",
          text: el.textContent || "",
          parentId: el.getAttribute("data-parent") || null,
          step: stepAttr === null ? null : parseInt(stepAttr, 10)
        };
      });
      this.walkthroughIds = Object.keys(this.annotations).filter((id) => this.annotations[id].step !== null).sort((a, b) => this.annotations[a].step - this.annotations[b].step);
      this.doc.querySelectorAll(".cd-code .cd-anchor, .cd-code .cd-marker-block").forEach((el) => this.attachMarker(el));
      this.initToolbar();
      this.applyFragment();
      this.telemetry.installUnloadFlush(this.doc);
    }
    emit(type, detail) {
      this.telemetry.emit(type, detail);
    }
    attachMarker(el) {
      const id = el.getAttribute("data-ann");
      if (!id) return;
      (this.anchorsByAnn[id] = this.anchorsByAnn[id] || []).push(el);
      el.addEventListener("mouseenter", () => this.openFloating(id, el));
      el.addEventListener("mouseleave", (ev) => this.maybeDismiss(ev));
      el.addEventListener("click", (ev) => {
        ev.preventDefault();
        this.emit("interact_marker", { marker: el.getAttribute("data-marker-id") || id + "@0" });
        this.togglePin(id, el);
      });
    }
    // --- floating chain --------------------------------------------------------
    openFloating(id, anchorEl) {
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
      const entry = {
        id,
        markerId: anchorEl.getAttribute("data-marker-id") || id + "@0",
        anchorEl,
        dialog,
        openedAt: Date.now(),
        markerEmitted: false,
        dwellTimer: null
      };
      entry.dwellTimer = setTimeout(() => {
        entry.markerEmitted = true;
        this.emit("interact_marker", { marker: entry.markerId });
      }, DWELL_MS);
      this.floating.push(entry);
    }
    findFloating(id) {
      for (const entry of this.floating) {
        if (entry.id === id) return entry;
      }
      return null;
    }
    chainLevelOf(el) {
      for (let i = 0; i < this.floating.length; i++) {
        if (this.floating[i].dialog.contains(el)) return i;
      }
      return -1;
    }
    closeFloatingFrom(level) {
      while (this.floating.length > level) {
        const entry = this.floating.pop();
        if (entry.dwellTimer !== null) clearTimeout(entry.dwellTimer);
        const duration = Date.now() - entry.openedAt;
        if (duration >= DWELL_MS) {
          this.emit("open_close_annotation", {
            annotation: entry.id,
            action: "hover",
            duration_ms: Math.round(duration)
          });
        }
        if (entry.dialog.parentNode) entry.dialog.parentNode.removeChild(entry.dialog);
      }
    }
    placeFloating(dialog, anchorEl) {
      const rect = anchorEl.getBoundingClientRect();
      dialog.style.left = Math.max(0, rect.left + (this.win.scrollX || 0)) + "px";
      dialog.style.top = Math.max(0, rect.bottom + 4 + (this.win.scrollY || 0)) + "px";
    }
    maybeDismiss(ev) {
      if (!this.floating.length) return;
      const x = ev.clientX;
      const y = ev.clientY;
      let keep = -1;
      for (let i = 0; i < this.floating.length; i++) {
        if (this.inRegion(this.floating[i], x, y)) keep = i;
      }
      const target = ev.relatedTarget;
      if (target) {
        for (let j = 0; j < this.floating.length; j++) {
          if (this.floating[j].dialog.contains(target) || this.floating[j].anchorEl.contains(target)) {
            keep = Math.max(keep, j);
          }
        }
      }
      this.closeFloatingFrom(keep + 1);
    }
    inRegion(entry, x, y) {
      const a = entry.anchorEl.getBoundingClientRect();
      const p = entry.dialog.getBoundingClientRect();
      return inKeepRegion(a, p, x, y);
    }
    // --- dialogs ---------------------------------------------------------------
    buildDialog(id, pinnedStyle, onClose) {
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
        close.textContent = "\xD7";
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
      body.querySelectorAll(".cd-anchor").forEach((el) => this.attachNestedAnchor(el));
      return dialog;
    }
    attachNestedAnchor(el) {
      const id = el.getAttribute("data-ann");
      if (!id) return;
      el.addEventListener("mouseenter", () => this.openFloating(id, el));
      el.addEventListener("mouseleave", (ev) => this.maybeDismiss(ev));
      el.addEventListener("click", (ev) => {
        ev.preventDefault();
        ev.stopPropagation();
        this.emit("interact_marker", { marker: el.getAttribute("data-marker-id") || id + "@0" });
        this.togglePin(id, el);
      });
    }
    breadcrumbTrail(id) {
      const trail = [];
      let cur = this.annotations[id] ? this.annotations[id].parentId : null;
      let guard = 0;
      while (cur && this.annotations[cur] && guard++ < 32) {
        trail.unshift(cur);
        cur = this.annotations[cur].parentId;
      }
      return trail;
    }
    buildBreadcrumbs(trail) {
      const nav = this.doc.createElement("nav");
      nav.className = "cd-breadcrumbs";
      trail.forEach((ancestorId, i) => {
        if (i) nav.appendChild(this.doc.createTextNode(" \u203A "));
        const btn = this.doc.createElement("button");
        btn.setAttribute("type", "button");
        const ann = this.annotations[ancestorId];
        btn.textContent = ann && ann.title ? ann.title : ancestorId;
        btn.addEventListener("click", () => {
          this.emit("navigation_widget", { widget: "breadcrumb", result: ancestorId });
          if (!this.pinned[ancestorId]) {
            this.pin(ancestorId, null, true, true);
            this.emit("open_close_annotation", { annotation: ancestorId, action: "open" });
          }
        });
        nav.appendChild(btn);
      });
      return nav;
    }
    // --- pinning ---------------------------------------------------------------
    codeOrigin() {
      const pre = this.doc.querySelector(".cd-code");
      if (!pre) return { x: 0, y: 0 };
      const rect = pre.getBoundingClientRect();
      return { x: rect.left + (this.win.scrollX || 0), y: rect.top + (this.win.scrollY || 0) };
    }
    togglePin(id, anchorEl) {
      if (this.pinned[id]) {
        this.unpin(id, true);
      } else {
        const open = this.findFloating(id);
        const level = open ? this.floating.indexOf(open) : -1;
        if (level !== -1) this.closeFloatingFrom(level);
        this.pin(id, this.defaultPlacement(anchorEl), true);
      }
    }
    defaultPlacement(anchorEl) {
      const origin = this.codeOrigin();
      const cascade = this.pinCount % 8 * CASCADE;
      let x = PIN_OFFSET + cascade;
      let y = PIN_OFFSET + cascade;
      if (anchorEl && anchorEl.getBoundingClientRect) {
        const rect = anchorEl.getBoundingClientRect();
        x = Math.max(0, Math.round(rect.right + (this.win.scrollX || 0) - origin.x) + PIN_OFFSET + cascade);
        y = Math.max(0, Math.round(rect.bottom + (this.win.scrollY || 0) - origin.y) + PIN_OFFSET + cascade);
      }
      return { x, y, w: DEFAULT_W, h: DEFAULT_H };
    }
    pin(id, placement, recordAction, silent) {
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
    unpin(id, recordAction, silent) {
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
    setAnchorPinned(id, on) {
      for (const el of this.anchorsByAnn[id] || []) {
        if (on) el.classList.add("cd-pinned-anchor");
        else el.classList.remove("cd-pinned-anchor");
      }
    }
    applyPlacement(dialog, placement) {
      const origin = this.codeOrigin();
      dialog.style.left = origin.x + placement.x + "px";
      dialog.style.top = origin.y + placement.y + "px";
      dialog.style.width = placement.w + "px";
      dialog.style.height = placement.h + "px";
    }
    clampPlacement(p) {
      return clampPlacement(p, this.win.innerWidth || 1024, this.win.innerHeight || 768);
    }
    moveResize(id, placement) {
      const entry = this.pinned[id];
      if (!entry) return;
      const next = this.clampPlacement({
        x: placement.x !== void 0 ? placement.x : entry.placement.x,
        y: placement.y !== void 0 ? placement.y : entry.placement.y,
        w: placement.w !== void 0 ? placement.w : entry.placement.w,
        h: placement.h !== void 0 ? placement.h : entry.placement.h
      });
      entry.placement = next;
      this.applyPlacement(entry.dialog, next);
    }
    makeDraggable(handle, id) {
      handle.addEventListener("pointerdown", (down) => {
        const downTarget = down.target;
        if (downTarget && downTarget.tagName === "BUTTON") return;
        const entry = this.pinned[id];
        if (!entry) return;
        const startX = down.clientX;
        const startY = down.clientY;
        const base = { x: entry.placement.x, y: entry.placement.y };
        const onMove = (move) => {
          this.moveResize(id, {
            x: base.x + (move.clientX - startX),
            y: base.y + (move.clientY - startY)
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
    pushAction(action) {
      this.history.record(action);
      this.updateHistoryButtons();
    }
    undo() {
      const action = this.history.undo();
      if (!action) return;
      if (action.kind === "pin") this.unpin(action.id, false, true);
      else this.pin(action.id, action.placement, false, true);
      this.emit("navigation_widget", { widget: "undo", result: action.kind + ":" + action.id });
      this.updateHistoryButtons();
    }
    redo() {
      const action = this.history.redo();
      if (!action) return;
      if (action.kind === "pin") this.pin(action.id, action.placement, false, true);
      else this.unpin(action.id, false, true);
      this.emit("navigation_widget", { widget: "redo", result: action.kind + ":" + action.id });
      this.updateHistoryButtons();
    }
    updateHistoryButtons() {
      const u = this.doc.getElementById("cd-undo");
      const r = this.doc.getElementById("cd-redo");
      if (u) u.disabled = !this.history.canUndo;
      if (r) r.disabled = !this.history.canRedo;
    }
    // --- search ----------------------------------------------------------------
    search(query) {
      const corpus = Object.keys(this.annotations).map((id) => ({
        id,
        title: this.annotations[id].title,
        text: this.annotations[id].text
      }));
      return searchAnnotations(corpus, query);
    }
    initSearch() {
      const input = this.doc.getElementById("cd-search");
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
          btn.addEventListener("mouseleave", (ev) => this.maybeDismiss(ev));
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
        const target = ev.target;
        const inside = target && results.contains(target) || ev.target === input;
        if (!inside) {
          results.hidden = true;
        }
      });
    }
    previewAnnotation(id, nearEl) {
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
        markerEmitted: true,
        // search previews are not marker interactions
        dwellTimer: null
      });
    }
    // --- walkthrough -----------------------------------------------------------
    initWalkthrough() {
      const button = this.doc.getElementById("cd-walkthrough");
      const bar = this.doc.getElementById("cd-walkthrough-bar");
      if (!button || !bar) return;
      button.addEventListener("click", () => {
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
    walkthroughGo(index) {
      if (index < 0 || index >= this.walkthroughIds.length) return;
      this.walkthroughClearDialog();
      this.wtCursor = index;
      const id = this.walkthroughIds[index];
      const dialog = this.buildDialog(id, true, () => this.walkthroughStop());
      dialog.classList.add("cd-wt-dialog");
      this.doc.body.appendChild(dialog);
      this.applyPlacement(
        dialog,
        this.clampPlacement(this.defaultPlacement((this.anchorsByAnn[id] || [])[0] || null))
      );
      this.wtDialog = { id, dialog };
      this.markCurrent(id, true);
      this.walkthroughStatus();
      this.emit("open_close_annotation", { annotation: id, action: "open" });
    }
    walkthroughClearDialog() {
      if (this.wtDialog) {
        if (this.wtDialog.dialog.parentNode) {
          this.wtDialog.dialog.parentNode.removeChild(this.wtDialog.dialog);
        }
        this.markCurrent(this.wtDialog.id, false);
        this.emit("open_close_annotation", { annotation: this.wtDialog.id, action: "close" });
        this.wtDialog = null;
      }
    }
    walkthroughStatus() {
      const status = this.doc.getElementById("cd-wt-status");
      if (!status) return;
      const n = this.walkthroughIds.length;
      if (this.wtCursor === null || this.wtCursor < 0) {
        status.textContent = n === 1 ? "1 step" : n + " steps";
      } else {
        status.textContent = "Step " + (this.wtCursor + 1) + " of " + n;
      }
    }
    markCurrent(id, on) {
      for (const el of this.anchorsByAnn[id] || []) {
        if (on) el.classList.add("cd-wt-current");
        else el.classList.remove("cd-wt-current");
      }
    }
    walkthroughNext() {
      if (this.wtCursor === null) return;
      this.emit("navigation_widget", { widget: "walkthrough", result: "next" });
      if (this.wtCursor + 1 >= this.walkthroughIds.length) {
        this.walkthroughStop();
        return;
      }
      this.walkthroughGo(this.wtCursor + 1);
    }
    walkthroughPrev() {
      if (this.wtCursor === null) return;
      this.emit("navigation_widget", { widget: "walkthrough", result: "prev" });
      if (this.wtCursor <= 0) return;
      this.walkthroughGo(this.wtCursor - 1);
    }
    walkthroughStop() {
      this.walkthroughClearDialog();
      this.wtCursor = null;
      const bar = this.doc.getElementById("cd-walkthrough-bar");
      if (bar) bar.hidden = true;
    }
    // --- save state ------------------------------------------------------------
    saveState() {
      const ids = Object.keys(this.pinned).sort();
      const pins = ids.map((id) => {
        const p = this.pinned[id].placement;
        return { id, x: Math.round(p.x), y: Math.round(p.y), w: Math.round(p.w), h: Math.round(p.h) };
      });
      const fragment = encodeState(pins);
      const url = this.win.location.href.split("#")[0] + fragment;
      try {
        this.win.history.replaceState(null, "", fragment);
      } catch (e) {
      }
      try {
        const clipboard = this.win.navigator.clipboard;
        if (clipboard) clipboard.writeText(url).catch(() => {
        });
      } catch (e) {
      }
      this.emit("navigation_widget", { widget: "save-state", result: String(pins.length) });
      return url;
    }
    applyFragment() {
      const pins = decodeFragment(this.win.location.hash || "");
      if (pins === null) return;
      for (const pin of pins) {
        if (!this.annotations[pin.id]) continue;
        if (!this.pinned[pin.id]) {
          this.pin(pin.id, { x: pin.x, y: pin.y, w: pin.w, h: pin.h }, false, true);
        }
      }
    }
    // --- toolbar ---------------------------------------------------------------
    initToolbar() {
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
          } catch (e) {
          }
        });
      }
    }
  };

  // src/main.ts
  function boot(doc = document) {
    const win = doc.defaultView;
    if (win.__cdViewer) return win.__cdViewer;
    const viewer = new Viewer(doc);
    viewer.hydrate();
    win.__cdViewer = viewer;
    return viewer;
  }
  if (document.readyState === "loading") {
    document.addEventListener("DOMContentLoaded", () => boot());
  } else {
    boot();
  }
  window.CasdocViewer = { boot, Viewer };
})();
