/* Bundle entry point: boot the viewer once the document is ready. */

import { Viewer } from "./viewer";

interface ViewerWindow extends Window {
  __cdViewer?: Viewer;
  CasdocViewer?: { boot: typeof boot; Viewer: typeof Viewer };
}

export function boot(doc: Document = document): Viewer {
  const win = doc.defaultView as ViewerWindow;
  if (win.__cdViewer) return win.__cdViewer; // hydrate is idempotent
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

(window as ViewerWindow).CasdocViewer = { boot, Viewer };
