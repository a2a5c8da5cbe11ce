/* Placement math for dialogs and the floating-panel dismissal region. */

export interface Placement {
  x: number;
  y: number;
  w: number;
  h: number;
}

/** The subset of DOMRect the dismissal test needs. */
export interface Box {
  left: number;
  top: number;
  right: number;
  bottom: number;
}

export const MIN_W = 80;
export const MIN_H = 40;
export const HANDLE_PX = 16;
export const CORRIDOR_PX = 12;

/** Keep at least a grab handle on screen and never shrink below minimum. */
export function clampPlacement(p: Placement, viewportW: number, viewportH: number): Placement {
  const maxX = Math.max(0, viewportW - HANDLE_PX);
  const maxY = Math.max(0, viewportH - HANDLE_PX);
  return {
    x: Math.min(Math.max(0, Math.round(p.x)), maxX),
    y: Math.min(Math.max(0, Math.round(p.y)), maxY),
    w: Math.max(MIN_W, Math.round(p.w)),
    h: Math.max(MIN_H, Math.round(p.h)),
  };
}

function inBox(b: Box, x: number, y: number, pad: number): boolean {
  return x >= b.left - pad && x <= b.right + pad && y >= b.top - pad && y <= b.bottom + pad;
}

/* A floating panel stays open while the pointer is over its anchor, the
 * panel itself, or the corridor spanning the gap between the two. Without
 * the corridor, crossing from anchor to panel over the empty strip between
 * them would dismiss the panel mid-journey.
 */
export function inKeepRegion(anchor: Box, panel: Box, x: number, y: number): boolean {
  if (inBox(anchor, x, y, CORRIDOR_PX) || inBox(panel, x, y, CORRIDOR_PX)) return true;
  const corridor: Box = {
    left: Math.min(anchor.left, panel.left) - CORRIDOR_PX,
    right: Math.max(anchor.right, panel.right) + CORRIDOR_PX,
    top: Math.min(anchor.bottom, panel.bottom),
    bottom: Math.max(anchor.top, panel.top),
  };
  return x >= corridor.left && x <= corridor.right && y >= corridor.top && y <= corridor.bottom;
}
