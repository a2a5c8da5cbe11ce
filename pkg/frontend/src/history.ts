/* Undo and redo over pin actions.
 *
 * Only pinning is recorded. Hover reveals are transient by design: undoing
 * one would fight the pointer, and nobody asks for a hover back.
 */

import type { Placement } from "./geometry";

export interface PinAction {
  kind: "pin" | "unpin";
  id: string;
  placement: Placement;
}

export const HISTORY_DEPTH = 50;

export class ActionHistory {
  private past: PinAction[] = [];
  private future: PinAction[] = [];

  record(action: PinAction): void {
    this.past.push(action);
    if (this.past.length > HISTORY_DEPTH) this.past.shift();
    this.future = [];
  }

  undo(): PinAction | null {
    const action = this.past.pop();
    if (!action) return null;
    this.future.push(action);
    return action;
  }

  redo(): PinAction | null {
    const action = this.future.pop();
    if (!action) return null;
    this.past.push(action);
    return action;
  }

  get canUndo(): boolean {
    return this.past.length > 0;
  }

  get canRedo(): boolean {
    return this.future.length > 0;
  }
}
