/* Saved reading state, carried in the URL fragment after "#cds=".
 *
 * The payload is URL-safe base64 of a compact JSON document:
 *
 *     {"v":1,"pins":[{"id":"byte-array","x":120,"y":80,"w":320,"h":180},...]}
 *
 * Pins sort by id and keys keep a fixed order, so equal states produce
 * byte-identical fragments. The converter ships a matching codec on the
 * service side; the two must keep agreeing byte for byte, which is why the
 * validation here is exactly as picky as the other end.
 */

import type { Placement } from "./geometry";

export interface Pin extends Placement {
  id: string;
}

export const STATE_VERSION = 1;

const SLUG = /^[A-Za-z0-9][A-Za-z0-9_-]*$/;
const PIN_KEYS = ["id", "x", "y", "w", "h"];

function b64urlEncode(text: string): string {
  const bytes = new TextEncoder().encode(text);
  let bin = "";
  for (let i = 0; i < bytes.length; i++) bin += String.fromCharCode(bytes[i]);
  return btoa(bin).replace(/\+/g, "-").replace(/\//g, "_");
}

function b64urlDecode(payload: string): string | null {
  let b64 = payload.replace(/-/g, "+").replace(/_/g, "/");
  while (b64.length % 4) b64 += "=";
  let bin: string;
  try {
    bin = atob(b64);
  } catch {
    return null;
  }
  const bytes = new Uint8Array(bin.length);
  for (let i = 0; i < bin.length; i++) bytes[i] = bin.charCodeAt(i);
  try {
    return new TextDecoder("utf-8", { fatal: true }).decode(bytes);
  } catch {
    return null;
  }
}

function pinProblem(pin: Pin): string | null {
  for (const name of ["x", "y", "w", "h"] as const) {
    if (!Number.isInteger(pin[name])) return `pin ${pin.id}: ${name} must be an integer`;
  }
  if (typeof pin.id !== "string" || !SLUG.test(pin.id)) return `bad pin id ${pin.id}`;
  if (pin.x < 0 || pin.y < 0) return `pin ${pin.id}: position must be non-negative`;
  if (pin.w < 1 || pin.h < 1) return `pin ${pin.id}: size must be at least 1x1`;
  return null;
}

/** Encode to a "#cds=..." fragment. Throws on input the codec cannot carry. */
export function encodeState(pins: Pin[]): string {
  const sorted = [...pins].sort((a, b) => (a.id < b.id ? -1 : a.id > b.id ? 1 : 0));
  const seen = new Set<string>();
  for (const pin of sorted) {
    const problem = pinProblem(pin);
    if (problem) throw new Error(problem);
    if (seen.has(pin.id)) throw new Error(`duplicate pin id ${pin.id}`);
    seen.add(pin.id);
  }
  const doc = {
    v: STATE_VERSION,
    pins: sorted.map((p) => ({ id: p.id, x: p.x, y: p.y, w: p.w, h: p.h })),
  };
  return "#cds=" + b64urlEncode(JSON.stringify(doc));
}

/* Decode the cds= parameter of a fragment. Anything malformed yields null:
 * a viewer opening a shared link must come up clean rather than surface an
 * error for a mangled URL.
 */
export function decodeFragment(fragment: string): Pin[] | null {
  const raw = fragment.startsWith("#") ? fragment.slice(1) : fragment;
  let payload: string | null = null;
  for (const part of raw.split("&")) {
    if (part.startsWith("cds=")) {
      payload = part.slice(4);
      break;
    }
  }
  if (payload === null) return null;
  const text = b64urlDecode(payload);
  if (text === null) return null;
  let doc: unknown;
  try {
    doc = JSON.parse(text);
  } catch {
    return null;
  }
  if (typeof doc !== "object" || doc === null || Array.isArray(doc)) return null;
  const keys = Object.keys(doc as object);
  if (keys.length !== 2 || !("v" in doc) || !("pins" in doc)) return null;
  const body = doc as { v: unknown; pins: unknown };
  if (body.v !== STATE_VERSION || !Array.isArray(body.pins)) return null;

  const pins: Pin[] = [];
  const seen = new Set<string>();
  for (const entry of body.pins) {
    if (typeof entry !== "object" || entry === null || Array.isArray(entry)) return null;
    const entryKeys = Object.keys(entry);
    if (entryKeys.length !== PIN_KEYS.length || PIN_KEYS.some((k) => !(k in entry))) return null;
    const pin = entry as Pin;
    if (typeof pin.id !== "string" || pinProblem(pin) !== null) return null;
    if (seen.has(pin.id)) return null;
    seen.add(pin.id);
    pins.push({ id: pin.id, x: pin.x, y: pin.y, w: pin.w, h: pin.h });
  }
  return pins;
}
