"""Saved reading state, carried in the URL fragment.

A reader who pins annotations can capture the arrangement as a link. The
state rides after ``#cds=`` as URL-safe base64 of a compact JSON document:

    {"v":1,"pins":[{"id":"byte-array","x":120,"y":80,"w":320,"h":180},...]}

Pins are sorted by id and keys are emitted in a fixed order, so equal states
always produce byte-identical fragments. Coordinates are CSS pixels relative
to the main content area; width and height are the pinned dialog's size.
"""

from __future__ import annotations

import base64
import binascii
import json
from dataclasses import dataclass

from .errors import StateDecodeError
from .parser import SLUG_RE

STATE_VERSION = 1
_PIN_KEYS = ("id", "x", "y", "w", "h")


@dataclass(frozen=True)
class Pin:
    id: str
    x: int
    y: int
    w: int
    h: int


@dataclass(frozen=True)
class SavedState:
    version: int = STATE_VERSION
    pins: tuple[Pin, ...] = ()

    def __post_init__(self):
        # normalize order so encode/decode round-trips preserve equality
        object.__setattr__(self, "pins", tuple(sorted(self.pins, key=lambda p: p.id)))


def _check_pin(pin: Pin) -> str | None:
    for name in ("x", "y", "w", "h"):
        v = getattr(pin, name)
        if not isinstance(v, int) or isinstance(v, bool):
            return f"pin {pin.id!r}: {name} must be an integer"
    if not isinstance(pin.id, str) or not SLUG_RE.match(pin.id):
        return f"pin id {pin.id!r} is not a valid annotation id"
    if pin.x < 0 or pin.y < 0:
        return f"pin {pin.id!r}: position must be non-negative"
    if pin.w < 1 or pin.h < 1:
        return f"pin {pin.id!r}: size must be at least 1x1"
    return None


def encode_state(state: SavedState) -> str:
    """Encode to a ``#cds=...`` fragment. Invalid states raise ValueError."""
    if state.version != STATE_VERSION:
        raise ValueError(f"cannot encode state version {state.version}")
    seen: set[str] = set()
    for pin in state.pins:
        problem = _check_pin(pin)
        if problem:
            raise ValueError(problem)
        if pin.id in seen:
            raise ValueError(f"duplicate pin id {pin.id!r}")
        seen.add(pin.id)
    doc = {
        "v": state.version,
        "pins": [
            {"id": p.id, "x": p.x, "y": p.y, "w": p.w, "h": p.h} for p in state.pins
        ],
    }
    payload = json.dumps(doc, separators=(",", ":"), ensure_ascii=False)
    encoded = base64.urlsafe_b64encode(payload.encode("utf-8")).decode("ascii")
    return f"#cds={encoded}"


def decode_state(fragment: str) -> SavedState:
    """Decode a fragment (with or without ``#``); other params may surround it."""
    raw = fragment[1:] if fragment.startswith("#") else fragment
    payload = None
    for part in raw.split("&"):
        if part.startswith("cds="):
            payload = part[4:]
            break
    if payload is None:
        raise StateDecodeError("fragment carries no cds= parameter")
    padded = payload + "=" * (-len(payload) % 4)
    try:
        decoded = base64.urlsafe_b64decode(padded.encode("ascii"))
    except (binascii.Error, UnicodeEncodeError) as exc:
        raise StateDecodeError(f"state payload is not valid base64: {exc}") from exc
    try:
        doc = json.loads(decoded.decode("utf-8"))
    except (UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise StateDecodeError(f"state payload is not valid JSON: {exc}") from exc

    if not isinstance(doc, dict) or set(doc) != {"v", "pins"}:
        raise StateDecodeError("state must be an object with exactly v and pins")
    if doc["v"] != STATE_VERSION:
        raise StateDecodeError(f"unsupported state version {doc['v']!r}")
    if not isinstance(doc["pins"], list):
        raise StateDecodeError("pins must be an array")

    pins: list[Pin] = []
    seen: set[str] = set()
    for i, entry in enumerate(doc["pins"]):
        if not isinstance(entry, dict) or set(entry) != set(_PIN_KEYS):
            raise StateDecodeError(f"pin {i} must have exactly the keys {', '.join(_PIN_KEYS)}")
        if not isinstance(entry["id"], str):
            raise StateDecodeError(f"pin {i} id must be a string")
        pin = Pin(entry["id"], entry["x"], entry["y"], entry["w"], entry["h"])
        problem = _check_pin(pin)
        if problem:
            raise StateDecodeError(problem)
        if pin.id in seen:
            raise StateDecodeError(f"duplicate pin id {pin.id!r}")
        seen.add(pin.id)
        pins.append(pin)
    return SavedState(version=STATE_VERSION, pins=tuple(pins))
