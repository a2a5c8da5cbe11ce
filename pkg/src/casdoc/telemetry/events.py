"""Wire format of interaction events.

Every event carries a millisecond UTC timestamp, a type, the ids the type
requires (participant, session, document) and a type-specific detail payload.
The requirements are deliberately strict: an event that carries an id its
type does not use, or omits one it needs, is rejected as a whole.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from datetime import datetime, timezone

from ..errors import IngestError

_SLUG_RE = re.compile(r"[A-Za-z0-9][A-Za-z0-9_-]*\Z")
_MARKER_RE = re.compile(r"[A-Za-z0-9][A-Za-z0-9_-]*@\d+\Z")
_PID_RE = re.compile(r"(0|[1-9][0-9]*)\Z")

FORMATS = ("casdoc", "baseline")
ANNOTATION_ACTIONS = ("hover", "pin", "unpin", "open", "close")
RESULT_ACTIONS = ("hovered", "selected")
WIDGETS = ("walkthrough", "breadcrumb", "undo", "redo", "save-state")


@dataclass(frozen=True)
class InteractionEvent:
    t: datetime
    type: str
    pid: str | None = None
    sid: str | None = None
    did: str | None = None
    detail: dict = field(default_factory=dict)


def _no_detail(detail: dict) -> str | None:
    if detail:
        return "no detail allowed"
    return None


def _format_detail(detail: dict) -> str | None:
    if set(detail) != {"format"}:
        return "detail must be exactly {format}"
    if detail["format"] not in FORMATS:
        return f"unknown format {detail['format']!r}"
    return None


def _annotation_detail(detail: dict) -> str | None:
    keys = set(detail)
    if not {"annotation", "action"} <= keys:
        return "detail must carry annotation and action"
    if keys - {"annotation", "action", "duration_ms"}:
        return "unexpected detail keys"
    ann, action = detail["annotation"], detail["action"]
    if not isinstance(ann, str) or not _SLUG_RE.match(ann):
        return f"bad annotation id {ann!r}"
    if action not in ANNOTATION_ACTIONS:
        return f"unknown action {action!r}"
    has_duration = "duration_ms" in detail
    if action == "hover":
        if not has_duration:
            return "hover requires duration_ms"
        d = detail["duration_ms"]
        if not isinstance(d, int) or isinstance(d, bool) or d < 0:
            return "duration_ms must be a non-negative integer"
    elif has_duration:
        return f"duration_ms not allowed for action {action!r}"
    return None


def _marker_detail(detail: dict) -> str | None:
    if set(detail) != {"marker"}:
        return "detail must be exactly {marker}"
    m = detail["marker"]
    if not isinstance(m, str) or not _MARKER_RE.match(m):
        return f"bad marker id {m!r}"
    return None


def _search_detail(detail: dict) -> str | None:
    if set(detail) != {"query", "results"}:
        return "detail must be exactly {query, results}"
    if not isinstance(detail["query"], str) or not detail["query"]:
        return "query must be a non-empty string"
    results = detail["results"]
    if not isinstance(results, list):
        return "results must be a list"
    for r in results:
        if not isinstance(r, dict) or set(r) != {"id", "action"}:
            return "each result must be exactly {id, action}"
        if not isinstance(r["id"], str) or not _SLUG_RE.match(r["id"]):
            return f"bad result id {r['id']!r}"
        if r["action"] not in RESULT_ACTIONS:
            return f"unknown result action {r['action']!r}"
    return None


def _widget_detail(detail: dict) -> str | None:
    if set(detail) != {"widget", "result"}:
        return "detail must be exactly {widget, result}"
    if detail["widget"] not in WIDGETS:
        return f"unknown widget {detail['widget']!r}"
    if not isinstance(detail["result"], str):
        return "result must be a string"
    return None


# type -> (origin, required ids, detail check)
EVENT_TYPES = {
    "visit_page": ("server", frozenset("d"), _no_detail),
    "consent": ("server", frozenset("ps"), _no_detail),
    "withdraw": ("server", frozenset("p"), _no_detail),
    "session_start": ("server", frozenset("ps"), _no_detail),
    "open_example": ("server", frozenset("psd"), _format_detail),
    "change_format": ("server", frozenset("psd"), _format_detail),
    "open_close_annotation": ("client", frozenset("psd"), _annotation_detail),
    "interact_marker": ("client", frozenset("psd"), _marker_detail),
    "search": ("client", frozenset("psd"), _search_detail),
    "navigation_widget": ("client", frozenset("psd"), _widget_detail),
}

EVENT_ORIGIN = {name: origin for name, (origin, _, _) in EVENT_TYPES.items()}
CLIENT_TYPES = frozenset(n for n, o in EVENT_ORIGIN.items() if o == "client")
SERVER_TYPES = frozenset(n for n, o in EVENT_ORIGIN.items() if o == "server")

_ALLOWED_KEYS = {"t", "type", "pid", "sid", "did", "detail"}


def _parse_timestamp(raw) -> datetime:
    if not isinstance(raw, str):
        raise IngestError("t must be a string timestamp")
    text = raw[:-1] + "+00:00" if raw.endswith("Z") else raw
    try:
        t = datetime.fromisoformat(text)
    except ValueError:
        raise IngestError(f"unparseable timestamp {raw!r}") from None
    if t.tzinfo is None:
        raise IngestError(f"timestamp {raw!r} has no UTC offset")
    return t.astimezone(timezone.utc)


def parse_event(obj) -> InteractionEvent:
    """Validate one wire-format event object.

    Raises IngestError with a reason on any violation; never returns a
    partially valid event.
    """
    if not isinstance(obj, dict):
        raise IngestError("event must be a JSON object")
    unknown = set(obj) - _ALLOWED_KEYS
    if unknown:
        raise IngestError(f"unknown event keys: {', '.join(sorted(unknown))}")
    if "type" not in obj or "t" not in obj:
        raise IngestError("event needs t and type")
    etype = obj["type"]
    if etype not in EVENT_TYPES:
        raise IngestError(f"unknown event type {etype!r}")
    _, required, check_detail = EVENT_TYPES[etype]

    t = _parse_timestamp(obj["t"])

    ids: dict[str, str | None] = {}
    for key, letter in (("pid", "p"), ("sid", "s"), ("did", "d")):
        value = obj.get(key)
        if letter in required:
            if value is None:
                raise IngestError(f"{etype} requires {key}")
        elif value is not None:
            raise IngestError(f"{etype} does not carry {key}")
        ids[key] = value

    pid = ids["pid"]
    if pid is not None:
        if not isinstance(pid, str) or not _PID_RE.match(pid) or int(pid) >= 2**64:
            raise IngestError(f"pid must be a decimal 64-bit integer, got {pid!r}")
    sid = ids["sid"]
    if sid is not None and (not isinstance(sid, str) or not sid or len(sid) > 128):
        raise IngestError(f"bad sid {sid!r}")
    did = ids["did"]
    if did is not None and (not isinstance(did, str) or not _SLUG_RE.match(did)):
        raise IngestError(f"bad did {did!r}")

    detail = obj.get("detail") or {}
    if not isinstance(detail, dict):
        raise IngestError("detail must be an object")
    problem = check_detail(detail)
    if problem:
        raise IngestError(f"{etype}: {problem}")

    return InteractionEvent(t=t, type=etype, pid=pid, sid=sid, did=did, detail=detail)


def format_timestamp(t: datetime) -> str:
    t = t.astimezone(timezone.utc)
    return t.strftime("%Y-%m-%dT%H:%M:%S.") + f"{t.microsecond // 1000:03d}Z"


def event_to_json(event: InteractionEvent) -> str:
    """One-line JSON form, as stored in the event log."""
    import json

    doc: dict = {"t": format_timestamp(event.t), "type": event.type}
    for key in ("pid", "sid", "did"):
        value = getattr(event, key)
        if value is not None:
            doc[key] = value
    if event.detail:
        doc["detail"] = event.detail
    return json.dumps(doc, separators=(",", ":"), sort_keys=False)
