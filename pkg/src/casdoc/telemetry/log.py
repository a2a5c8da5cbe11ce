"""Append-only newline-delimited event log.

Appends are serialized under a lock so each accepted batch occupies
contiguous lines, in arrival order. Reading back tolerates corrupt lines
(they are reported, not fatal) so one bad write cannot poison an analysis.
"""

from __future__ import annotations

import json
import threading
from pathlib import Path

from ..errors import Diagnostic, IngestError
from .events import CLIENT_TYPES, InteractionEvent, event_to_json, parse_event


class EventLog:
    def __init__(self, path: str | Path):
        self.path = Path(path)
        self._lock = threading.Lock()
        self._fh = open(self.path, "a", encoding="utf-8")

    def append(self, events: list[InteractionEvent]) -> None:
        """Append already-validated events (any origin) as one contiguous block."""
        if not events:
            return
        block = "".join(event_to_json(e) + "\n" for e in events)
        with self._lock:
            self._fh.write(block)
            self._fh.flush()

    def ingest_batch(self, payload) -> int:
        """Validate and store one client batch; all events or none.

        `payload` is a JSON array (or already-decoded list) of wire events.
        Only client-origin event types are accepted here; server-origin
        events are written by the site itself, never over the wire.
        Returns the number of events appended.
        """
        if isinstance(payload, (str, bytes)):
            try:
                payload = json.loads(payload)
            except json.JSONDecodeError as exc:
                raise IngestError(f"batch is not valid JSON: {exc.msg}") from None
        if not isinstance(payload, list):
            raise IngestError("batch must be a JSON array")
        events = []
        for i, obj in enumerate(payload):
            try:
                event = parse_event(obj)
            except IngestError as exc:
                raise IngestError(f"event {i}: {exc}") from None
            if event.type not in CLIENT_TYPES:
                raise IngestError(f"event {i}: server-origin type {event.type!r} not accepted over the wire")
            events.append(event)
        self.append(events)
        return len(events)

    def close(self) -> None:
        with self._lock:
            self._fh.close()

    def __enter__(self) -> "EventLog":
        return self

    def __exit__(self, *exc) -> None:
        self.close()


def read_log(path: str | Path) -> tuple[list[InteractionEvent], list[Diagnostic]]:
    """Load every parseable event from a log file, in file order."""
    events: list[InteractionEvent] = []
    diagnostics: list[Diagnostic] = []
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                events.append(parse_event(json.loads(line)))
            except (json.JSONDecodeError, IngestError) as exc:
                diagnostics.append(
                    Diagnostic("warning", "corrupt-event", f"line skipped: {exc}", line=lineno)
                )
    return events, diagnostics
