import json
from datetime import datetime, timezone

import pytest

from casdoc.errors import IngestError
from casdoc.telemetry import (
    CLIENT_TYPES,
    EVENT_ORIGIN,
    EVENT_TYPES,
    event_to_json,
    parse_event,
)

T = "2026-03-05T10:00:00.000Z"


def ev(**over):
    base = {
        "t": T,
        "type": "interact_marker",
        "pid": "42",
        "sid": "s-1",
        "did": "doc",
        "detail": {"marker": "a1-1@0"},
    }
    base.update(over)
    return {k: v for k, v in base.items() if v is not None}


def test_registry_covers_table():
    assert set(EVENT_TYPES) == {
        "visit_page",
        "consent",
        "withdraw",
        "session_start",
        "open_example",
        "change_format",
        "open_close_annotation",
        "interact_marker",
        "search",
        "navigation_widget",
    }
    assert CLIENT_TYPES == {
        "open_close_annotation",
        "interact_marker",
        "search",
        "navigation_widget",
    }
    assert EVENT_ORIGIN["visit_page"] == "server"


def test_parse_full_client_event():
    event = parse_event(ev())
    assert event.pid == "42"
    assert event.t == datetime(2026, 3, 5, 10, tzinfo=timezone.utc)
    assert event.detail == {"marker": "a1-1@0"}


def test_timestamp_offset_normalized_to_utc():
    event = parse_event(ev(t="2026-03-05T12:30:00.000+02:30"))
    assert event.t == datetime(2026, 3, 5, 10, tzinfo=timezone.utc)


@pytest.mark.parametrize(
    "broken",
    [
        ev(t="2026-03-05T10:00:00.000"),  # naive
        ev(t="yesterday"),
        ev(t=1234),
        ev(type="hover"),
        ev(type=None, detail=None),
        ev(extra="x"),
        "not an object",
    ],
)
def test_envelope_rejections(broken):
    with pytest.raises(IngestError):
        parse_event(broken)


@pytest.mark.parametrize(
    "field, value",
    [
        ("pid", "007"),  # leading zero
        ("pid", "-3"),
        ("pid", "18446744073709551616"),  # 2**64
        ("pid", 42),
        ("sid", ""),
        ("sid", "x" * 200),
        ("did", "no spaces"),
        ("did", "-lead"),
    ],
)
def test_id_value_rejections(field, value):
    with pytest.raises(IngestError):
        parse_event(ev(**{field: value}))


def test_pid_boundary_accepted():
    event = parse_event(ev(pid=str(2**64 - 1)))
    assert event.pid == "18446744073709551615"


@pytest.mark.parametrize(
    "etype, ids",
    [
        ("visit_page", {"did": "doc"}),
        ("consent", {"pid": "1", "sid": "s"}),
        ("withdraw", {"pid": "1"}),
        ("session_start", {"pid": "1", "sid": "s"}),
    ],
)
def test_server_events_take_exactly_their_ids(etype, ids):
    obj = {"t": T, "type": etype, **ids}
    event = parse_event(obj)
    assert event.type == etype
    # any extra id is rejected
    extra = dict(obj)
    spare = {"pid": "9", "sid": "s9", "did": "doc9"}
    for key in spare:
        if key not in ids:
            extra[key] = spare[key]
            break
    with pytest.raises(IngestError):
        parse_event(extra)


def test_missing_required_id_rejected():
    obj = ev()
    del obj["sid"]
    with pytest.raises(IngestError):
        parse_event(obj)


@pytest.mark.parametrize(
    "etype, detail, ok",
    [
        ("open_example", {"format": "casdoc"}, True),
        ("open_example", {"format": "pdf"}, False),
        ("open_example", {}, False),
        ("change_format", {"format": "baseline"}, True),
        ("change_format", {"format": "baseline", "x": 1}, False),
        ("open_close_annotation", {"annotation": "a1-1", "action": "pin"}, True),
        ("open_close_annotation", {"annotation": "a1-1", "action": "hover", "duration_ms": 1200}, True),
        ("open_close_annotation", {"annotation": "a1-1", "action": "hover"}, False),
        ("open_close_annotation", {"annotation": "a1-1", "action": "pin", "duration_ms": 5}, False),
        ("open_close_annotation", {"annotation": "a1-1", "action": "hover", "duration_ms": -1}, False),
        ("open_close_annotation", {"annotation": "a1-1", "action": "hover", "duration_ms": True}, False),
        ("open_close_annotation", {"annotation": "a1-1", "action": "dismiss"}, False),
        ("interact_marker", {"marker": "a1-1@2"}, True),
        ("interact_marker", {"marker": "a1-1"}, False),
        ("interact_marker", {}, False),
        ("search", {"query": "enc", "results": []}, True),
        ("search", {"query": "enc", "results": [{"id": "a1-1", "action": "selected"}]}, True),
        ("search", {"query": "", "results": []}, False),
        ("search", {"query": "enc", "results": [{"id": "a1-1", "action": "clicked"}]}, False),
        ("search", {"query": "enc", "results": [{"id": "a1-1"}]}, False),
        ("search", {"query": "enc"}, False),
        ("navigation_widget", {"widget": "undo", "result": "pin:a1-1"}, True),
        ("navigation_widget", {"widget": "walkthrough", "result": "next"}, True),
        ("navigation_widget", {"widget": "menu", "result": "x"}, False),
        ("navigation_widget", {"widget": "undo"}, False),
    ],
)
def test_detail_validation(etype, detail, ok):
    ids = {"pid": "1", "sid": "s", "did": "doc"}
    obj = {"t": T, "type": etype, **ids, "detail": detail}
    if ok:
        assert parse_event(obj).detail == detail
    else:
        with pytest.raises(IngestError):
            parse_event(obj)


def test_round_trip_through_json_line():
    event = parse_event(ev())
    line = event_to_json(event)
    assert parse_event(json.loads(line)) == event
    assert json.loads(line)["t"] == T


def test_json_line_drops_absent_ids():
    event = parse_event({"t": T, "type": "visit_page", "did": "home"})
    doc = json.loads(event_to_json(event))
    assert set(doc) == {"t", "type", "did"}


def test_millisecond_truncation_is_stable():
    event = parse_event(ev(t="2026-03-05T10:00:00.123456Z"))
    assert event_to_json(event).count("10:00:00.123Z") == 1
