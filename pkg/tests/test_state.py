import base64
import json

import pytest
from hypothesis import given, strategies as st

from casdoc.errors import StateDecodeError
from casdoc.state import Pin, SavedState, decode_state, encode_state


def state(*pins):
    return SavedState(version=1, pins=list(pins))


def test_round_trip_single_pin():
    s = state(Pin(id="a1-1", x=10, y=20, w=320, h=200))
    assert decode_state(encode_state(s)) == s


def test_fragment_shape():
    frag = encode_state(state(Pin(id="a1-1", x=0, y=0, w=80, h=40)))
    assert frag.startswith("#cds=")
    payload = frag[len("#cds="):]
    raw = base64.urlsafe_b64decode(payload).decode("ascii")
    doc = json.loads(raw)
    assert list(doc) == ["v", "pins"]
    assert list(doc["pins"][0]) == ["id", "x", "y", "w", "h"]
    assert " " not in raw


def test_pins_sorted_by_id():
    s = state(Pin(id="b", x=1, y=1, w=90, h=50), Pin(id="a", x=2, y=2, w=90, h=50))
    assert [p.id for p in s.pins] == ["a", "b"]
    decoded = decode_state(encode_state(s))
    assert [p.id for p in decoded.pins] == ["a", "b"]


def test_empty_state_round_trips():
    s = state()
    assert decode_state(encode_state(s)) == s


@pytest.mark.parametrize(
    "pin",
    [
        Pin(id="", x=0, y=0, w=80, h=40),
        Pin(id="-lead", x=0, y=0, w=80, h=40),
        Pin(id="has space", x=0, y=0, w=80, h=40),
        Pin(id="a", x=-1, y=0, w=80, h=40),
        Pin(id="a", x=0, y=-5, w=80, h=40),
        Pin(id="a", x=0, y=0, w=0, h=40),
        Pin(id="a", x=0, y=0, w=80, h=0),
        Pin(id="a", x=0.5, y=0, w=80, h=40),
        Pin(id="a", x=True, y=0, w=80, h=40),
    ],
)
def test_encode_rejects_bad_pins(pin):
    with pytest.raises(ValueError):
        encode_state(state(pin))


def test_encode_rejects_duplicate_ids():
    s = state(Pin(id="a", x=0, y=0, w=80, h=40), Pin(id="a", x=1, y=1, w=80, h=40))
    with pytest.raises(ValueError):
        encode_state(s)


def test_decode_without_hash_prefix():
    frag = encode_state(state(Pin(id="a", x=3, y=4, w=100, h=60)))
    assert decode_state(frag[1:]) == decode_state(frag)


def test_decode_among_other_fragment_params():
    frag = encode_state(state(Pin(id="a", x=3, y=4, w=100, h=60)))
    packed = "#view=code&" + frag[1:] + "&lang=java"
    assert decode_state(packed) == decode_state(frag)


def test_decode_tolerates_stripped_padding():
    frag = encode_state(state(Pin(id="a", x=3, y=4, w=100, h=60)))
    no_pad = "#cds=" + frag[len("#cds="):].rstrip("=")
    assert decode_state(no_pad) == decode_state(frag)


def _enc(doc):
    return "#cds=" + base64.urlsafe_b64encode(json.dumps(doc).encode()).decode()


@pytest.mark.parametrize(
    "fragment",
    [
        "#cds=",
        "#cds=!!!",
        "#cds=" + base64.urlsafe_b64encode(b"not json").decode(),
        "#other=abc",
        "",
        _enc([1, 2]),
        _enc({"v": 2, "pins": []}),
        _enc({"v": 1}),
        _enc({"v": 1, "pins": [], "extra": 1}),
        _enc({"v": 1, "pins": [{"id": "a", "x": 0, "y": 0, "w": 80}]}),
        _enc({"v": 1, "pins": [{"id": "a", "x": 0, "y": 0, "w": 80, "h": 40, "z": 9}]}),
        _enc({"v": 1, "pins": [{"id": "a", "x": 0, "y": 0, "w": 80, "h": 40}, {"id": "a", "x": 1, "y": 1, "w": 80, "h": 40}]}),
        _enc({"v": 1, "pins": [{"id": "A B", "x": 0, "y": 0, "w": 80, "h": 40}]}),
        _enc({"v": 1, "pins": [{"id": "a", "x": "0", "y": 0, "w": 80, "h": 40}]}),
    ],
)
def test_decode_rejects_malformed(fragment):
    with pytest.raises(StateDecodeError):
        decode_state(fragment)


def test_version_mismatch_message():
    with pytest.raises(StateDecodeError) as exc:
        decode_state(_enc({"v": 3, "pins": []}))
    assert "version" in str(exc.value)


pin_ids = st.from_regex(r"[a-z0-9][a-z0-9-]{0,8}", fullmatch=True)


@given(
    st.lists(
        st.builds(
            Pin,
            id=pin_ids,
            x=st.integers(min_value=0, max_value=5000),
            y=st.integers(min_value=0, max_value=5000),
            w=st.integers(min_value=1, max_value=4000),
            h=st.integers(min_value=1, max_value=4000),
        ),
        max_size=8,
        unique_by=lambda p: p.id,
    )
)
def test_round_trip_property(pins):
    s = SavedState(version=1, pins=pins)
    assert decode_state(encode_state(s)) == s
