"""Markdown rendering and lightweight HTML text handling.

Annotation content is authored in Markdown (CommonMark, raw HTML allowed,
matching what database entries contain). Nested annotations anchor to a
phrase in their parent's *rendered text*, so this module also knows how to
extract the text content of an HTML fragment and how to wrap a text range in
a span without disturbing the markup around it.

Text content is defined exactly like the DOM's textContent: character data
concatenated across tags, entities decoded, no separators added. Offsets into
it therefore mean the same thing to this code and to a browser.
"""

from __future__ import annotations

import html as _html
import re
from dataclasses import dataclass

from markdown_it import MarkdownIt

_md = MarkdownIt("commonmark")


def render_markdown(text: str) -> str:
    return _md.render(text)


_TOKEN_RE = re.compile(r"<!--.*?-->|<[^>]*>", re.DOTALL)
_ENTITY_RE = re.compile(r"&(?:[A-Za-z][A-Za-z0-9]*|#[0-9]+|#[xX][0-9a-fA-F]+);")


@dataclass(frozen=True)
class _TextPiece:
    raw_start: int  # offset into the HTML source
    raw: str
    text_start: int  # offset into the concatenated text content
    text: str
    # For each decoded character, the (start, end) range of raw chars it came
    # from. Plain characters map 1:1; an entity maps one decoded char to the
    # whole &...; sequence.
    char_spans: tuple[tuple[int, int], ...]


def _pieces(html: str) -> list[_TextPiece]:
    pieces: list[_TextPiece] = []
    text_pos = 0
    prev = 0
    for m in _TOKEN_RE.finditer(html):
        if m.start() > prev:
            piece = _make_piece(html, prev, m.start(), text_pos)
            pieces.append(piece)
            text_pos += len(piece.text)
        prev = m.end()
    if prev < len(html):
        piece = _make_piece(html, prev, len(html), text_pos)
        pieces.append(piece)
    return pieces


def _make_piece(html: str, start: int, end: int, text_start: int) -> _TextPiece:
    raw = html[start:end]
    decoded: list[str] = []
    spans: list[tuple[int, int]] = []
    pos = 0
    for em in _ENTITY_RE.finditer(raw):
        for i in range(pos, em.start()):
            decoded.append(raw[i])
            spans.append((i, i + 1))
        value = _html.unescape(em.group())
        if value == em.group():  # not actually an entity
            for i in range(em.start(), em.end()):
                decoded.append(raw[i])
                spans.append((i, i + 1))
        else:
            for j, ch in enumerate(value):
                decoded.append(ch)
                # every decoded char of a multi-char expansion maps to the
                # whole entity; ranges may repeat, which is fine for wrapping
                spans.append((em.start(), em.end()) if j == 0 else (em.end(), em.end()))
        pos = em.end()
    for i in range(pos, len(raw)):
        decoded.append(raw[i])
        spans.append((i, i + 1))
    return _TextPiece(start, raw, text_start, "".join(decoded), tuple(spans))


def text_content(html: str) -> str:
    """The fragment's text, as a browser's textContent would report it."""
    return "".join(p.text for p in _pieces(html))


def inject_spans(html: str, spans: list[tuple[int, int, str]]) -> str:
    """Wrap text-content ranges of an HTML fragment in <span> elements.

    Each span is (start, end, attributes) in text-content offsets; attributes
    is the raw attribute string for the opening tag. Ranges must not overlap.
    A range crossing element boundaries wraps each affected text segment in
    its own span, so the output stays well-formed.
    """
    ordered = sorted(spans, key=lambda s: s[0])
    for (_, e1, _), (s2, _, _) in zip(ordered, ordered[1:]):
        if s2 < e1:
            raise ValueError("overlapping spans")

    pieces = _pieces(html)
    # (raw offset, text to insert); inserts at equal offsets keep list order
    inserts: list[tuple[int, str]] = []
    for start, end, attrs in ordered:
        if start >= end:
            continue
        for p in pieces:
            p_end = p.text_start + len(p.text)
            lo = max(start, p.text_start)
            hi = min(end, p_end)
            if lo >= hi:
                continue
            raw_lo = p.raw_start + p.char_spans[lo - p.text_start][0]
            last = p.char_spans[hi - p.text_start - 1]
            raw_hi = p.raw_start + last[1]
            inserts.append((raw_lo, f"<span {attrs}>"))
            inserts.append((raw_hi, "</span>"))

    out: list[str] = []
    prev = 0
    for offset, text in sorted(inserts, key=lambda t: t[0]):
        out.append(html[prev:offset])
        out.append(text)
        prev = offset
    out.append(html[prev:])
    return "".join(out)
