"""Minimal lexical scan of Java source.

The converter does not need a real Java parser. It only needs to know which
character ranges are comments and which are string-like literals, so that
annotation comments are recognized exactly where a Java compiler would see a
comment and never inside a string. The scanner handles line comments, block
comments, string literals, character literals, and text blocks; everything
else is plain code.

Offsets throughout are code-point offsets into the source text (the indexes
Python strings use), with half-open [start, end) ranges.
"""

from __future__ import annotations

import bisect
from dataclasses import dataclass

from .errors import AnnotationSyntaxError

LINE_COMMENT = "line_comment"
BLOCK_COMMENT = "block_comment"
STRING = "string"
CHAR = "char"
TEXT_BLOCK = "text_block"

COMMENT_KINDS = frozenset({LINE_COMMENT, BLOCK_COMMENT})
LITERAL_KINDS = frozenset({STRING, CHAR, TEXT_BLOCK})


@dataclass(frozen=True)
class LexRegion:
    kind: str
    start: int
    end: int  # exclusive


class LineIndex:
    """Maps offsets in a text to 1-based lines and 0-based columns."""

    def __init__(self, text: str):
        self.text = text
        starts = [0]
        pos = text.find("\n")
        while pos != -1:
            starts.append(pos + 1)
            pos = text.find("\n", pos + 1)
        self.line_starts = starts

    def line_of(self, offset: int) -> int:
        return bisect.bisect_right(self.line_starts, offset)

    def col_of(self, offset: int) -> int:
        return offset - self.line_starts[self.line_of(offset) - 1]

    def line_count(self) -> int:
        return len(self.line_starts)


def scan_regions(text: str) -> list[LexRegion]:
    """Return comment and literal regions in document order.

    Unterminated block comments raise AnnotationSyntaxError carrying the line
    the comment opened on. Unterminated strings, characters, and text blocks
    recover at the next line end or EOF; javac would reject them, but the
    converter should still report the annotation-level problem a file has
    rather than choke on unrelated breakage.
    """
    regions: list[LexRegion] = []
    n = len(text)
    i = 0
    while i < n:
        c = text[i]
        if c == "/" and i + 1 < n:
            nxt = text[i + 1]
            if nxt == "/":
                end = text.find("\n", i)
                end = n if end == -1 else end
                regions.append(LexRegion(LINE_COMMENT, i, end))
                i = end
                continue
            if nxt == "*":
                close = text.find("*/", i + 2)
                if close == -1:
                    line = text.count("\n", 0, i) + 1
                    kind = "annotation comment" if text.startswith("/*?", i) else "block comment"
                    raise AnnotationSyntaxError(f"unterminated {kind}", line)
                regions.append(LexRegion(BLOCK_COMMENT, i, close + 2))
                i = close + 2
                continue
        elif c == '"':
            if text.startswith('"""', i):
                regions.append(LexRegion(TEXT_BLOCK, i, _scan_text_block(text, i)))
                i = regions[-1].end
                continue
            regions.append(LexRegion(STRING, i, _scan_quoted(text, i, '"')))
            i = regions[-1].end
            continue
        elif c == "'":
            regions.append(LexRegion(CHAR, i, _scan_quoted(text, i, "'")))
            i = regions[-1].end
            continue
        i += 1
    return regions


def _scan_quoted(text: str, start: int, quote: str) -> int:
    """End offset of a single-line quoted literal starting at `start`."""
    n = len(text)
    j = start + 1
    while j < n:
        c = text[j]
        if c == "\\":
            j += 2
            continue
        if c == quote:
            return j + 1
        if c == "\n":
            return j  # unterminated: stop before the newline
        j += 1
    return n


def _scan_text_block(text: str, start: int) -> int:
    """End offset of a text block ("three quotes") starting at `start`."""
    n = len(text)
    j = start + 3
    while j < n:
        if text[j] == "\\":
            j += 2
            continue
        if text.startswith('"""', j):
            return j + 3
        j += 1
    return n  # unterminated: recover at EOF


def mask_non_code(text: str, regions: list[LexRegion] | None = None) -> str:
    """Blank out comments and literals, preserving offsets and newlines.

    The result has the same length and the same line structure as the input,
    which lets offset-based searches (imports, identifiers) run on it while
    guaranteeing no match lands inside a string or comment.
    """
    if regions is None:
        regions = scan_regions(text)
    if not regions:
        return text
    out: list[str] = []
    prev = 0
    for region in regions:
        out.append(text[prev:region.start])
        chunk = text[region.start:region.end]
        out.append("".join("\n" if ch == "\n" else " " for ch in chunk))
        prev = region.end
    out.append(text[prev:])
    return "".join(out)
