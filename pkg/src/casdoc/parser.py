"""Annotation comments: extraction, entry grammar, and source stripping.

An annotated example is ordinary Java with block comments of the form
``/*? ... */``. Each such comment holds one or more entries separated by
lines containing only ``---``. An entry is a run of directive headers, a
blank line, then Markdown content:

    /*? anchor: byte[]
        title: Why a byte array

        Ciphers operate on raw bytes, not characters.
    */

Directives are lowercase words followed by a colon. ``anchor[k]: TEXT``
attaches the entry to the k-th occurrence of TEXT on the next non-blank code
line; ``block: n`` covers the next n lines (``block:`` with no value covers
lines up to the next blank one); ``within: TEXT`` nests the entry inside the
annotation that precedes it in the same comment. ``title:``, ``step:``,
``id:``, and ``include:`` carry the obvious metadata.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from pathlib import Path

from .errors import GrammarError, SourceError
from .lexer import BLOCK_COMMENT, scan_regions


@dataclass(frozen=True)
class SourceFile:
    path: str
    text: str
    host: str = "java"

    @classmethod
    def load(cls, path: str | Path) -> "SourceFile":
        p = Path(path)
        try:
            data = p.read_bytes()
        except OSError as exc:
            raise SourceError(f"cannot read {p}: {exc.strerror or exc}") from exc
        try:
            text = data.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise SourceError(f"{p} is not valid UTF-8: {exc.reason} at byte {exc.start}") from exc
        return cls(path=str(p), text=text)


@dataclass(frozen=True)
class AnnotationComment:
    """One ``/*? ... */`` comment, with its position in the original text."""

    start: int
    end: int  # exclusive, includes the closing */
    first_line: int
    last_line: int
    payload: str  # text between /*? and */


def extract_annotation_comments(src: SourceFile) -> list[AnnotationComment]:
    """All annotation comments in document order.

    An annotation comment is a block comment whose body starts with ``?``.
    Comment-like sequences inside string literals, character literals, text
    blocks, and line comments do not count. Javadoc (``/**``) is left alone.
    """
    text = src.text
    out = []
    for region in scan_regions(text):
        if region.kind != BLOCK_COMMENT:
            continue
        body = text[region.start + 2:region.end - 2]
        if not body.startswith("?"):
            continue
        out.append(
            AnnotationComment(
                start=region.start,
                end=region.end,
                first_line=text.count("\n", 0, region.start) + 1,
                last_line=text.count("\n", 0, region.end) + 1,
                payload=body[1:],
            )
        )
    return out


# --- entry grammar -----------------------------------------------------------

@dataclass(frozen=True)
class InlineDecl:
    """anchor[k]: TEXT, the k-th occurrence of TEXT on the next code line."""

    text: str
    occurrence: int = 1


@dataclass(frozen=True)
class BlockDecl:
    """block: n covers the next n lines; line_count None means until a blank line."""

    line_count: int | None = None


@dataclass(frozen=True)
class WithinDecl:
    """within: TEXT, the first occurrence of TEXT in the parent's content."""

    text: str


AnchorDecl = InlineDecl | BlockDecl | WithinDecl

SLUG_RE = re.compile(r"[A-Za-z0-9][A-Za-z0-9_-]*\Z")
_HEADER_RE = re.compile(r"([A-Za-z]+)(?:\[(\d+)\])?:(.*)\Z")  # directive names are lowercase; others get a clear error
_DIRECTIVES = frozenset({"anchor", "block", "within", "title", "step", "include", "id"})


@dataclass(frozen=True)
class RawAnnotation:
    """One parsed entry, not yet resolved against the code."""

    id: str
    title: str | None
    content: str  # Markdown source; may be empty only when include_ref is set
    anchor_decls: tuple[AnchorDecl, ...]
    step: int | None
    include_ref: str | None
    origin: tuple[int, int]  # (comment index, entry index), both 1-based
    source_url: str | None = None  # set when include expansion pulls in attributed content

    @property
    def is_nested(self) -> bool:
        return isinstance(self.anchor_decls[0], WithinDecl)


def default_id(comment_index: int, entry_index: int) -> str:
    return f"a{comment_index}-{entry_index}"


def parse_entries(comment: AnnotationComment, comment_index: int = 1) -> list[RawAnnotation]:
    """Split a comment payload on ``---`` lines and parse each entry."""
    segments: list[list[str]] = [[]]
    for line in comment.payload.split("\n"):
        if line.strip() == "---":
            segments.append([])
        else:
            segments[-1].append(line)
    return [
        _parse_entry(seg, comment_index=comment_index, entry_index=i)
        for i, seg in enumerate(segments, start=1)
    ]


def _dedent(lines: list[str]) -> list[str]:
    """Strip the common leading whitespace of all non-blank lines.

    Entry content is usually indented to line up under ``/*?``; Markdown is
    indentation-sensitive, so that shared indent must not leak into content.
    """
    prefixes = [line[: len(line) - len(line.lstrip())] for line in lines if line.strip()]
    if not prefixes:
        return lines
    common = prefixes[0]
    for p in prefixes[1:]:
        while not p.startswith(common):
            common = common[:-1]
    if not common:
        return lines
    w = len(common)
    return [line[w:] if line.strip() else line for line in lines]


def _parse_entry(lines: list[str], *, comment_index: int, entry_index: int) -> RawAnnotation:
    def fail(msg: str) -> GrammarError:
        return GrammarError(msg, comment_index=comment_index, entry_index=entry_index)

    # Skip leading blank lines: "anchor:" on the line after "/*?" is common.
    i = 0
    while i < len(lines) and not lines[i].strip():
        i += 1
    if i == len(lines):
        raise fail("entry is empty")

    decls: list[AnchorDecl] = []
    singletons: dict[str, str] = {}
    while i < len(lines) and lines[i].strip():
        m = _HEADER_RE.match(lines[i].strip())
        if not m:
            raise fail(
                f"malformed directive line {lines[i].strip()!r} "
                "(entries start with directives; a blank line separates them from content)"
            )
        name, occ, value = m.group(1), m.group(2), m.group(3).strip()
        if name not in _DIRECTIVES:
            raise fail(f"unknown directive {name!r}")
        if occ is not None and name != "anchor":
            raise fail(f"occurrence selector [..] is only valid on anchor, not {name!r}")
        if name == "anchor":
            if not value:
                raise fail("anchor directive needs target text")
            k = int(occ) if occ is not None else 1
            if k < 1:
                raise fail("anchor occurrence must be 1 or greater")
            decls.append(InlineDecl(value, k))
        elif name == "block":
            if any(isinstance(d, BlockDecl) for d in decls):
                raise fail("duplicate block directive")
            if value:
                if not value.isdigit() or int(value) < 1:
                    raise fail(f"block line count must be a positive integer, got {value!r}")
                decls.append(BlockDecl(int(value)))
            else:
                decls.append(BlockDecl(None))
        elif name == "within":
            if not value:
                raise fail("within directive needs target text")
            if any(isinstance(d, WithinDecl) for d in decls):
                raise fail("duplicate within directive")
            decls.append(WithinDecl(value))
        else:
            if name in singletons:
                raise fail(f"duplicate {name} directive")
            if not value:
                raise fail(f"{name} directive needs a value")
            singletons[name] = value
        i += 1

    # i now sits on the blank separator (or past the end); content follows.
    content_lines = _dedent(lines[i + 1:]) if i < len(lines) else []
    while content_lines and not content_lines[0].strip():
        content_lines.pop(0)
    while content_lines and not content_lines[-1].strip():
        content_lines.pop()
    content = "\n".join(content_lines)

    kinds = {type(d) for d in decls}
    if not decls:
        raise fail("entry has no anchor declaration (anchor, block, or within)")
    if WithinDecl in kinds and len(decls) > 1:
        raise fail("within cannot be combined with other anchor declarations")
    if InlineDecl in kinds and BlockDecl in kinds:
        raise fail("anchor and block cannot be mixed in one entry")

    step: int | None = None
    if "step" in singletons:
        if not singletons["step"].isdigit() or int(singletons["step"]) < 1:
            raise fail(f"step must be a positive integer, got {singletons['step']!r}")
        step = int(singletons["step"])

    for key in ("id", "include"):
        if key in singletons and not SLUG_RE.match(singletons[key]):
            raise fail(f"{key} must be a slug (letters, digits, - and _), got {singletons[key]!r}")

    include_ref = singletons.get("include")
    if not content.strip() and include_ref is None:
        raise fail("entry has no content and no include")

    return RawAnnotation(
        id=singletons.get("id", default_id(comment_index, entry_index)),
        title=singletons.get("title"),
        content=content,
        anchor_decls=tuple(decls),
        step=step,
        include_ref=include_ref,
        origin=(comment_index, entry_index),
    )


# --- stripping ---------------------------------------------------------------

@dataclass(frozen=True)
class Removal:
    """One removed annotation comment: where it sat and what it said."""

    clean_offset: int  # offset in the clean code where the removed text belongs
    text: str  # the removed text, verbatim (possibly whole lines)


@dataclass(frozen=True)
class CleanCode:
    """Source with annotation comments removed, plus the map to put them back.

    Removals are in document order; removals[i] corresponds to the i-th
    annotation comment. Reinserting each removal's text at its clean offset
    reproduces the original file byte for byte.
    """

    code: str
    removals: tuple[Removal, ...] = ()

    def restore(self) -> str:
        parts: list[str] = []
        prev = 0
        for r in self.removals:
            parts.append(self.code[prev:r.clean_offset])
            parts.append(r.text)
            prev = r.clean_offset
        parts.append(self.code[prev:])
        return "".join(parts)

    def line_count(self) -> int:
        return self.code.count("\n") + 1

    def lines(self) -> list[str]:
        return self.code.split("\n")


def strip_annotations(src: SourceFile) -> CleanCode:
    """Remove annotation comments, recording where each one was.

    A comment alone on its line(s), with only whitespace around it, takes the
    whole lines with it (including the trailing newline) so no blank hole is
    left in the code. A comment sharing a line with code is excised exactly.
    """
    text = src.text
    spans: list[tuple[int, int]] = []
    for comment in extract_annotation_comments(src):
        start, end = comment.start, comment.end
        line_start = text.rfind("\n", 0, start) + 1
        nl = text.find("\n", end)
        line_end = len(text) if nl == -1 else nl + 1
        before = text[line_start:start]
        after = text[end:nl if nl != -1 else len(text)]
        if before.strip() == "" and after.strip() == "":
            spans.append((line_start, line_end))
        else:
            spans.append((start, end))

    parts: list[str] = []
    removals: list[Removal] = []
    clean_len = 0
    prev = 0
    for s, e in spans:
        gap = text[prev:s]
        parts.append(gap)
        clean_len += len(gap)
        removals.append(Removal(clean_offset=clean_len, text=text[s:e]))
        prev = e
    parts.append(text[prev:])
    return CleanCode(code="".join(parts), removals=tuple(removals))


def comment_after_lines(clean: CleanCode) -> list[int]:
    """For each removal, the clean-code line count strictly before it.

    Anchors search forward from the line an annotation comment occupied (or
    shared). The value here is that line minus one, i.e. the `after_line`
    both inline and block resolution start from.
    """
    return [clean.code.count("\n", 0, r.clean_offset) for r in clean.removals]
