"""API reference index and symbol scanning.

Examples lean on library types whose documentation already exists. The index
file maps fully qualified names to short summaries and documentation URLs:

    {
      "javax.crypto.Cipher": {"kind": "type", "summary": "...", "url": "..."},
      "javax.crypto.Cipher#getInstance": {"kind": "method", ...}
    }

Scanning finds uses of indexed names in the clean code, resolving simple
names the way a reader would: through the file's imports, through java.lang,
or through a star import when exactly one indexed type matches. The result
becomes markerless annotation nodes that merge_apiref folds into the graph.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from pathlib import Path

from .errors import IndexFormatError
from .graph import (
    KIND_APIREF,
    AnnotationNode,
    ContentPart,
    InlineAnchor,
    PART_REFERENCE,
)
from .lexer import LineIndex, mask_non_code
from .parser import CleanCode

_KINDS = frozenset({"type", "method", "field", "constructor"})
_FQ_TYPE_RE = re.compile(r"[A-Za-z_$][\w$]*(?:\.[A-Za-z_$][\w$]*)+\Z")
_MEMBER_RE = re.compile(r"[A-Za-z_$][\w$]*\Z")


@dataclass(frozen=True)
class ApiRefEntry:
    key: str  # "pkg.Type" or "pkg.Type#member"
    kind: str
    summary: str  # HTML
    url: str


@dataclass(frozen=True)
class ApiRefIndex:
    entries: dict[str, ApiRefEntry]

    @classmethod
    def empty(cls) -> "ApiRefIndex":
        return cls(entries={})

    def __contains__(self, key: str) -> bool:
        return key in self.entries

    def get(self, key: str) -> ApiRefEntry | None:
        return self.entries.get(key)


def load_index(path: str | Path) -> ApiRefIndex:
    p = Path(path)
    try:
        text = p.read_text(encoding="utf-8")
    except OSError as exc:
        raise IndexFormatError(f"cannot read index {p}: {exc.strerror or exc}") from exc

    def reject_duplicates(pairs):
        seen = set()
        for k, _ in pairs:
            if k in seen:
                raise IndexFormatError(f"duplicate index key {k!r}")
            seen.add(k)
        return dict(pairs)

    try:
        doc = json.loads(text, object_pairs_hook=reject_duplicates)
    except json.JSONDecodeError as exc:
        raise IndexFormatError(f"index {p} is not valid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise IndexFormatError("index must be a JSON object keyed by qualified name")

    entries: dict[str, ApiRefEntry] = {}
    for key, value in doc.items():
        if not isinstance(value, dict):
            raise IndexFormatError(f"index entry {key!r} must be an object")
        type_part, _, member = key.partition("#")
        if not _FQ_TYPE_RE.match(type_part) or (member and not _MEMBER_RE.match(member)):
            raise IndexFormatError(f"index key {key!r} is not a qualified name")
        missing = {"kind", "summary", "url"} - set(value)
        if missing:
            raise IndexFormatError(f"index entry {key!r} lacks {', '.join(sorted(missing))}")
        kind = value["kind"]
        if kind not in _KINDS:
            raise IndexFormatError(f"index entry {key!r} has unknown kind {kind!r}")
        if member and kind == "type":
            raise IndexFormatError(f"index entry {key!r} names a member but has kind 'type'")
        if not member and kind != "type":
            raise IndexFormatError(f"index entry {key!r} names a type but has kind {kind!r}")
        url = value["url"]
        if not isinstance(url, str) or not url:
            raise IndexFormatError(f"index entry {key!r} has an empty url")
        if not isinstance(value["summary"], str):
            raise IndexFormatError(f"index entry {key!r} summary must be a string")
        entries[key] = ApiRefEntry(key=key, kind=kind, summary=value["summary"], url=url)
    return ApiRefIndex(entries=entries)


@dataclass(frozen=True)
class SymbolOccurrence:
    key: str  # index key this occurrence resolved to
    anchor: InlineAnchor


_IMPORT_RE = re.compile(
    r"^[ \t]*import[ \t]+(?:(static)[ \t]+)?([A-Za-z_$][\w$]*(?:\.[A-Za-z_$][\w$]*)*)(\.\*)?[ \t]*;",
    re.MULTILINE,
)
_IDENT_RE = re.compile(r"[A-Za-z_$][\w$]*")
_MEMBER_CALL_RE = re.compile(r"[ \t]*\.[ \t]*([A-Za-z_$][\w$]*)[ \t]*\(")


def scan_symbols(code: CleanCode, index: ApiRefIndex) -> list[SymbolOccurrence]:
    """Occurrences of indexed symbols, in document order.

    Resolution is lexical, not semantic: a simple name resolves when imports
    plus java.lang point at exactly one indexed key. Shadowing by local
    declarations is not detected; an example that names a local class after
    a well-known library type will over-link, which is on the example.
    Matches never land inside strings or comments, and a name qualified by a
    preceding dot is not a simple-name use (the qualifier already matched).
    """
    masked = mask_non_code(code.code)
    explicit: dict[str, str] = {}
    on_demand: list[str] = []
    for m in _IMPORT_RE.finditer(masked):
        if m.group(1):  # static imports bring in members, not type names
            continue
        fq = m.group(2)
        if m.group(3):
            on_demand.append(fq)
        else:
            explicit.setdefault(fq.rsplit(".", 1)[-1], fq)

    def resolve(simple: str) -> str | None:
        candidates: list[str] = []
        if simple in explicit and explicit[simple] in index:
            candidates.append(explicit[simple])
        if f"java.lang.{simple}" in index:
            candidates.append(f"java.lang.{simple}")
        star = [f"{pkg}.{simple}" for pkg in on_demand if f"{pkg}.{simple}" in index]
        if len(star) == 1:
            candidates.append(star[0])
        distinct = sorted(set(candidates))
        return distinct[0] if len(distinct) == 1 else None

    lines = LineIndex(masked)
    occurrences: list[SymbolOccurrence] = []
    for m in _IDENT_RE.finditer(masked):
        before = masked[:m.start()].rstrip(" \t")
        if before.endswith(".") or before.endswith("$"):
            continue
        fq = resolve(m.group())
        if fq is None:
            continue
        line = lines.line_of(m.start())
        col = lines.col_of(m.start())
        occurrences.append(
            SymbolOccurrence(fq, InlineAnchor(line, col, col + len(m.group()), m.group()))
        )
        call = _MEMBER_CALL_RE.match(masked, m.end())
        if call:
            member_key = f"{fq}#{call.group(1)}"
            if member_key in index:
                mo = call.start(1)
                occurrences.append(
                    SymbolOccurrence(
                        member_key,
                        InlineAnchor(
                            lines.line_of(mo),
                            lines.col_of(mo),
                            lines.col_of(mo) + len(call.group(1)),
                            call.group(1),
                        ),
                    )
                )
    return occurrences


def api_node_id(key: str) -> str:
    return "api-" + re.sub(r"[^a-z0-9]+", "-", key.lower()).strip("-")


def make_apiref_annotations(
    occurrences: list[SymbolOccurrence], index: ApiRefIndex
) -> list[AnnotationNode]:
    """One markerless node per distinct symbol, anchored at every occurrence.

    Nodes come out in first-occurrence order, which merge_apiref preserves.
    """
    grouped: dict[str, list[InlineAnchor]] = {}
    for occ in occurrences:
        grouped.setdefault(occ.key, []).append(occ.anchor)

    nodes: list[AnnotationNode] = []
    for key, anchors in grouped.items():
        entry = index.get(key)
        if entry is None:
            continue
        nodes.append(
            AnnotationNode(
                id=api_node_id(key),
                kind=KIND_APIREF,
                title=key.replace("#", "."),
                parts=(ContentPart(PART_REFERENCE, entry.summary, entry.url),),
                code_anchors=tuple(anchors),
                show_marker=False,
            )
        )
    return nodes
