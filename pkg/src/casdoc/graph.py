"""The document graph: annotations resolved against clean code.

Building a graph turns parsed entries into nodes whose anchors point at
concrete places: a span on a code line, a range of whole lines, or a phrase
inside the parent annotation's rendered content. The graph is a forest
(code-anchored nodes are roots, nested nodes hang off their parent) plus an
optional walkthrough ordering over stepped nodes.

Everything here is pure data transformation. Rendering and serving live
elsewhere; this module only decides *what* is annotated and *where*.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, replace

from .content import render_markdown, text_content
from .errors import AnchorError, Diagnostic, DiagnosticList, GraphError
from .parser import (
    BlockDecl,
    CleanCode,
    InlineDecl,
    RawAnnotation,
    WithinDecl,
    comment_after_lines,
)

KIND_ORIGINAL = "original"
KIND_APIREF = "apiref"
KIND_MERGED = "merged"

PART_EXPLANATION = "explanation"
PART_REFERENCE = "reference"


@dataclass(frozen=True)
class InlineAnchor:
    """A span on one code line. Columns are 0-based code-point offsets."""

    line: int
    col_start: int
    col_end: int
    text: str


@dataclass(frozen=True)
class BlockAnchor:
    """A contiguous range of whole lines, both ends inclusive."""

    first_line: int
    last_line: int


CodeAnchor = InlineAnchor | BlockAnchor


@dataclass(frozen=True)
class NestedAnchor:
    """A phrase in the parent annotation's text content, [start, end)."""

    parent_id: str
    start: int
    end: int
    text: str


@dataclass(frozen=True)
class ContentPart:
    label: str  # "explanation" or "reference"
    html: str
    source_url: str | None = None


@dataclass(frozen=True)
class AnnotationNode:
    id: str
    kind: str  # original | apiref | merged
    title: str | None
    parts: tuple[ContentPart, ...]
    code_anchors: tuple[CodeAnchor, ...] = ()
    nested_anchor: NestedAnchor | None = None
    children: tuple[str, ...] = ()
    step: int | None = None
    show_marker: bool = True
    # (comment index, entry index) for authored nodes; None for API nodes.
    # Baseline rendering and diagnostics need it; it is not interchange data.
    origin: tuple[int, int] | None = None
    source_text: str | None = None  # authored Markdown, for baseline output

    @property
    def is_nested(self) -> bool:
        return self.nested_anchor is not None

    def inline_anchors(self) -> list[InlineAnchor]:
        return [a for a in self.code_anchors if isinstance(a, InlineAnchor)]

    def block_anchors(self) -> list[BlockAnchor]:
        return [a for a in self.code_anchors if isinstance(a, BlockAnchor)]


@dataclass(frozen=True)
class DocumentGraph:
    code: CleanCode
    nodes: dict[str, AnnotationNode]  # insertion order = document order
    roots: tuple[str, ...]
    walkthrough: tuple[str, ...]  # node ids ordered by step

    def node(self, node_id: str) -> AnnotationNode:
        return self.nodes[node_id]

    def children_of(self, node_id: str) -> list[AnnotationNode]:
        return [self.nodes[c] for c in self.nodes[node_id].children]


# --- anchor resolution -------------------------------------------------------

def resolve_inline(code: CleanCode, decl: InlineDecl, after_line: int) -> InlineAnchor:
    """Anchor on the first non-blank line after `after_line` (1-based)."""
    lines = code.lines()
    target_line = None
    for ln in range(after_line + 1, len(lines) + 1):
        if lines[ln - 1].strip():
            target_line = ln
            break
    if target_line is None:
        raise AnchorError(
            f"anchor {decl.text!r}: no code line after line {after_line}",
            line=after_line or None,
        )
    line_text = lines[target_line - 1]
    count = 0
    pos = 0
    while True:
        hit = line_text.find(decl.text, pos)
        if hit == -1:
            raise AnchorError(
                f"anchor {decl.text!r}: occurrence {decl.occurrence} not found on line "
                f"{target_line} ({count} occurrence{'s' if count != 1 else ''} present)",
                line=target_line,
            )
        count += 1
        if count == decl.occurrence:
            return InlineAnchor(target_line, hit, hit + len(decl.text), decl.text)
        pos = hit + len(decl.text)


def resolve_block(code: CleanCode, decl: BlockDecl, after_line: int) -> BlockAnchor:
    total = code.line_count()
    first = after_line + 1
    if first > total:
        raise AnchorError(
            f"block anchor: no lines after line {after_line}",
            code="block-out-of-range",
            line=after_line or None,
        )
    lines = code.lines()
    if decl.line_count is not None:
        remaining = total - after_line
        if decl.line_count > remaining:
            raise AnchorError(
                f"block anchor: {decl.line_count} lines requested but only "
                f"{remaining} remain after line {after_line}",
                code="block-out-of-range",
                line=first,
            )
        return BlockAnchor(first, after_line + decl.line_count)
    if not lines[first - 1].strip():
        raise AnchorError(
            "block anchor: the next line is blank, so the block covers no lines",
            code="block-out-of-range",
            line=first,
        )
    last = first
    while last + 1 <= total and lines[last].strip():
        last += 1
    return BlockAnchor(first, last)


def resolve_within(parent: AnnotationNode, decl: WithinDecl) -> NestedAnchor:
    searchable = "".join(text_content(p.html) for p in parent.parts)
    idx = searchable.find(decl.text)
    if idx == -1:
        raise AnchorError(
            f"within {decl.text!r}: phrase not found in annotation {parent.id!r}",
            code="dangling-nested-anchor",
        )
    return NestedAnchor(parent.id, idx, idx + len(decl.text), decl.text)


# --- graph construction ------------------------------------------------------

def build_graph(code: CleanCode, annotations: list[RawAnnotation]) -> DocumentGraph:
    """Resolve every entry and assemble the graph.

    All problems are collected and raised together as one GraphError, so an
    author sees every dangling anchor in a file at once, not just the first.
    Entries must already have includes expanded (content never empty).
    """
    diags = DiagnosticList()
    after = comment_after_lines(code)

    nodes: dict[str, AnnotationNode] = {}
    by_origin: dict[tuple[int, int], str] = {}
    children: dict[str, list[str]] = {}

    for ann in annotations:
        ci, ei = ann.origin
        where = f"entry {ei} of comment {ci}"
        if ann.include_ref is not None:
            diags.error("unexpanded-include", f"{where}: include was not expanded")
            continue
        if ann.id in nodes:
            diags.error("duplicate-id", f"{where}: annotation id {ann.id!r} already used")
            continue
        if ci - 1 >= len(after):
            diags.error("internal", f"{where}: comment has no removal record")
            continue
        after_line = after[ci - 1]

        html = render_markdown(ann.content)
        part = ContentPart(PART_EXPLANATION, html, ann.source_url)

        code_anchors: list[CodeAnchor] = []
        nested: NestedAnchor | None = None
        failed = False
        for decl in ann.anchor_decls:
            try:
                if isinstance(decl, InlineDecl):
                    code_anchors.append(resolve_inline(code, decl, after_line))
                elif isinstance(decl, BlockDecl):
                    code_anchors.append(resolve_block(code, decl, after_line))
                else:
                    parent_id = by_origin.get((ci, ei - 1))
                    if parent_id is None:
                        raise AnchorError(
                            f"within {decl.text!r}: entry has no preceding entry "
                            "in its comment to nest under",
                            code="dangling-nested-anchor",
                        )
                    nested = resolve_within(nodes[parent_id], decl)
            except AnchorError as exc:
                diags.error(exc.code, f"{where}: {exc}", exc.line)
                failed = True
        if failed:
            continue

        if nested is not None and ann.step is not None:
            diags.error("step-on-nested", f"{where}: nested annotations cannot carry a step")
            continue

        node = AnnotationNode(
            id=ann.id,
            kind=KIND_ORIGINAL,
            title=ann.title,
            parts=(part,),
            code_anchors=tuple(code_anchors),
            nested_anchor=nested,
            step=ann.step,
            show_marker=True,
            origin=ann.origin,
            source_text=ann.content,
        )
        nodes[ann.id] = node
        by_origin[ann.origin] = ann.id
        if nested is not None:
            children.setdefault(nested.parent_id, []).append(ann.id)

    for parent_id, kids in children.items():
        nodes[parent_id] = replace(nodes[parent_id], children=tuple(kids))

    _check_steps(nodes, diags)
    _check_inline_overlaps(nodes, diags)

    if diags.errors:
        raise GraphError(diags.errors)

    roots = tuple(n.id for n in nodes.values() if n.code_anchors)
    walkthrough = tuple(
        n.id for n in sorted((n for n in nodes.values() if n.step is not None), key=lambda n: n.step)
    )
    return DocumentGraph(code=code, nodes=nodes, roots=roots, walkthrough=walkthrough)


def _check_steps(nodes: dict[str, AnnotationNode], diags: DiagnosticList) -> None:
    seen: dict[int, str] = {}
    for n in nodes.values():
        if n.step is None:
            continue
        if n.step in seen:
            diags.error(
                "duplicate-step",
                f"step {n.step} used by both {seen[n.step]!r} and {n.id!r}",
            )
        else:
            seen[n.step] = n.id
    if seen:
        have = sorted(seen)
        missing = sorted(set(range(1, have[-1] + 1)) - set(have))
        if missing:
            diags.info(
                "step-gap",
                f"walkthrough steps skip {', '.join(map(str, missing))}",
            )


def _check_inline_overlaps(nodes: dict[str, AnnotationNode], diags: DiagnosticList) -> None:
    """Any two inline anchors on the same line must not intersect."""
    spans: list[tuple[int, int, int, str]] = []
    for n in nodes.values():
        for a in n.inline_anchors():
            spans.append((a.line, a.col_start, a.col_end, n.id))
    spans.sort()
    # sweep: compare each span with the rightmost-reaching earlier span on its line
    reach: tuple[int, int, int, str] | None = None
    for span in spans:
        line, start, end, nid = span
        if reach is not None and reach[0] == line and start < reach[2]:
            diags.error(
                "overlapping-anchors",
                f"inline anchors of {reach[3]!r} and {nid!r} overlap on line {line} "
                f"(columns {reach[1]}-{reach[2]} and {start}-{end})",
                line=line,
            )
        if reach is None or reach[0] != line or end > reach[2]:
            reach = span


# --- API reference merging ---------------------------------------------------

def merge_apiref(graph: DocumentGraph, apiref_nodes: list[AnnotationNode]) -> DocumentGraph:
    """Fold API reference nodes into a graph of authored annotations.

    An API node whose anchor overlaps an authored node's inline anchor merges
    into it: the authored node becomes "merged", gains the reference content
    part, and adopts the API node's remaining anchors. API nodes that touch
    nothing join the graph as standalone, markerless nodes.

    The no-overlap invariant is preserved throughout: an adopted or standalone
    anchor that would collide with an anchor already in the graph is dropped.
    In the degenerate case where an API node cannot merge (its target already
    carries a reference) and every one of its anchors collides, the node is
    dropped entirely; its occurrences are all covered by annotations anyway.
    Merging the same nodes twice changes nothing.
    """
    nodes = dict(graph.nodes)
    roots = list(graph.roots)

    def anchors_elsewhere(exclude: str | None = None) -> list[InlineAnchor]:
        out: list[InlineAnchor] = []
        for n in nodes.values():
            if n.id != exclude:
                out.extend(n.inline_anchors())
        return out

    for api in apiref_nodes:
        if api.id in nodes:
            continue  # added by an earlier call

        target_id = None
        for node_id, node in nodes.items():
            if node.kind != KIND_APIREF and _anchors_intersect(node, api):
                target_id = node_id
                break

        if target_id is not None:
            target = nodes[target_id]
            if target.kind == KIND_ORIGINAL:
                taken = anchors_elsewhere(exclude=target_id) + target.inline_anchors()
                extra = tuple(
                    a for a in api.inline_anchors() if not _overlaps_any(a, taken)
                )
                nodes[target_id] = replace(
                    target,
                    kind=KIND_MERGED,
                    parts=target.parts + (api.parts[0],),
                    code_anchors=target.code_anchors + extra,
                )
                continue
            ref = api.parts[0]
            if any(
                p.label == PART_REFERENCE and p.source_url == ref.source_url
                for p in target.parts
            ):
                continue  # this reference is already folded in: idempotence
            # target is merged and full; fall through to standalone handling

        kept = tuple(
            a for a in api.inline_anchors() if not _overlaps_any(a, anchors_elsewhere())
        )
        if not kept:
            continue
        nodes[api.id] = replace(api, code_anchors=kept)
        roots.append(api.id)

    return DocumentGraph(
        code=graph.code,
        nodes=nodes,
        roots=tuple(roots),
        walkthrough=graph.walkthrough,
    )


def _anchors_intersect(a: AnnotationNode, b: AnnotationNode) -> bool:
    return any(_overlaps_any(x, a.inline_anchors()) for x in b.inline_anchors())


def _overlaps_any(anchor: InlineAnchor, others: list[InlineAnchor]) -> bool:
    return any(
        o.line == anchor.line and anchor.col_start < o.col_end and o.col_start < anchor.col_end
        for o in others
    )


# --- validation --------------------------------------------------------------

def validate_graph(graph: DocumentGraph) -> list[Diagnostic]:
    """Structural checks over a finished graph.

    Errors make the graph unrenderable (the renderer refuses them); info
    items are advisory. Graphs produced by build_graph and merge_apiref pass
    clean, but graphs can also arrive from interchange files.
    """
    diags = DiagnosticList()
    nodes = graph.nodes
    code_lines = graph.code.lines()
    total_lines = len(code_lines)

    for node in nodes.values():
        has_code = bool(node.code_anchors)
        has_nested = node.nested_anchor is not None
        if has_code == has_nested:
            diags.error(
                "bad-anchoring",
                f"{node.id!r} must have either code anchors or one nested anchor",
            )
        if not any(text_content(p.html).strip() or "<img" in p.html for p in node.parts):
            diags.error("empty-content", f"{node.id!r} has no visible content")
        if not 1 <= len(node.parts) <= 2:
            diags.error("bad-parts", f"{node.id!r} has {len(node.parts)} content parts")
        if has_nested and node.step is not None:
            diags.error("step-on-nested", f"nested annotation {node.id!r} carries a step")
        for a in node.code_anchors:
            if isinstance(a, InlineAnchor):
                if not 1 <= a.line <= total_lines:
                    diags.error("anchor-out-of-range", f"{node.id!r} anchors line {a.line}, code has {total_lines}")
                    continue
                line_len = len(code_lines[a.line - 1])
                if not (0 <= a.col_start < a.col_end <= line_len):
                    diags.error(
                        "anchor-out-of-range",
                        f"{node.id!r} anchor columns {a.col_start}-{a.col_end} exceed line {a.line}",
                    )
            else:
                if not 1 <= a.first_line <= a.last_line <= total_lines:
                    diags.error(
                        "anchor-out-of-range",
                        f"{node.id!r} block anchor {a.first_line}-{a.last_line} is out of range",
                    )
        if has_nested:
            parent = nodes.get(node.nested_anchor.parent_id)
            if parent is None:
                diags.error("missing-parent", f"{node.id!r} nests under unknown {node.nested_anchor.parent_id!r}")
            elif node.id not in parent.children:
                diags.error("broken-child-link", f"{parent.id!r} does not list {node.id!r} as a child")

    claimed: dict[str, str] = {}
    for node in nodes.values():
        for child_id in node.children:
            child = nodes.get(child_id)
            if child is None:
                diags.error("broken-child-link", f"{node.id!r} lists unknown child {child_id!r}")
                continue
            if child.nested_anchor is None or child.nested_anchor.parent_id != node.id:
                diags.error("broken-child-link", f"{child_id!r} is not anchored within {node.id!r}")
            if child_id in claimed:
                diags.error("multiple-parents", f"{child_id!r} is claimed by {claimed[child_id]!r} and {node.id!r}")
            claimed[child_id] = node.id

    reachable: set[str] = set()
    stack = [r for r in graph.roots if r in nodes]
    for r in graph.roots:
        if r not in nodes:
            diags.error("broken-root", f"root {r!r} is not a node")
    while stack:
        nid = stack.pop()
        if nid in reachable:
            continue
        reachable.add(nid)
        stack.extend(c for c in nodes[nid].children if c in nodes)
    for nid in nodes:
        if nid not in reachable:
            diags.error("unreachable", f"{nid!r} is not reachable from any root")

    _check_steps(nodes, diags)
    _check_inline_overlaps(nodes, diags)
    # identical findings can surface through more than one check; report once
    seen: set[tuple[str, str]] = set()
    unique: list[Diagnostic] = []
    for d in diags.items:
        key = (d.code, d.message)
        if key not in seen:
            seen.add(key)
            unique.append(d)
    return unique


# --- interchange -------------------------------------------------------------

def _anchor_to_json(a: CodeAnchor | NestedAnchor) -> dict:
    if isinstance(a, InlineAnchor):
        return {"type": "inline", "line": a.line, "col_start": a.col_start,
                "col_end": a.col_end, "text": a.text}
    if isinstance(a, BlockAnchor):
        return {"type": "block", "first_line": a.first_line, "last_line": a.last_line}
    return {"type": "nested", "parent": a.parent_id, "start": a.start,
            "end": a.end, "text": a.text}


def graph_to_json(graph: DocumentGraph) -> str:
    """Serialize for interchange: stable key order, indented, trailing newline."""
    nodes = {}
    for n in graph.nodes.values():
        anchors = [_anchor_to_json(a) for a in n.code_anchors]
        if n.nested_anchor is not None:
            anchors.append(_anchor_to_json(n.nested_anchor))
        nodes[n.id] = {
            "kind": n.kind,
            "title": n.title,
            "parts": [
                {"label": p.label, "html": p.html, "source_url": p.source_url}
                for p in n.parts
            ],
            "anchors": anchors,
            "children": list(n.children),
            "step": n.step,
            "show_marker": n.show_marker,
        }
    doc = {
        "code": graph.code.code,
        "nodes": nodes,
        "roots": list(graph.roots),
        "walkthrough": list(graph.walkthrough),
    }
    return json.dumps(doc, indent=2, ensure_ascii=False) + "\n"


def graph_from_json(text: str) -> DocumentGraph:
    """Load an interchange file. The source map is not part of interchange,
    so the resulting graph renders interactively but cannot restore the
    original annotated source."""
    doc = json.loads(text)
    nodes: dict[str, AnnotationNode] = {}
    for nid, nd in doc["nodes"].items():
        code_anchors: list[CodeAnchor] = []
        nested: NestedAnchor | None = None
        for a in nd["anchors"]:
            if a["type"] == "inline":
                code_anchors.append(InlineAnchor(a["line"], a["col_start"], a["col_end"], a["text"]))
            elif a["type"] == "block":
                code_anchors.append(BlockAnchor(a["first_line"], a["last_line"]))
            else:
                nested = NestedAnchor(a["parent"], a["start"], a["end"], a["text"])
        nodes[nid] = AnnotationNode(
            id=nid,
            kind=nd["kind"],
            title=nd.get("title"),
            parts=tuple(
                ContentPart(p["label"], p["html"], p.get("source_url")) for p in nd["parts"]
            ),
            code_anchors=tuple(code_anchors),
            nested_anchor=nested,
            children=tuple(nd.get("children", ())),
            step=nd.get("step"),
            show_marker=bool(nd.get("show_marker", True)),
        )
    return DocumentGraph(
        code=CleanCode(code=doc["code"]),
        nodes=nodes,
        roots=tuple(doc.get("roots", ())),
        walkthrough=tuple(doc.get("walkthrough", ())),
    )
