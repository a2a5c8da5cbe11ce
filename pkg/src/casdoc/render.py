"""Rendering: interactive HTML and the conventional baseline listing.

The interactive page is a single self-contained file. Code lines carry line
numbers; annotated spans become underlined markers; block annotations get a
bar in the right margin beside the lines they cover. Annotation content sits
in hidden elements that the embedded script turns into hover/pin dialogs.
With embed_assets on, the stylesheet and script are inlined, so the only
URLs left in the page are documentation links inside annotation content and
the optional telemetry endpoint.

The baseline rendering is the same example as an ordinary source listing:
annotations become plain block comments above the code they describe, and
reference content is left out, matching what a conventional tutorial would
ship.
"""

from __future__ import annotations

import html
import textwrap
from dataclasses import dataclass
from importlib import resources

from .content import inject_spans, text_content
from .errors import GraphError
from .graph import (
    AnnotationNode,
    BlockAnchor,
    DocumentGraph,
    InlineAnchor,
    validate_graph,
)
from .parser import SLUG_RE, SourceFile, strip_annotations

FORMAT_CASDOC = "casdoc"
FORMAT_BASELINE = "baseline"

BASELINE_WIDTH = 100


@dataclass(frozen=True)
class RenderOptions:
    document_id: str
    title: str | None = None
    embed_assets: bool = True
    asset_dir: str = "assets"
    telemetry_url: str | None = None

    def __post_init__(self):
        if not SLUG_RE.match(self.document_id):
            raise ValueError(f"document id {self.document_id!r} is not a valid slug")
        if self.telemetry_url is not None:
            ok = self.telemetry_url.startswith(("http://", "https://", "/"))
            if not ok:
                raise ValueError("telemetry_url must be http(s) or root-relative")


def _esc(s: str) -> str:
    return html.escape(s, quote=True)


def _load_asset(name: str) -> str:
    return resources.files("casdoc").joinpath(f"assets/{name}").read_text(encoding="utf-8")


def marker_id(node_id: str, anchor_index: int) -> str:
    """Stable id for one visible anchor of one node, used by telemetry."""
    return f"{node_id}@{anchor_index}"


# --- interactive rendering ---------------------------------------------------

def render_interactive(graph: DocumentGraph, options: RenderOptions) -> str:
    problems = [d for d in validate_graph(graph) if d.severity == "error"]
    if problems:
        raise GraphError(problems)

    lines = graph.code.lines()
    if lines and lines[-1] == "":
        # a trailing newline does not open a new line
        lines = lines[:-1]
    inline_by_line: dict[int, list[tuple[InlineAnchor, AnnotationNode, int]]] = {}
    block_by_line: dict[int, list[tuple[BlockAnchor, AnnotationNode, int]]] = {}
    for node in graph.nodes.values():
        for idx, anchor in enumerate(node.code_anchors):
            if isinstance(anchor, InlineAnchor):
                inline_by_line.setdefault(anchor.line, []).append((anchor, node, idx))
            else:
                block_by_line.setdefault(anchor.first_line, []).append((anchor, node, idx))

    width = len(str(len(lines)))
    rendered_lines: list[str] = []
    for ln, line in enumerate(lines, start=1):
        anchors = sorted(inline_by_line.get(ln, ()), key=lambda t: t[0].col_start)
        parts: list[str] = []
        pos = 0
        for anchor, node, idx in anchors:
            parts.append(_esc(line[pos:anchor.col_start]))
            classes = "cd-anchor"
            if node.show_marker:
                classes += " cd-marker-inline"
            parts.append(
                f'<span class="{classes}" data-ann="{_esc(node.id)}" '
                f'data-marker-id="{_esc(marker_id(node.id, idx))}">'
                f"{_esc(line[anchor.col_start:anchor.col_end])}</span>"
            )
            pos = anchor.col_end
        parts.append(_esc(line[pos:]))
        for anchor, node, idx in block_by_line.get(ln, ()):
            span = anchor.last_line - anchor.first_line + 1
            parts.append(
                f'<i class="cd-marker-block" data-ann="{_esc(node.id)}" '
                f'data-marker-id="{_esc(marker_id(node.id, idx))}" '
                f'data-first-line="{anchor.first_line}" data-last-line="{anchor.last_line}" '
                f'style="--cd-span:{span}"></i>'
            )
        rendered_lines.append(
            f'<span class="cd-line" data-line="{ln}">'
            f'<span class="cd-ln">{str(ln).rjust(width)}</span>{"".join(parts)}</span>'
        )

    annotations = "\n".join(_render_annotation(graph, node) for node in graph.nodes.values())

    title = options.title or options.document_id
    body_attrs = (
        f'data-cd-document-id="{_esc(options.document_id)}" data-cd-format="{FORMAT_CASDOC}"'
    )
    if options.telemetry_url:
        body_attrs += f' data-cd-telemetry-url="{_esc(options.telemetry_url)}"'

    walkthrough_controls = ""
    if graph.walkthrough:
        walkthrough_controls = (
            '<button id="cd-walkthrough" type="button">Walkthrough</button>\n'
        )

    if options.embed_assets:
        assets_head = f"<style>\n{_load_asset('casdoc.css')}</style>"
        assets_tail = f"<script>\n{_load_asset('casdoc.js')}</script>"
    else:
        assets_head = (
            f'<link rel="stylesheet" href="{_esc(options.asset_dir)}/casdoc.css">'
        )
        assets_tail = f'<script src="{_esc(options.asset_dir)}/casdoc.js" defer></script>'

    walkthrough_bar = ""
    if graph.walkthrough:
        walkthrough_bar = (
            '<div id="cd-walkthrough-bar" hidden>'
            '<button id="cd-wt-prev" type="button">Previous</button>'
            '<span id="cd-wt-status"></span>'
            '<button id="cd-wt-next" type="button">Next</button>'
            '<button id="cd-wt-stop" type="button">Stop</button>'
            "</div>"
        )

    return f"""<!DOCTYPE html>
<html lang="en">
<head>
<meta charset="utf-8">
<meta name="viewport" content="width=device-width, initial-scale=1">
<title>{_esc(title)}</title>
{assets_head}
</head>
<body {body_attrs}>
<header class="cd-toolbar">
<h1 class="cd-title">{_esc(title)}</h1>
<div class="cd-tools">
<span class="cd-search-wrap"><input id="cd-search" type="search" placeholder="Search annotations" autocomplete="off"><div id="cd-search-results" hidden></div></span>
{walkthrough_controls}<button id="cd-undo" type="button" title="Undo">&#8630;</button>
<button id="cd-redo" type="button" title="Redo">&#8631;</button>
<button id="cd-save-state" type="button">Save state</button>
<a class="cd-format-toggle" data-format="{FORMAT_BASELINE}" href="{_esc(options.document_id)}.baseline.java">Plain source</a>
</div>
</header>
{walkthrough_bar}
<main class="cd-main">
<pre class="cd-code">{chr(10).join(rendered_lines)}</pre>
</main>
<section id="cd-annotations" hidden>
{annotations}
</section>
{assets_tail}
</body>
</html>
"""


def _render_annotation(graph: DocumentGraph, node: AnnotationNode) -> str:
    attrs = ['class="cd-annotation"', f'data-id="{_esc(node.id)}"', f'data-kind="{node.kind}"']
    if node.title is not None:
        attrs.append(f'data-title="{_esc(node.title)}"')
    if node.step is not None:
        attrs.append(f'data-step="{node.step}"')
    if node.nested_anchor is not None:
        attrs.append(f'data-parent="{_esc(node.nested_anchor.parent_id)}"')

    parts_html: list[str] = []
    for i, part in enumerate(node.parts):
        body = part.html
        if i == 0 and node.children:
            spans = []
            for child in graph.children_of(node.id):
                a = child.nested_anchor
                spans.append(
                    (
                        a.start,
                        a.end,
                        f'class="cd-anchor cd-marker-inline" data-ann="{_esc(child.id)}" '
                        f'data-marker-id="{_esc(marker_id(child.id, 0))}"',
                    )
                )
            body = inject_spans(body, spans)
        part_attrs = f'class="cd-part" data-label="{part.label}"'
        if part.source_url:
            part_attrs += f' data-source-url="{_esc(part.source_url)}"'
            body += (
                f'<p class="cd-source">Source: <a href="{_esc(part.source_url)}" '
                f'rel="noopener">{_esc(part.source_url)}</a></p>'
            )
        parts_html.append(f'<div {part_attrs}>\n{body}</div>')

    return f'<div {" ".join(attrs)}>\n{chr(10).join(parts_html)}\n</div>'


# --- baseline rendering ------------------------------------------------------

def render_baseline(src: SourceFile, graph: DocumentGraph) -> str:
    """The example as a conventional listing with plain comments.

    Every authored annotation appears as a ``/* ... */`` comment inserted at
    the line its comment originally preceded (or shared), nested annotations
    indented inside their parent's comment. Reference content contributed by
    the API index is omitted; it was never part of the authored example.
    The output is lexically valid host source and contains no ``/*?``.
    """
    clean = graph.code if graph.code.removals else strip_annotations(src)
    by_comment: dict[int, list[AnnotationNode]] = {}
    for node in graph.nodes.values():
        if node.origin is None or node.nested_anchor is not None:
            continue
        by_comment.setdefault(node.origin[0], []).append(node)

    insertions: list[tuple[int, str]] = []  # (clean offset of line start, text)
    for ci, removal in enumerate(clean.removals, start=1):
        nodes = sorted(by_comment.get(ci, ()), key=lambda n: n.origin[1])
        if not nodes:
            continue
        line_start = clean.code.rfind("\n", 0, removal.clean_offset) + 1
        line_end = clean.code.find("\n", line_start)
        line = clean.code[line_start:line_end if line_end != -1 else len(clean.code)]
        indent = line[: len(line) - len(line.lstrip())] if line.strip() else ""
        blocks = [_comment_block(graph, node, indent) for node in nodes]
        insertions.append((line_start, "".join(blocks)))

    out: list[str] = []
    prev = 0
    for offset, text in insertions:  # already in document order
        out.append(clean.code[prev:offset])
        out.append(text)
        prev = offset
    out.append(clean.code[prev:])
    return "".join(out)


def _comment_block(graph: DocumentGraph, node: AnnotationNode, indent: str) -> str:
    lines = [f"{indent}/*"]
    lines.extend(_comment_body_lines(graph, node, indent, depth=0))
    lines.append(f"{indent} */")
    return "\n".join(lines) + "\n"


def _comment_body_lines(
    graph: DocumentGraph, node: AnnotationNode, indent: str, depth: int
) -> list[str]:
    prefix = f"{indent} * " + "  " * depth
    bare_prefix = f"{indent} *"
    width = max(BASELINE_WIDTH - len(prefix), 30)

    out: list[str] = []
    if node.title:
        out.append(prefix + _neutralize(node.title))
        out.append(bare_prefix)
    source = node.source_text if node.source_text is not None else text_content(node.parts[0].html)
    for j, para_lines in enumerate(_wrap_paragraphs(source, width)):
        if j:
            out.append(bare_prefix)
        out.extend(prefix + _neutralize(line) if line else bare_prefix for line in para_lines)
    for child in graph.children_of(node.id):
        out.append(bare_prefix)
        out.extend(_comment_body_lines(graph, child, indent, depth + 1))
    return out


def _neutralize(line: str) -> str:
    return line.replace("*/", "* /")


def _wrap_paragraphs(text: str, width: int) -> list[list[str]]:
    """Wrap prose paragraphs; keep fenced code and indented lines verbatim."""
    paragraphs: list[list[str]] = []
    current: list[str] = []
    fence = False
    verbatim: list[str] = []

    def flush_prose():
        nonlocal current
        if current:
            wrapped = textwrap.wrap(
                " ".join(current), width=width, break_long_words=False, break_on_hyphens=False
            )
            paragraphs.append(wrapped or [""])
            current = []

    def flush_verbatim():
        nonlocal verbatim
        if verbatim:
            paragraphs.append(verbatim)
            verbatim = []

    for line in text.split("\n"):
        stripped = line.strip()
        if stripped.startswith("```"):
            if fence:
                verbatim.append(line)
                flush_verbatim()
                fence = False
            else:
                flush_prose()
                fence = True
                verbatim = [line]
            continue
        if fence:
            verbatim.append(line)
            continue
        if not stripped:
            flush_prose()
            continue
        if line.startswith(("    ", "\t")):
            flush_prose()
            verbatim.append(line)
            continue
        flush_verbatim()
        current.append(stripped)
    flush_prose()
    flush_verbatim()
    return paragraphs
