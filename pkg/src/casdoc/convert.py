"""End-to-end conversion of one annotated source file.

The pipeline: extract annotation comments, strip them from the code, parse
entries, expand database includes, resolve anchors into a graph, fold in API
references, then render both formats. convert_source raises on the first
stage that fails (with everything that stage found); lint_source runs the
same stages but turns every failure into diagnostics and keeps going as far
as it can.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .apiref import ApiRefIndex, make_apiref_annotations, scan_symbols
from .database import AnnotationDb, expand_includes
from .errors import (
    AnnotationSyntaxError,
    DatabaseError,
    Diagnostic,
    GrammarError,
    GraphError,
    IncludeError,
)
from .graph import DocumentGraph, build_graph, merge_apiref, validate_graph
from .parser import (
    RawAnnotation,
    SourceFile,
    extract_annotation_comments,
    parse_entries,
    strip_annotations,
)
from .render import RenderOptions, render_baseline, render_interactive


@dataclass
class ConversionResult:
    html: str
    baseline: str
    graph: DocumentGraph
    diagnostics: list[Diagnostic] = field(default_factory=list)  # non-error findings


def _parse_all(src: SourceFile) -> list[RawAnnotation]:
    comments = extract_annotation_comments(src)
    out: list[RawAnnotation] = []
    for k, comment in enumerate(comments, start=1):
        out.extend(parse_entries(comment, comment_index=k))
    return out


def build_document_graph(
    src: SourceFile,
    *,
    db: AnnotationDb | None = None,
    index: ApiRefIndex | None = None,
) -> DocumentGraph:
    """Parse, resolve, and merge; the graph ready for rendering."""
    annotations = _parse_all(src)
    clean = strip_annotations(src)
    annotations = expand_includes(annotations, db or AnnotationDb.empty())
    graph = build_graph(clean, annotations)
    if index is not None and index.entries:
        occurrences = scan_symbols(clean, index)
        graph = merge_apiref(graph, make_apiref_annotations(occurrences, index))
    return graph


def convert_source(
    src: SourceFile,
    options: RenderOptions,
    *,
    db: AnnotationDb | None = None,
    index: ApiRefIndex | None = None,
) -> ConversionResult:
    graph = build_document_graph(src, db=db, index=index)
    info = [d for d in validate_graph(graph) if d.severity != "error"]
    html = render_interactive(graph, options)
    baseline = render_baseline(src, graph)
    return ConversionResult(html=html, baseline=baseline, graph=graph, diagnostics=info)


def lint_source(
    src: SourceFile,
    *,
    db: AnnotationDb | None = None,
    index: ApiRefIndex | None = None,
) -> list[Diagnostic]:
    """All findings for one file, as far as the pipeline can get.

    A syntax error stops at extraction (nothing later is meaningful); grammar
    and include problems are reported per entry while other entries continue;
    anchor and structural problems come from the graph stages.
    """
    try:
        comments = extract_annotation_comments(src)
    except AnnotationSyntaxError as exc:
        return [Diagnostic("error", "syntax", exc.reason, exc.line)]

    diags: list[Diagnostic] = []
    annotations: list[RawAnnotation] = []
    for k, comment in enumerate(comments, start=1):
        try:
            annotations.extend(parse_entries(comment, comment_index=k))
        except GrammarError as exc:
            diags.append(Diagnostic("error", "grammar", str(exc), comment.first_line))

    clean = strip_annotations(src)
    expanded: list[RawAnnotation] = []
    for ann in annotations:
        try:
            expanded.extend(expand_includes([ann], db or AnnotationDb.empty()))
        except IncludeError as exc:
            diags.append(Diagnostic("error", "unknown-include", str(exc)))
        except DatabaseError as exc:
            diags.append(Diagnostic("error", "database", str(exc)))

    try:
        graph = build_graph(clean, expanded)
    except GraphError as exc:
        diags.extend(exc.diagnostics)
        return diags

    if index is not None and index.entries:
        occurrences = scan_symbols(clean, index)
        graph = merge_apiref(graph, make_apiref_annotations(occurrences, index))
    diags.extend(validate_graph(graph))
    return diags
