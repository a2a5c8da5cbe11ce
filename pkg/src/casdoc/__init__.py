"""casdoc: interactive documentation from annotated code examples.

A code example annotated with ``/*? ... */`` comments is converted into a
self-contained HTML page where explanations pop up from markers in the code
instead of interrupting it. The same source also renders to a conventional
commented listing, and the serving side logs interaction events that the
analysis tools turn back into reading behavior.
"""

from .apiref import ApiRefIndex, load_index, make_apiref_annotations, scan_symbols
from .convert import ConversionResult, build_document_graph, convert_source, lint_source
from .database import AnnotationDb, expand_includes
from .errors import (
    AnchorError,
    AnnotationSyntaxError,
    CasdocError,
    ConfigError,
    DatabaseError,
    Diagnostic,
    GrammarError,
    GraphError,
    IncludeError,
    IndexFormatError,
    IngestError,
    SourceError,
    StateDecodeError,
    StatsError,
)
from .graph import (
    AnnotationNode,
    BlockAnchor,
    ContentPart,
    DocumentGraph,
    InlineAnchor,
    NestedAnchor,
    build_graph,
    graph_from_json,
    graph_to_json,
    merge_apiref,
    validate_graph,
)
from .parser import (
    AnnotationComment,
    CleanCode,
    RawAnnotation,
    SourceFile,
    extract_annotation_comments,
    parse_entries,
    strip_annotations,
)
from .render import RenderOptions, render_baseline, render_interactive
from .state import Pin, SavedState, decode_state, encode_state

__version__ = "0.1.0"

__all__ = [
    "AnchorError",
    "AnnotationComment",
    "AnnotationDb",
    "AnnotationNode",
    "AnnotationSyntaxError",
    "ApiRefIndex",
    "BlockAnchor",
    "CasdocError",
    "CleanCode",
    "ConfigError",
    "ContentPart",
    "ConversionResult",
    "DatabaseError",
    "Diagnostic",
    "DocumentGraph",
    "GrammarError",
    "GraphError",
    "IncludeError",
    "IndexFormatError",
    "IngestError",
    "InlineAnchor",
    "NestedAnchor",
    "Pin",
    "RawAnnotation",
    "RenderOptions",
    "SavedState",
    "SourceError",
    "SourceFile",
    "StateDecodeError",
    "StatsError",
    "build_document_graph",
    "build_graph",
    "convert_source",
    "decode_state",
    "encode_state",
    "expand_includes",
    "extract_annotation_comments",
    "graph_from_json",
    "graph_to_json",
    "lint_source",
    "load_index",
    "make_apiref_annotations",
    "merge_apiref",
    "parse_entries",
    "render_baseline",
    "render_interactive",
    "scan_symbols",
    "strip_annotations",
    "validate_graph",
]
