"""Event ingestion, storage, and usage reconstruction."""

from .events import (
    CLIENT_TYPES,
    EVENT_ORIGIN,
    EVENT_TYPES,
    SERVER_TYPES,
    InteractionEvent,
    event_to_json,
    format_timestamp,
    parse_event,
)
from .log import EventLog, read_log
from .metrics import (
    DocumentMeta,
    Metric,
    MetricReport,
    apiref_only_share,
    compute_metrics,
    floating_only_rate,
    nested_to_top_level_ratio,
)
from .reconstruct import (
    AnalysisConfig,
    AnnotationView,
    CodeExampleView,
    Reconstruction,
    SearchAction,
    Session,
    derive_views,
    filter_participants,
    group_annotation_views,
    group_search_actions,
    reconstruct,
    split_sessions,
)
from .stats import chi_square_cramers_v, kendall_tau, pearson_r, sign_test

__all__ = [
    "AnalysisConfig",
    "AnnotationView",
    "CLIENT_TYPES",
    "CodeExampleView",
    "DocumentMeta",
    "EVENT_ORIGIN",
    "EVENT_TYPES",
    "EventLog",
    "InteractionEvent",
    "Metric",
    "MetricReport",
    "Reconstruction",
    "SERVER_TYPES",
    "SearchAction",
    "Session",
    "apiref_only_share",
    "chi_square_cramers_v",
    "compute_metrics",
    "floating_only_rate",
    "nested_to_top_level_ratio",
    "derive_views",
    "event_to_json",
    "format_timestamp",
    "filter_participants",
    "group_annotation_views",
    "group_search_actions",
    "kendall_tau",
    "parse_event",
    "pearson_r",
    "read_log",
    "reconstruct",
    "sign_test",
    "split_sessions",
]
