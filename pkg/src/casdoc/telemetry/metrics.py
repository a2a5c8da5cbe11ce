"""Usage metrics over a reconstruction.

Each metric keeps its numerator and denominator next to the value so a
report can be audited without re-running the pipeline. Ratios with an
empty denominator are flagged instead of divided.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from .reconstruct import AnnotationView, CodeExampleView, Reconstruction


@dataclass(frozen=True)
class Metric:
    key: str
    value: float | None
    numerator: float | None
    denominator: float | None
    definition: str
    flagged: bool = False


@dataclass
class MetricReport:
    metrics: dict[str, Metric] = field(default_factory=dict)

    def add(self, metric: Metric) -> None:
        self.metrics[metric.key] = metric

    def __getitem__(self, key: str) -> Metric:
        return self.metrics[key]

    def to_json(self) -> str:
        doc = {
            key: {
                "value": m.value,
                "numerator": m.numerator,
                "denominator": m.denominator,
                "definition": m.definition,
                "flagged": m.flagged,
            }
            for key, m in self.metrics.items()
        }
        return json.dumps(doc, indent=2, sort_keys=True) + "\n"


@dataclass(frozen=True)
class DocumentMeta:
    """What the analyzer needs to know about one published document."""

    did: str
    inline_markers: frozenset[str] = frozenset()
    block_markers: frozenset[str] = frozenset()
    original_ids: frozenset[str] = frozenset()
    nested_ids: frozenset[str] = frozenset()
    apiref_ids: frozenset[str] = frozenset()

    @property
    def markers(self) -> frozenset[str]:
        return self.inline_markers | self.block_markers

    @property
    def annotation_ids(self) -> frozenset[str]:
        return self.original_ids | self.nested_ids | self.apiref_ids

    @staticmethod
    def from_graph(did: str, graph) -> "DocumentMeta":
        from ..graph import InlineAnchor, KIND_APIREF, KIND_ORIGINAL
        from ..render import marker_id

        inline, block = set(), set()
        original, nested, apiref = set(), set(), set()
        for node in graph.nodes.values():
            for idx, anchor in enumerate(node.code_anchors):
                if not node.show_marker:
                    continue
                mid = marker_id(node.id, idx)
                (inline if isinstance(anchor, InlineAnchor) else block).add(mid)
            if node.kind == KIND_APIREF:
                apiref.add(node.id)
            elif node.nested_anchor is not None:
                nested.add(node.id)
            else:
                # merged nodes keep their original explanation, so they
                # count with the originals
                original.add(node.id)
        return DocumentMeta(
            did=did,
            inline_markers=frozenset(inline),
            block_markers=frozenset(block),
            original_ids=frozenset(original),
            nested_ids=frozenset(nested),
            apiref_ids=frozenset(apiref),
        )


# ---------------------------------------------------------------------------
# count-level helpers, usable straight from published aggregate counts


def floating_only_rate(hover_only: int, total_views: int, navigation_opened: int) -> float:
    """Share of anchor-opened annotation views that stayed floating."""
    anchored = total_views - navigation_opened
    if anchored <= 0:
        raise ZeroDivisionError("no anchor-opened views")
    return hover_only / anchored


def nested_to_top_level_ratio(nested: int, top_level: int) -> float:
    if top_level <= 0:
        raise ZeroDivisionError("no top-level views")
    return nested / top_level


def apiref_only_share(apiref_only: int, total_views: int) -> float:
    if total_views <= 0:
        raise ZeroDivisionError("no annotation views")
    return apiref_only / total_views


# ---------------------------------------------------------------------------


def _rate(key: str, numerator, denominator, definition: str) -> Metric:
    if denominator:
        return Metric(key, numerator / denominator, numerator, denominator, definition)
    return Metric(key, None, numerator, denominator, definition, flagged=True)


def _count(key: str, value, definition: str) -> Metric:
    return Metric(key, value, None, None, definition)


def _is_hover_only(v: AnnotationView) -> bool:
    return v.opened_via == "anchor" and not v.pinned


def _mean(values: list[float]) -> float | None:
    return sum(values) / len(values) if values else None


def compute_metrics(recon: Reconstruction, docs: dict[str, DocumentMeta]) -> MetricReport:
    report = MetricReport()
    views = recon.views
    by_pid: dict[str, list[CodeExampleView]] = {}
    for v in views:
        by_pid.setdefault(v.pid, []).append(v)

    # --- format adoption -------------------------------------------------
    only_casdoc, tried, kept, changed_twice = 0, 0, 0, 0
    learning_only, one_doc, one_session, multi_session = 0, 0, 0, 0
    consent_at: dict[str, object] = {}
    for s in recon.sessions:
        for e in s.events:
            if e.type == "consent" and e.pid not in consent_at:
                consent_at[e.pid] = e.t

    for pid, pid_views in by_pid.items():
        baseline_views = [v for v in pid_views if v.format == "baseline"]
        if not baseline_views:
            only_casdoc += 1
            continue
        tried += 1
        ordered = sorted(pid_views, key=lambda v: v.start)
        if ordered[-1].format == "baseline":
            kept += 1
        to_baseline = 0
        for v in pid_views:
            for e in v.events:
                if e.type == "change_format" and e.detail["format"] == "baseline":
                    to_baseline += 1
        if to_baseline > 1:
            changed_twice += 1
        cutoff = consent_at.get(pid)
        after = baseline_views
        if cutoff is not None:
            after = [v for v in baseline_views if v.start > cutoff + recon.config.learning_period]
        if not after:
            learning_only += 1
        elif len({v.did for v in after}) == 1:
            one_doc += 1
        elif len({v.session_index for v in after}) == 1:
            one_session += 1
        else:
            multi_session += 1

    report.add(_count("participants", len(by_pid), "retained participants with at least one view"))
    report.add(_count("participants_only_casdoc", only_casdoc, "participants who never viewed the baseline format"))
    report.add(_count("participants_tried_baseline", tried, "participants with at least one baseline view"))
    report.add(_count("baseline_only_learning", learning_only, "baseline use confined to the learning period"))
    report.add(_count("baseline_one_document", one_doc, "baseline for a single document after the learning period"))
    report.add(_count("baseline_one_session", one_session, "baseline for one session (2+ documents) after the learning period"))
    report.add(_count("baseline_multiple_sessions", multi_session, "baseline across several sessions"))
    report.add(_count("participants_changed_twice", changed_twice, "participants who switched to the baseline more than once"))
    report.add(_count("participants_kept_baseline", kept, "participants whose last view was in the baseline format"))

    # --- annotation usage -------------------------------------------------
    all_ann_views: list[AnnotationView] = [a for v in views for a in v.annotation_views]
    report.add(_count("annotation_views", len(all_ann_views), "annotation views after grouping"))
    users = len({v.pid for v in views if v.annotation_views})
    report.add(_count("participants_used_annotations", users, "participants with at least one annotation view"))

    annotated_views = [v for v in views if v.did in docs and docs[v.did].annotation_ids]
    with_ann = sum(1 for v in annotated_views if v.annotation_views)
    report.add(
        _rate(
            "annotated_views_with_annotation_view",
            with_ann,
            len(annotated_views),
            "share of annotated-document views with at least one annotation view",
        )
    )

    marker_rates: list[float] = []
    for pid, pid_views in by_pid.items():
        shares = []
        for v in pid_views:
            meta = docs.get(v.did)
            if meta is None or not meta.markers:
                continue
            touched = {
                e.detail["marker"]
                for e in v.events
                if e.type == "interact_marker" and e.detail["marker"] in meta.markers
            }
            shares.append(len(touched) / len(meta.markers))
        if shares:
            marker_rates.append(sum(shares) / len(shares))
    report.add(
        Metric(
            "markers_interacted_mean",
            _mean(marker_rates),
            None,
            None,
            "mean per participant of the per-view share of markers interacted with",
            flagged=not marker_rates,
        )
    )

    corpus_original = {ann for meta in docs.values() for ann in meta.original_ids | meta.nested_ids}
    viewed_original = {
        a.annotation
        for v in views
        for a in v.annotation_views
        if v.did in docs and a.annotation in (docs[v.did].original_ids | docs[v.did].nested_ids)
    }
    report.add(
        _rate(
            "unique_original_annotations_viewed",
            len(viewed_original),
            len(corpus_original),
            "share of authored annotations viewed by at least one participant",
        )
    )

    # --- floating vs pinned, nested vs top level --------------------------
    hover_only = sum(1 for a in all_ann_views if _is_hover_only(a))
    pinned = sum(1 for a in all_ann_views if a.opened_via == "anchor" and a.pinned)
    nav_opened = sum(1 for a in all_ann_views if a.opened_via == "navigation")
    report.add(_count("annotation_views_hover_only", hover_only, "anchor-opened views never pinned"))
    report.add(_count("annotation_views_pinned", pinned, "anchor-opened views pinned at least once"))
    report.add(_count("annotation_views_navigation", nav_opened, "views opened through navigation widgets"))
    report.add(
        _rate(
            "floating_only_rate",
            hover_only,
            len(all_ann_views) - nav_opened,
            "hover-only share of anchor-opened annotation views",
        )
    )

    anchor_original = [
        (v, a)
        for v in views
        for a in v.annotation_views
        if a.opened_via == "anchor" and v.did in docs and a.annotation not in docs[v.did].apiref_ids
    ]
    nested_views = sum(1 for v, a in anchor_original if a.annotation in docs[v.did].nested_ids)
    top_views = sum(1 for v, a in anchor_original if a.annotation in docs[v.did].original_ids)
    report.add(_count("original_views_from_anchor", len(anchor_original), "anchor-opened views of authored annotations"))
    report.add(_count("original_views_nested", nested_views, "of which nested"))
    report.add(_count("original_views_top_level", top_views, "of which anchored in the code example"))
    report.add(
        _rate(
            "nested_to_top_level_ratio",
            nested_views,
            top_views,
            "anchor-opened nested views per top-level view",
        )
    )

    # --- navigation widgets and search ------------------------------------
    widget_events = [
        e for v in views for e in v.events if e.type == "navigation_widget"
    ]
    breadcrumbs = sum(1 for e in widget_events if e.detail["widget"] == "breadcrumb")
    undo_redo = sum(1 for e in widget_events if e.detail["widget"] in ("undo", "redo"))
    report.add(_count("breadcrumbs_used", breadcrumbs, "breadcrumb uses"))
    report.add(_count("undo_redo_used", undo_redo, "undo and redo uses"))

    searches = [s for v in views for s in v.search_actions]
    hovered_only = sum(
        1
        for s in searches
        if any(action == "hovered" for _, action in s.interactions)
        and not any(action == "selected" for _, action in s.interactions)
    )
    selected = sum(1 for s in searches if any(action == "selected" for _, action in s.interactions))
    report.add(_count("search_queries", len(searches), "search actions after grouping"))
    report.add(_count("search_hovered_only", hovered_only, "searches with hovered results and no selection"))
    report.add(_count("search_selected", selected, "searches with at least one selected result"))
    report.add(
        _count(
            "participants_used_search",
            len({v.pid for v in views if v.search_actions}),
            "participants with at least one search action",
        )
    )
    report.add(
        _count(
            "views_with_search",
            sum(1 for v in views if v.search_actions),
            "document views with at least one search action",
        )
    )

    # --- inline vs block markers ------------------------------------------
    seen_shares, interacted_shares = [], []
    for pid, pid_views in by_pid.items():
        seen_docs = {v.did for v in pid_views if v.did in docs}
        inline_seen = sum(len(docs[d].inline_markers) for d in seen_docs)
        all_seen = sum(len(docs[d].markers) for d in seen_docs)
        if all_seen:
            seen_shares.append(inline_seen / all_seen)
        touched: set[tuple[str, str]] = set()
        for v in pid_views:
            if v.did not in docs:
                continue
            for e in v.events:
                if e.type == "interact_marker" and e.detail["marker"] in docs[v.did].markers:
                    touched.add((v.did, e.detail["marker"]))
        if touched:
            inline_touched = sum(1 for d, m in touched if m in docs[d].inline_markers)
            interacted_shares.append(inline_touched / len(touched))
    report.add(
        Metric(
            "inline_marker_share_seen",
            _mean(seen_shares),
            None,
            None,
            "mean per participant of the inline share of markers seen",
            flagged=not seen_shares,
        )
    )
    report.add(
        Metric(
            "inline_marker_share_interacted",
            _mean(interacted_shares),
            None,
            None,
            "mean per participant of the inline share of markers interacted with",
            flagged=not interacted_shares,
        )
    )

    # --- imported reference content ----------------------------------------
    corpus_all = sum(len(meta.annotation_ids) for meta in docs.values())
    corpus_apiref = sum(len(meta.apiref_ids) for meta in docs.values())
    report.add(_count("unique_annotations", corpus_all, "annotations across all documents"))
    report.add(_count("unique_annotations_apiref", corpus_apiref, "of which imported reference content only"))
    apiref_views = sum(
        1 for v in views for a in v.annotation_views if v.did in docs and a.annotation in docs[v.did].apiref_ids
    )
    report.add(
        _rate(
            "apiref_only_view_share",
            apiref_views,
            len(all_ann_views),
            "share of annotation views showing imported reference content only",
        )
    )

    return report
