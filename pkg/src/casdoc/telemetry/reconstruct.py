"""Rebuild sessions, views, and actions from the flat event log.

The pipeline goes participant by participant: drop withdrawn participants,
keep those active beyond their learning period, split their events into
sessions (cookie first, then idle gaps), derive code example views inside
each session, then group the per-view events into annotation views and
search actions.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from datetime import datetime, timedelta

from ..errors import Diagnostic, DiagnosticList
from .events import CLIENT_TYPES, InteractionEvent


@dataclass(frozen=True)
class AnalysisConfig:
    learning_period: timedelta = timedelta(minutes=15)
    session_gap: timedelta = timedelta(hours=2)
    hover_merge: timedelta = timedelta(seconds=5)
    hover_min: timedelta = timedelta(seconds=1)

    def __post_init__(self):
        for name in ("learning_period", "session_gap", "hover_merge", "hover_min"):
            if getattr(self, name) <= timedelta(0):
                raise ValueError(f"{name} must be positive")
        if self.hover_min >= self.hover_merge:
            raise ValueError("hover_min must be smaller than hover_merge")


@dataclass
class Session:
    pid: str
    events: list[InteractionEvent]
    split_origin: str  # "cookie" | "gap"

    @property
    def start(self) -> datetime:
        return self.events[0].t

    @property
    def end(self) -> datetime:
        return self.events[-1].t


@dataclass
class HoverSegment:
    start: datetime
    end: datetime

    @property
    def duration(self) -> timedelta:
        return self.end - self.start


@dataclass
class AnnotationView:
    annotation: str
    segments: list[HoverSegment] = field(default_factory=list)
    pinned: bool = False
    unpinned: bool = False
    opened_via: str = "anchor"  # "anchor" | "navigation"


@dataclass
class SearchAction:
    query: str
    keystrokes: int
    interactions: list[tuple[str, str]] = field(default_factory=list)
    start: datetime | None = None


@dataclass
class CodeExampleView:
    pid: str
    did: str
    format: str
    session_index: int
    events: list[InteractionEvent] = field(default_factory=list)
    synthetic: bool = False
    annotation_views: list[AnnotationView] = field(default_factory=list)
    search_actions: list[SearchAction] = field(default_factory=list)

    @property
    def start(self) -> datetime:
        return self.events[0].t


@dataclass
class Reconstruction:
    config: AnalysisConfig
    retained: list[str]
    sessions: list[Session]
    views: list[CodeExampleView]
    page_visits: list[InteractionEvent]
    diagnostics: list[Diagnostic]


def _sorted_by_time(events) -> list[InteractionEvent]:
    return sorted(events, key=lambda e: e.t)


def filter_participants(events, cfg: AnalysisConfig) -> tuple[set[str], list[Diagnostic]]:
    """Keep participants with at least one event strictly after their
    learning period (first consent + learning_period)."""
    diags = DiagnosticList()
    by_pid: dict[str, list[InteractionEvent]] = {}
    for e in events:
        if e.pid is not None:
            by_pid.setdefault(e.pid, []).append(e)

    retained: set[str] = set()
    for pid, stream in by_pid.items():
        stream = _sorted_by_time(stream)
        consent = next((e for e in stream if e.type == "consent"), None)
        if consent is None:
            diags.warning("no-consent", f"participant {pid} has no consent event; excluded")
            continue
        cutoff = consent.t + cfg.learning_period
        if any(e.t > cutoff for e in stream):
            retained.add(pid)
    return retained, diags.items


def split_sessions(events, cfg: AnalysisConfig) -> list[Session]:
    """Split one participant's events into sessions: by sid cookie value
    first, then at every idle gap of session_gap or more."""
    stream = _sorted_by_time(events)
    if not stream:
        return []
    pid = stream[0].pid

    cookie_parts: list[list[InteractionEvent]] = []
    current: list[InteractionEvent] = []
    current_sid: str | None = None
    for e in stream:
        if e.sid is None:
            # no session cookie on this event (e.g. withdraw); keep it with
            # the surrounding traffic rather than inventing a session
            current.append(e)
            continue
        if current and current_sid is not None and e.sid != current_sid:
            cookie_parts.append(current)
            current = []
        current.append(e)
        current_sid = e.sid
    if current:
        cookie_parts.append(current)

    sessions: list[Session] = []
    for part in cookie_parts:
        run = [part[0]]
        origin = "cookie"
        for e in part[1:]:
            if e.t - run[-1].t >= cfg.session_gap:
                sessions.append(Session(pid=pid, events=run, split_origin=origin))
                run = []
                origin = "gap"
            run.append(e)
        sessions.append(Session(pid=pid, events=run, split_origin=origin))
    return sessions


def derive_views(sessions) -> tuple[list[CodeExampleView], list[Diagnostic]]:
    """Derive code example views from one participant's sessions, in order.

    Accepts a single Session or the participant's full session list; the
    list form is needed for documents that stay open across a split.
    """
    if isinstance(sessions, Session):
        sessions = [sessions]
    diags = DiagnosticList()
    views: list[CodeExampleView] = []
    last_format: dict[str, str] = {}
    ever_opened: set[str] = set()

    for index, session in enumerate(sessions):
        open_views: dict[str, CodeExampleView] = {}

        def start_view(ev, did, fmt, synthetic=False):
            view = CodeExampleView(
                pid=session.pid,
                did=did,
                format=fmt,
                session_index=index,
                events=[ev],
                synthetic=synthetic,
            )
            views.append(view)
            open_views[did] = view
            ever_opened.add(did)
            last_format[did] = fmt
            return view

        for ev in session.events:
            if ev.type == "open_example":
                start_view(ev, ev.did, ev.detail["format"])
            elif ev.type == "change_format":
                if ev.did in open_views or ev.did in ever_opened:
                    # the format change ends any current view and begins a
                    # new one; without a current view it also revives a
                    # still-open document after a split
                    synthetic = ev.did not in open_views
                    start_view(ev, ev.did, ev.detail["format"], synthetic=synthetic)
                else:
                    diags.warning(
                        "orphan-action",
                        f"{ev.type} for {ev.did} which participant {session.pid} never opened; dropped",
                    )
            elif ev.type in CLIENT_TYPES:
                if ev.did in open_views:
                    open_views[ev.did].events.append(ev)
                elif ev.did in ever_opened:
                    start_view(ev, ev.did, last_format[ev.did], synthetic=True)
                else:
                    diags.warning(
                        "orphan-action",
                        f"{ev.type} for {ev.did} which participant {session.pid} never opened; dropped",
                    )
            # consent, session_start, withdraw, visit_page: session-level only

    return views, diags.items


def _hover_bounds(ev: InteractionEvent) -> tuple[datetime, datetime]:
    # hover events are emitted when the hover ends; t marks the end
    duration = timedelta(milliseconds=ev.detail["duration_ms"])
    return ev.t - duration, ev.t


def group_annotation_views(
    view: CodeExampleView, cfg: AnalysisConfig
) -> tuple[list[AnnotationView], list[Diagnostic]]:
    """Group one view's annotation events into hovers* pin? unpin? runs."""
    diags = DiagnosticList()
    by_annotation: dict[str, list[InteractionEvent]] = {}
    for ev in view.events:
        if ev.type == "open_close_annotation":
            by_annotation.setdefault(ev.detail["annotation"], []).append(ev)

    result: list[AnnotationView] = []
    for ann_id, stream in by_annotation.items():
        current: AnnotationView | None = None

        def flush():
            nonlocal current
            if current is not None:
                result.append(current)
                current = None

        for ev in stream:
            action = ev.detail["action"]
            if action == "hover":
                start, end = _hover_bounds(ev)
                if end - start < cfg.hover_min:
                    continue  # nonconforming client; the 1 s rule is re-applied here
                if current is None or current.pinned or current.opened_via == "navigation":
                    flush()
                    current = AnnotationView(annotation=ann_id)
                last = current.segments[-1] if current.segments else None
                if last is None:
                    current.segments.append(HoverSegment(start=start, end=end))
                elif start - last.end < cfg.hover_merge:
                    last.end = max(last.end, end)
                else:
                    # too far from the previous hover: a fresh view, not a
                    # second segment of the same one
                    flush()
                    current = AnnotationView(annotation=ann_id)
                    current.segments.append(HoverSegment(start=start, end=end))
            elif action == "pin":
                if current is None or current.pinned or current.opened_via == "navigation":
                    flush()
                    current = AnnotationView(annotation=ann_id)
                current.pinned = True
            elif action == "unpin":
                if current is None or not current.pinned:
                    diags.warning(
                        "unpin-without-pin",
                        f"annotation {ann_id}: unpin without a preceding pin; coerced",
                    )
                    if current is None:
                        current = AnnotationView(annotation=ann_id)
                    current.pinned = True
                current.unpinned = True
                flush()
            elif action == "open":
                flush()
                current = AnnotationView(annotation=ann_id, pinned=True, opened_via="navigation")
            elif action == "close":
                if current is None or current.opened_via != "navigation":
                    diags.warning(
                        "close-without-open",
                        f"annotation {ann_id}: close without a preceding open; coerced",
                    )
                    flush()
                    current = AnnotationView(annotation=ann_id, pinned=True, opened_via="navigation")
                current.unpinned = True
                flush()
        flush()
    return result, diags.items


def _levenshtein(a: str, b: str) -> int:
    if len(a) < len(b):
        a, b = b, a
    previous = list(range(len(b) + 1))
    for i, ca in enumerate(a, start=1):
        row = [i]
        for j, cb in enumerate(b, start=1):
            row.append(min(previous[j] + 1, row[j - 1] + 1, previous[j - 1] + (ca != cb)))
        previous = row
    return previous[-1]


def _continues(prev: str, new: str) -> bool:
    return prev.startswith(new) or new.startswith(prev) or _levenshtein(prev, new) <= 2


def group_search_actions(view: CodeExampleView, cfg: AnalysisConfig) -> list[SearchAction]:
    """Collapse keystroke-level search events into whole search actions."""
    actions: list[SearchAction] = []
    current: SearchAction | None = None
    last_t: datetime | None = None

    for ev in view.events:
        if ev.type != "search":
            continue
        query = ev.detail["query"]
        results = [(r["id"], r["action"]) for r in ev.detail["results"]]
        if current is not None and results and query == current.query:
            # interaction with the results of the query as it stands
            current.interactions.extend(results)
            last_t = ev.t
            continue
        if (
            current is not None
            and _continues(current.query, query)
            and last_t is not None
            and ev.t - last_t < cfg.hover_merge
        ):
            current.query = query
            current.keystrokes += 1
            current.interactions.extend(results)
        else:
            if current is not None:
                actions.append(current)
            current = SearchAction(query=query, keystrokes=1, interactions=list(results), start=ev.t)
        last_t = ev.t
    if current is not None:
        actions.append(current)
    return actions


def reconstruct(events, cfg: AnalysisConfig | None = None) -> Reconstruction:
    """Run the whole pipeline over a flat event list."""
    cfg = cfg or AnalysisConfig()
    diags = DiagnosticList()
    events = _sorted_by_time(events)

    page_visits = [e for e in events if e.type == "visit_page"]
    by_pid: dict[str, list[InteractionEvent]] = {}
    for e in events:
        if e.pid is not None:
            by_pid.setdefault(e.pid, []).append(e)

    withdrawn = {pid for pid, stream in by_pid.items() if any(e.type == "withdraw" for e in stream)}
    for pid in sorted(withdrawn, key=int):
        diags.info("withdrawn", f"participant {pid} withdrew consent; all events excluded")
        del by_pid[pid]

    remaining = [e for stream in by_pid.values() for e in stream]
    retained, filter_diags = filter_participants(remaining, cfg)
    diags.extend(filter_diags)

    sessions: list[Session] = []
    views: list[CodeExampleView] = []
    for pid in sorted(retained, key=int):
        pid_sessions = split_sessions(by_pid[pid], cfg)
        pid_views, view_diags = derive_views(pid_sessions)
        diags.extend(view_diags)
        base = len(sessions)
        for v in pid_views:
            v.session_index += base
            ann_views, ann_diags = group_annotation_views(v, cfg)
            v.annotation_views = ann_views
            diags.extend(ann_diags)
            v.search_actions = group_search_actions(v, cfg)
        sessions.extend(pid_sessions)
        views.extend(pid_views)

    return Reconstruction(
        config=cfg,
        retained=sorted(retained, key=int),
        sessions=sessions,
        views=views,
        page_visits=page_visits,
        diagnostics=diags.items,
    )
