"""The reusable annotation database.

Recurring explanations (what a SecureRandom is, why arrays get zeroed) live
in a directory of pre-rendered snippets instead of being copy-pasted into
every example. Each entry is a pair of files named by the entry id:

    <id>.html   the content, already rendered to HTML
    <id>.meta   line-oriented properties, ``key = value``, one per line

The ``title`` property is required. ``source`` optionally attributes the
content to an external page (a forum answer, typically); it is carried into
the rendered document as the content part's source URL.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from pathlib import Path

from .errors import DatabaseError, IncludeError
from .parser import SLUG_RE, RawAnnotation


@dataclass(frozen=True)
class DbEntry:
    id: str
    content: str  # HTML
    meta: dict[str, str]

    @property
    def title(self) -> str:
        return self.meta["title"]

    @property
    def source(self) -> str | None:
        return self.meta.get("source")


@dataclass(frozen=True)
class AnnotationDb:
    root: str
    entries: dict[str, DbEntry]

    @classmethod
    def empty(cls) -> "AnnotationDb":
        return cls(root="", entries={})

    @classmethod
    def load(cls, root: str | Path) -> "AnnotationDb":
        rootp = Path(root)
        if not rootp.is_dir():
            raise DatabaseError(f"annotation database {rootp} is not a directory")
        html_files = {p.stem: p for p in sorted(rootp.glob("*.html"))}
        meta_files = {p.stem: p for p in sorted(rootp.glob("*.meta"))}
        for stem in sorted(set(html_files) - set(meta_files)):
            raise DatabaseError(f"{html_files[stem].name} has no matching {stem}.meta")
        for stem in sorted(set(meta_files) - set(html_files)):
            raise DatabaseError(f"{meta_files[stem].name} has no matching {stem}.html")

        entries: dict[str, DbEntry] = {}
        for stem, html_path in html_files.items():
            if not SLUG_RE.match(stem):
                raise DatabaseError(f"database id {stem!r} is not a valid slug")
            content = html_path.read_text(encoding="utf-8")
            if not content.strip():
                raise DatabaseError(f"{html_path.name} is empty")
            meta = _parse_meta(meta_files[stem])
            if "title" not in meta or not meta["title"]:
                raise DatabaseError(f"{stem}.meta is missing the required title property")
            entries[stem] = DbEntry(id=stem, content=content, meta=meta)
        return cls(root=str(rootp), entries=entries)

    def get(self, entry_id: str) -> DbEntry | None:
        return self.entries.get(entry_id)


def _parse_meta(path: Path) -> dict[str, str]:
    meta: dict[str, str] = {}
    for lineno, line in enumerate(path.read_text(encoding="utf-8").split("\n"), start=1):
        if not line.strip() or line.lstrip().startswith("#"):
            continue
        key, sep, value = line.partition("=")
        if not sep or not key.strip():
            raise DatabaseError(f"{path.name}:{lineno}: expected 'key = value', got {line.strip()!r}")
        meta[key.strip()] = value.strip()
    return meta


def expand_includes(annotations: list[RawAnnotation], db: AnnotationDb) -> list[RawAnnotation]:
    """Resolve include directives by splicing in database content.

    The database entry's HTML comes first, then the entry's own content (if
    any) as a separate paragraph. A local title wins over the database title.
    Unknown ids raise IncludeError. Running the result through this function
    again is a no-op, since no include_ref survives expansion.
    """
    out: list[RawAnnotation] = []
    for ann in annotations:
        if ann.include_ref is None:
            out.append(ann)
            continue
        entry = db.get(ann.include_ref)
        if entry is None:
            ci, ei = ann.origin
            raise IncludeError(ann.include_ref, comment_index=ci, entry_index=ei)
        content = entry.content.rstrip("\n")
        if ann.content.strip():
            content = f"{content}\n\n{ann.content}"
        out.append(
            replace(
                ann,
                content=content,
                title=ann.title if ann.title is not None else entry.title,
                include_ref=None,
                source_url=entry.source,
            )
        )
    return out
