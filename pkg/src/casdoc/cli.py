"""Command-line front end.

Four subcommands cover the life cycle of a document set: convert annotated
sources into the interactive and baseline formats, lint them without writing
anything, serve a converted directory together with the event-collection
endpoints, and analyze a collected event log back into the metric report.

Options may come from a TOML config file; flags win over the file, and the
file wins over built-in defaults. Exit status is 0 only when no errors
occurred; per-file problems exit 1, environment problems (unwritable output
directory, busy port, unreadable config) exit 2.
"""

from __future__ import annotations

import argparse
import socket
import sys
from dataclasses import dataclass
from datetime import timedelta
from pathlib import Path

try:
    import tomllib
except ModuleNotFoundError:  # 3.10
    import tomli as tomllib

from . import __version__
from .apiref import ApiRefIndex, load_index
from .convert import build_document_graph, convert_source, lint_source
from .database import AnnotationDb
from .errors import (
    AnnotationSyntaxError,
    CasdocError,
    ConfigError,
    Diagnostic,
    GrammarError,
    GraphError,
    SourceError,
)
from .parser import SourceFile
from .render import RenderOptions
from .telemetry import AnalysisConfig, DocumentMeta, compute_metrics, read_log, reconstruct

EXIT_OK = 0
EXIT_ERRORS = 1
EXIT_FATAL = 2

# every key a config file may set, with the type it must have
_CONFIG_KEYS: dict[str, type | tuple[type, ...]] = {
    "out": str,
    "index": str,
    "db": str,
    "docs": str,
    "embed_assets": bool,
    "telemetry": str,
    "host": str,
    "port": int,
    "log": str,
    "json": str,
    "learning_period": (int, float),
    "session_gap": (int, float),
    "hover_merge": (int, float),
    "hover_min": (int, float),
}

_THRESHOLDS = ("learning_period", "session_gap", "hover_merge", "hover_min")


@dataclass(frozen=True)
class CliConfig:
    """Merged settings for one command run, paths already resolved."""

    out: Path | None = None
    index_path: Path | None = None
    db_path: Path | None = None
    docs_path: Path | None = None
    embed_assets: bool = False
    telemetry: str | None = None
    host: str = "127.0.0.1"
    port: int = 8000
    log_path: Path | None = None
    json_path: Path | None = None
    learning_period: float = 15 * 60.0
    session_gap: float = 2 * 3600.0
    hover_merge: float = 5.0
    hover_min: float = 1.0

    def analysis_config(self) -> AnalysisConfig:
        try:
            return AnalysisConfig(
                learning_period=timedelta(seconds=self.learning_period),
                session_gap=timedelta(seconds=self.session_gap),
                hover_merge=timedelta(seconds=self.hover_merge),
                hover_min=timedelta(seconds=self.hover_min),
            )
        except ValueError as exc:
            raise ConfigError(str(exc)) from exc


def load_config_file(path: str | Path) -> dict:
    """Read a TOML config file, rejecting unknown keys and wrong types."""
    p = Path(path)
    try:
        data = tomllib.loads(p.read_text(encoding="utf-8"))
    except OSError as exc:
        raise ConfigError(f"cannot read config {p}: {exc.strerror or exc}") from exc
    except tomllib.TOMLDecodeError as exc:
        raise ConfigError(f"config {p} is not valid TOML: {exc}") from exc
    for key, value in data.items():
        want = _CONFIG_KEYS.get(key)
        if want is None:
            raise ConfigError(f"config {p} has unknown key {key!r}")
        if not isinstance(value, want) or isinstance(value, bool) != (want is bool):
            raise ConfigError(f"config key {key!r} must be {_type_name(want)}")
    for key in _THRESHOLDS:
        if key in data and data[key] <= 0:
            raise ConfigError(f"config key {key!r} must be positive")
    return data


def _type_name(want) -> str:
    if isinstance(want, tuple):
        return " or ".join(t.__name__ for t in want)
    return want.__name__


def _resolve(value: str | None) -> Path | None:
    return Path(value).resolve() if value is not None else None


def build_config(args: argparse.Namespace) -> CliConfig:
    """Fold the config file (if any) and the flags into one CliConfig."""
    file_cfg = load_config_file(args.config) if getattr(args, "config", None) else {}

    def pick(flag: str, key: str, default):
        value = getattr(args, flag, None)
        if value is not None:
            return value
        return file_cfg.get(key, default)

    return CliConfig(
        out=_resolve(pick("out", "out", None)),
        index_path=_resolve(pick("index", "index", None)),
        db_path=_resolve(pick("db", "db", None)),
        docs_path=_resolve(pick("docs", "docs", None)),
        embed_assets=bool(pick("embed_assets", "embed_assets", False)),
        telemetry=pick("telemetry", "telemetry", None),
        host=pick("host", "host", "127.0.0.1"),
        port=pick("port", "port", 8000),
        log_path=_resolve(pick("log", "log", None)),
        json_path=_resolve(pick("json_out", "json", None)),
        learning_period=float(file_cfg.get("learning_period", 15 * 60)),
        session_gap=float(file_cfg.get("session_gap", 2 * 3600)),
        hover_merge=float(file_cfg.get("hover_merge", 5)),
        hover_min=float(file_cfg.get("hover_min", 1)),
    )


def _load_helpers(cfg: CliConfig) -> tuple[AnnotationDb | None, ApiRefIndex | None]:
    db = AnnotationDb.load(cfg.db_path) if cfg.db_path else None
    index = load_index(cfg.index_path) if cfg.index_path else None
    return db, index


def _print_diagnostics(diags: list[Diagnostic], filename: str, out=None) -> None:
    for d in diags:
        print(d.format(filename), file=out or sys.stdout)


# --- convert ---------------------------------------------------------------


def cmd_convert(args: argparse.Namespace) -> int:
    cfg = build_config(args)
    if cfg.out is None:
        print("error: convert needs an output directory (--out)", file=sys.stderr)
        return EXIT_FATAL
    if not args.inputs:
        print("warning: no input files, nothing to convert", file=sys.stderr)
        return EXIT_OK

    try:
        cfg.out.mkdir(parents=True, exist_ok=True)
        probe = cfg.out / ".casdoc-write-probe"
        probe.write_text("")
        probe.unlink()
    except OSError as exc:
        print(f"error: output directory {cfg.out} is not writable: {exc.strerror or exc}", file=sys.stderr)
        return EXIT_FATAL

    try:
        db, index = _load_helpers(cfg)
    except CasdocError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FATAL

    ok = True
    for name in args.inputs:
        path = Path(name)
        try:
            src = SourceFile.load(path)
        except SourceError as exc:
            print(Diagnostic("error", "unreadable", str(exc)).format(str(path)), file=sys.stderr)
            ok = False
            continue
        try:
            options = RenderOptions(
                document_id=path.stem,
                embed_assets=cfg.embed_assets,
                telemetry_url=cfg.telemetry,
            )
            result = convert_source(src, options, db=db, index=index)
        except GraphError as exc:
            for d in exc.diagnostics:
                print(d.format(str(path)), file=sys.stderr)
            ok = False
            continue
        except AnnotationSyntaxError as exc:
            print(Diagnostic("error", "syntax", exc.reason, exc.line).format(str(path)), file=sys.stderr)
            ok = False
            continue
        except GrammarError as exc:
            print(Diagnostic("error", "grammar", str(exc), exc.line).format(str(path)), file=sys.stderr)
            ok = False
            continue
        except CasdocError as exc:
            line = getattr(exc, "line", None)
            print(Diagnostic("error", "invalid-input", str(exc), line).format(str(path)), file=sys.stderr)
            ok = False
            continue
        except ValueError as exc:
            print(Diagnostic("error", "bad-input", str(exc)).format(str(path)), file=sys.stderr)
            ok = False
            continue
        _print_diagnostics(result.diagnostics, str(path), out=sys.stderr)
        html_out = cfg.out / f"{path.stem}.html"
        baseline_out = cfg.out / f"{path.stem}.baseline.java"
        html_out.write_text(result.html, encoding="utf-8")
        baseline_out.write_text(result.baseline, encoding="utf-8")
        print(f"wrote {html_out}")
        print(f"wrote {baseline_out}")

    if not cfg.embed_assets:
        _copy_assets(cfg.out)
    return EXIT_OK if ok else EXIT_ERRORS


def _copy_assets(out_dir: Path) -> None:
    """Linked pages expect assets/casdoc.{css,js} next to them."""
    from importlib import resources

    asset_dir = out_dir / "assets"
    asset_dir.mkdir(exist_ok=True)
    for name in ("casdoc.css", "casdoc.js"):
        text = resources.files("casdoc").joinpath(f"assets/{name}").read_text(encoding="utf-8")
        (asset_dir / name).write_text(text, encoding="utf-8")


# --- lint ------------------------------------------------------------------


def cmd_lint(args: argparse.Namespace) -> int:
    cfg = build_config(args)
    try:
        db, index = _load_helpers(cfg)
    except CasdocError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FATAL

    found = 0
    for name in args.inputs:
        path = Path(name)
        try:
            src = SourceFile.load(path)
        except SourceError as exc:
            print(Diagnostic("error", "unreadable", str(exc)).format(str(path)))
            found += 1
            continue
        diags = lint_source(src, db=db, index=index)
        _print_diagnostics(diags, str(path))
        found += len(diags)
    return EXIT_OK if found == 0 else EXIT_ERRORS


# --- serve -----------------------------------------------------------------


def _port_free(host: str, port: int) -> bool:
    with socket.socket(socket.AF_INET, socket.SOCK_STREAM) as s:
        s.setsockopt(socket.SOL_SOCKET, socket.SO_REUSEADDR, 1)
        try:
            s.bind((host, port))
        except OSError:
            return False
    return True


def cmd_serve(args: argparse.Namespace) -> int:
    cfg = build_config(args)
    docs = Path(args.dir)
    if not docs.is_dir():
        print(f"error: {docs} is not a directory", file=sys.stderr)
        return EXIT_FATAL
    if not _port_free(cfg.host, cfg.port):
        print(f"error: port {cfg.port} is already in use", file=sys.stderr)
        return EXIT_FATAL

    try:
        db, index = _load_helpers(cfg)
    except CasdocError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FATAL

    import uvicorn

    from .service import create_app
    from .telemetry import EventLog

    log = EventLog(cfg.log_path) if cfg.log_path else None
    app = create_app(docs_dir=docs, log=log, db=db, index=index)
    try:
        uvicorn.run(app, host=cfg.host, port=cfg.port, log_level="warning")
    finally:
        if log is not None:
            log.close()  # the app lifespan closes it too; closing twice is fine
    return EXIT_OK


# --- analyze ---------------------------------------------------------------


def _document_metas(cfg: CliConfig, db, index) -> dict[str, DocumentMeta]:
    """Parse the annotated sources again to learn each document's markers."""
    metas: dict[str, DocumentMeta] = {}
    if cfg.docs_path is None:
        return metas
    for path in sorted(cfg.docs_path.glob("*.java")):
        try:
            graph = build_document_graph(SourceFile.load(path), db=db, index=index)
        except (OSError, CasdocError) as exc:
            print(f"warning: skipping {path.name}: {exc}", file=sys.stderr)
            continue
        metas[path.stem] = DocumentMeta.from_graph(path.stem, graph)
    return metas


def _format_value(metric) -> str:
    if metric.value is None:
        return "n/a"
    if isinstance(metric.value, float):
        return f"{metric.value:.4f}"
    return str(metric.value)


def _human_table(report) -> str:
    rows = []
    for key, metric in report.metrics.items():
        frac = ""
        if metric.denominator is not None:
            frac = f"  ({metric.numerator}/{metric.denominator})"
        note = "  [insufficient data]" if metric.flagged else ""
        rows.append((key, _format_value(metric) + frac + note))
    width = max((len(k) for k, _ in rows), default=0)
    return "\n".join(f"{k:<{width}}  {v}" for k, v in rows)


def cmd_analyze(args: argparse.Namespace) -> int:
    cfg = build_config(args)
    log_path = Path(args.log)
    try:
        events, corrupt = read_log(log_path)
    except OSError as exc:
        print(f"error: cannot read log {log_path}: {exc.strerror or exc}", file=sys.stderr)
        return EXIT_FATAL
    if corrupt:
        print(f"warning: skipped {len(corrupt)} corrupt line(s)", file=sys.stderr)
        _print_diagnostics(corrupt, str(log_path), out=sys.stderr)

    try:
        db, index = _load_helpers(cfg)
    except CasdocError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FATAL

    recon = reconstruct(events, cfg.analysis_config())
    _print_diagnostics(recon.diagnostics, str(log_path), out=sys.stderr)
    report = compute_metrics(recon, _document_metas(cfg, db, index))

    print(_human_table(report))
    if cfg.json_path is not None:
        try:
            cfg.json_path.write_text(report.to_json(), encoding="utf-8")
        except OSError as exc:
            print(f"error: cannot write {cfg.json_path}: {exc.strerror or exc}", file=sys.stderr)
            return EXIT_FATAL
        print(f"wrote {cfg.json_path}", file=sys.stderr)
    return EXIT_OK


# --- entry point -----------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="casdoc",
        description="Interactive documentation from annotated code examples.",
    )
    p.add_argument("--version", action="version", version=f"casdoc {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, *, config=True, index=True):
        if config:
            sp.add_argument("--config", metavar="FILE", help="TOML config file; flags win")
        if index:
            sp.add_argument("--index", metavar="FILE", help="API reference index (JSON)")
            sp.add_argument("--db", metavar="DIR", help="annotation database directory")

    c = sub.add_parser("convert", help="write interactive HTML and baseline listings")
    c.add_argument("inputs", nargs="*", metavar="FILE", help="annotated source files")
    c.add_argument("--out", metavar="DIR", help="output directory")
    c.add_argument("--embed-assets", action="store_true", default=None,
                   help="inline CSS and JS into each page")
    c.add_argument("--telemetry", metavar="URL", help="event collection endpoint")
    common(c)
    c.set_defaults(func=cmd_convert)

    l = sub.add_parser("lint", help="report problems without writing output")
    l.add_argument("inputs", nargs="+", metavar="FILE")
    common(l)
    l.set_defaults(func=cmd_lint)

    s = sub.add_parser("serve", help="serve a converted directory with event collection")
    s.add_argument("dir", metavar="DIR", help="directory of converted documents")
    s.add_argument("--port", type=int, metavar="N")
    s.add_argument("--host", metavar="ADDR")
    s.add_argument("--log", metavar="FILE", help="event log to append to")
    common(s)
    s.set_defaults(func=cmd_serve)

    a = sub.add_parser("analyze", help="turn an event log into the metric report")
    a.add_argument("log", metavar="LOG", help="NDJSON event log")
    a.add_argument("--json", dest="json_out", metavar="OUT", help="also write the report as JSON")
    a.add_argument("--docs", metavar="DIR", help="annotated sources, for marker-level metrics")
    common(a)
    a.set_defaults(func=cmd_analyze)
    return p


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FATAL


if __name__ == "__main__":
    raise SystemExit(main())
