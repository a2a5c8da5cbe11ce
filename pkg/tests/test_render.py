import re

import pytest

from casdoc.errors import GraphError
from casdoc.convert import build_document_graph, convert_source
from casdoc.graph import merge_apiref
from casdoc.parser import SourceFile, strip_annotations
from casdoc.render import (
    FORMAT_BASELINE,
    RenderOptions,
    marker_id,
    render_baseline,
    render_interactive,
)

SOURCE = '''\
class Greeter {
    /*?
    anchor: greeting
    title: The greeting

    Holds the text shown to every *visitor*.

    ---
    within: visitor
    id: who
    title: Visitors

    Anyone who loads the page.
    */
    String greeting = "hello";

    /*?
    block: 2
    step: 1
    title: Entry point

    Prints the greeting once.
    */
    void run() {
        System.out.println(greeting);
    }
}
'''


def src(text, path="Greeter.java"):
    return SourceFile(path=path, text=text)


@pytest.fixture
def result():
    options = RenderOptions(document_id="greeter", telemetry_url="/events")
    return convert_source(src(SOURCE), options)


def test_body_carries_document_metadata(result):
    assert 'data-cd-document-id="greeter"' in result.html
    assert 'data-cd-format="casdoc"' in result.html
    assert 'data-cd-telemetry-url="/events"' in result.html


def test_every_code_line_is_wrapped(result):
    lines = re.findall(r'class="cd-line" data-line="(\d+)"', result.html)
    clean = strip_annotations(src(SOURCE)).code
    assert [int(n) for n in lines] == list(range(1, clean.count("\n") + 1))
    assert result.html.count('class="cd-ln"') == len(lines)


def test_inline_anchor_span(result):
    m = re.search(r'<span class="cd-anchor cd-marker-inline"[^>]*>greeting</span>', result.html)
    assert m is not None
    tag = m.group(0)
    assert 'data-ann="a1-1"' in tag
    assert f'data-marker-id="{marker_id("a1-1", 0)}"' in tag


def test_block_marker_element(result):
    m = re.search(r'<i class="cd-marker-block"[^>]*></i>', result.html)
    assert m is not None
    tag = m.group(0)
    assert 'data-ann="a2-1"' in tag
    assert 'data-first-line=' in tag and 'data-last-line=' in tag
    assert "--cd-span:2" in tag


def test_hidden_annotation_section(result):
    assert '<section id="cd-annotations" hidden>' in result.html
    assert re.search(r'<div class="cd-annotation" data-id="a1-1" data-kind="original" data-title="The greeting"', result.html)
    nested = re.search(r'<div class="cd-annotation" data-id="who"[^>]*>', result.html)
    assert nested and 'data-parent="a1-1"' in nested.group(0)
    stepped = re.search(r'<div class="cd-annotation" data-id="a2-1"[^>]*>', result.html)
    assert stepped and 'data-step="1"' in stepped.group(0)


def test_nested_span_injected_into_parent_part(result):
    m = re.search(r'data-id="a1-1".*?<div class="cd-part" data-label="explanation">(.*?)</div>', result.html, re.S)
    assert m is not None
    assert re.search(r'<span[^>]*data-ann="who"[^>]*>visitor</span>', m.group(1))


def test_toolbar_widgets(result):
    for needle in ('id="cd-search"', 'id="cd-undo"', 'id="cd-redo"', 'id="cd-save-state"', 'id="cd-walkthrough"'):
        assert needle in result.html
    assert 'href="greeter.baseline.java"' in result.html
    assert 'id="cd-wt-status"' in result.html


def test_walkthrough_absent_without_steps():
    plain = SOURCE.replace("    step: 1\n", "")
    options = RenderOptions(document_id="greeter")
    html = convert_source(src(plain), options).html
    assert 'id="cd-walkthrough"' not in html
    assert 'id="cd-wt-status"' not in html
    assert 'id="cd-search"' in html


def test_assets_embedded_by_default(result):
    assert "<style>" in result.html
    assert "<script>" in result.html
    assert '<link rel="stylesheet"' not in result.html


def test_assets_linked_when_not_embedded():
    options = RenderOptions(document_id="greeter", embed_assets=False, asset_dir="static")
    html = convert_source(src(SOURCE), options).html
    assert '<link rel="stylesheet" href="static/casdoc.css">' in html
    assert '<script src="static/casdoc.js" defer></script>' in html
    assert "<style>" not in html


def test_render_rejects_invalid_graph():
    from dataclasses import replace

    graph = build_document_graph(src(SOURCE))
    graph.nodes["a1-1"] = replace(graph.nodes["a1-1"], parts=())
    with pytest.raises(GraphError):
        render_interactive(graph, RenderOptions(document_id="greeter"))


def test_invalid_options_rejected():
    with pytest.raises(ValueError):
        RenderOptions(document_id="Not A Slug!")
    with pytest.raises(ValueError):
        RenderOptions(document_id="ok", telemetry_url="ftp://host/events")


def test_source_link_rendered_for_reference_parts(tmp_path):
    import json

    index = {
        "java.lang.System": {"kind": "type", "summary": "<p>Core system.</p>", "url": "https://docs/system"}
    }
    p = tmp_path / "index.json"
    p.write_text(json.dumps(index), encoding="utf-8")
    from casdoc.apiref import load_index

    graph = build_document_graph(src(SOURCE), index=load_index(p))
    html = render_interactive(graph, RenderOptions(document_id="greeter"))
    part = re.search(r'<div class="cd-part" data-label="reference" data-source-url="https://docs/system">(.*?)</div>', html, re.S)
    assert part is not None
    assert '<a href="https://docs/system"' in part.group(1)


# --- baseline -------------------------------------------------------------


def test_baseline_reinserts_plain_comments(result):
    baseline = result.baseline
    assert "/*?" not in baseline
    assert "* The greeting" in baseline
    assert "Holds the text shown to every *visitor*." in baseline
    assert baseline.index("The greeting") < baseline.index("String greeting")


def test_baseline_round_trips_code(result):
    stripped = strip_annotations(src(SOURCE)).code
    rebuilt = re.sub(r"[ \t]*/\*.*?\*/\n?", "", result.baseline, flags=re.S)
    assert rebuilt == stripped


def test_baseline_nested_indented(result):
    lines = result.baseline.splitlines()
    visitors = next(l for l in lines if "Visitors" in l)
    greeting = next(l for l in lines if "The greeting" in l)
    # indentation is measured after the comment prefix
    assert visitors.index("Visitors") - visitors.index("*") == 4
    assert greeting.index("The greeting") - greeting.index("*") == 2


def test_baseline_respects_width():
    long_text = "word " * 60
    source = f'class A {{\n    /*?\n    anchor: x\n\n    {long_text.strip()}\n    */\n    int x;\n}}\n'
    res = convert_source(src(source), RenderOptions(document_id="a"))
    for line in res.baseline.splitlines():
        assert len(line) <= 100, line


def test_baseline_keeps_fenced_code_verbatim():
    fenced = (
        "class A {\n"
        "    /*?\n"
        "    anchor: x\n"
        "\n"
        "    Before.\n"
        "\n"
        "    ```\n"
        "    int aVeryLongIdentifierThatWouldSurelyBeWrappedIfTreatedAsPlainProseTextInsteadOfCode = 1;\n"
        "    ```\n"
        "    */\n"
        "    int x;\n"
        "}\n"
    )
    res = convert_source(src(fenced), RenderOptions(document_id="a"))
    assert "aVeryLongIdentifierThatWouldSurelyBeWrappedIfTreatedAsPlainProseTextInsteadOfCode = 1;" in res.baseline


def test_baseline_neutralizes_comment_terminator(tmp_path):
    # "*/" can never appear in an annotation comment itself (it would
    # terminate the comment), but included database content may carry it.
    db_dir = tmp_path / "db"
    db_dir.mkdir()
    (db_dir / "tricky.html").write_text("<p>Closing a comment takes */ exactly.</p>", encoding="utf-8")
    (db_dir / "tricky.meta").write_text("title = Tricky\n", encoding="utf-8")
    from casdoc.database import AnnotationDb

    source = "class A {\n    /*?\n    anchor: x\n    include: tricky\n    */\n    int x;\n}\n"
    res = convert_source(src(source), RenderOptions(document_id="a"), db=AnnotationDb.load(db_dir))
    body = re.search(r"/\*(.*?)\*/", res.baseline, re.S)
    assert body is not None
    assert "*/" not in body.group(1)
    assert "* /" in body.group(1)


def test_baseline_omits_apiref(tmp_path):
    import json

    p = tmp_path / "index.json"
    p.write_text(json.dumps({"java.lang.String": {"kind": "type", "summary": "<p>S.</p>", "url": "https://docs/s"}}), encoding="utf-8")
    from casdoc.apiref import load_index

    res = convert_source(src(SOURCE), RenderOptions(document_id="greeter"), index=load_index(p))
    assert "https://docs/s" not in res.baseline
    assert "java.lang.String" not in res.baseline


def test_format_names():
    res = convert_source(src(SOURCE), RenderOptions(document_id="greeter"))
    assert FORMAT_BASELINE == "baseline"
    assert res.graph.nodes  # sanity: conversion produced a graph


def test_convert_collects_diagnostics_infos():
    gap = SOURCE.replace("step: 1", "step: 2")
    res = convert_source(src(gap), RenderOptions(document_id="greeter"))
    assert any(d.severity == "info" for d in res.diagnostics)
