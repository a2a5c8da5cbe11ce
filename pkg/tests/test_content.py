from casdoc.content import inject_spans, render_markdown, text_content


def test_markdown_basics():
    html = render_markdown("A *byte* array and `code`.")
    assert "<em>byte</em>" in html
    assert "<code>code</code>" in html


def test_markdown_passes_raw_html_through():
    html = render_markdown("<p>Prebuilt.</p>\n\nAnd *markdown*.")
    assert "<p>Prebuilt.</p>" in html
    assert "<em>markdown</em>" in html


def test_text_content_strips_tags_and_decodes_entities():
    assert text_content("<p>a &amp; b</p>") == "a & b"
    assert text_content("<p>one</p>\n<p>two</p>") == "one\ntwo"
    assert text_content("no tags") == "no tags"


def test_text_content_matches_dom_semantics_for_code():
    html = render_markdown("Use a `byte` array.")
    assert text_content(html) == "Use a byte array.\n"


def test_inject_single_span():
    html = "<p>zero the array now</p>"
    out = inject_spans(html, [(5, 14, 'class="mk"')])
    assert out == '<p>zero <span class="mk">the array</span> now</p>'
    assert text_content(out) == text_content(html)


def test_inject_span_crossing_elements():
    html = "<p>zero <em>the</em> array</p>"
    text = text_content(html)
    start = text.index("zero")
    out = inject_spans(html, [(start, start + len("zero the arr"), 'class="mk"')])
    # each affected text segment is wrapped separately; markup stays balanced
    assert out.count('<span class="mk">') == 3
    assert out.count("</span>") == 3
    assert text_content(out) == text


def test_inject_span_with_entities():
    html = "<p>a &amp; b stays</p>"
    text = text_content(html)
    start = text.index("& b")
    out = inject_spans(html, [(start, start + 3, 'class="mk"')])
    assert "<span class=\"mk\">&amp; b</span>" in out
    assert text_content(out) == text


def test_inject_multiple_spans_sorted_output():
    html = "<p>one two three</p>"
    out = inject_spans(html, [(8, 13, 'data-x="b"'), (0, 3, 'data-x="a"')])
    assert out.index('data-x="a"') < out.index('data-x="b"')
    assert text_content(out) == "one two three"


def test_overlapping_spans_rejected():
    import pytest

    with pytest.raises(ValueError):
        inject_spans("<p>abcdef</p>", [(0, 4, "a"), (2, 6, "b")])
