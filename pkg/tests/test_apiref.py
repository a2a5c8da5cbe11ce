import json

import pytest

from casdoc.apiref import (
    ApiRefIndex,
    api_node_id,
    load_index,
    make_apiref_annotations,
    scan_symbols,
)
from casdoc.errors import IndexFormatError
from casdoc.parser import CleanCode

INDEX = {
    "javax.crypto.Cipher": {"kind": "type", "summary": "<p>Crypto cipher.</p>", "url": "https://docs/cipher"},
    "javax.crypto.Cipher#getInstance": {"kind": "method", "summary": "<p>Factory.</p>", "url": "https://docs/cipher-gi"},
    "java.security.SecureRandom": {"kind": "type", "summary": "<p>CSPRNG.</p>", "url": "https://docs/sr"},
    "java.lang.String": {"kind": "type", "summary": "<p>Text.</p>", "url": "https://docs/string"},
    "java.util.List": {"kind": "type", "summary": "<p>Sequence.</p>", "url": "https://docs/list"},
}


@pytest.fixture
def index(tmp_path):
    p = tmp_path / "index.json"
    p.write_text(json.dumps(INDEX), encoding="utf-8")
    return load_index(p)


def scan(code, index):
    return scan_symbols(CleanCode(code=code), index)


def test_load_index_shapes(index):
    assert "javax.crypto.Cipher" in index
    assert index.get("javax.crypto.Cipher#getInstance").kind == "method"


@pytest.mark.parametrize(
    "doc, hint",
    [
        ("[]", "object"),
        ('{"a b": {"kind": "type", "summary": "", "url": "u"}}', "qualified name"),
        ('{"p.T": {"kind": "type", "summary": ""}}', "url"),
        ('{"p.T": {"kind": "class", "summary": "", "url": "u"}}', "unknown kind"),
        ('{"p.T#m": {"kind": "type", "summary": "", "url": "u"}}', "member"),
        ('{"p.T": {"kind": "method", "summary": "", "url": "u"}}', "kind"),
        ('{"p.T": {"kind": "type", "summary": "", "url": ""}}', "url"),
    ],
)
def test_malformed_index_rejected(tmp_path, doc, hint):
    p = tmp_path / "bad.json"
    p.write_text(doc, encoding="utf-8")
    with pytest.raises(IndexFormatError) as exc:
        load_index(p)
    assert hint in str(exc.value)


def test_duplicate_keys_rejected(tmp_path):
    p = tmp_path / "dup.json"
    p.write_text(
        '{"p.T": {"kind": "type", "summary": "", "url": "u"},'
        ' "p.T": {"kind": "type", "summary": "", "url": "v"}}',
        encoding="utf-8",
    )
    with pytest.raises(IndexFormatError) as exc:
        load_index(p)
    assert "duplicate" in str(exc.value)


def test_explicit_import_resolves(index):
    code = "import javax.crypto.Cipher;\n\nCipher c;\n"
    occs = scan(code, index)
    keys = [o.key for o in occs]
    assert "javax.crypto.Cipher" in keys
    body = [o for o in occs if o.anchor.line == 3]
    assert len(body) == 1 and body[0].anchor.col_start == 0


def test_java_lang_default(index):
    occs = scan('String s = null;\n', index)
    assert [o.key for o in occs] == ["java.lang.String"]


def test_on_demand_unique_match(index):
    code = "import javax.crypto.*;\n\nCipher c;\n"
    assert any(o.key == "javax.crypto.Cipher" for o in scan(code, index))


def test_unresolved_without_import(index):
    assert scan("Cipher c;\n", index) == []


def test_ambiguous_resolution_skipped(tmp_path):
    doc = {
        "a.Thing": {"kind": "type", "summary": "", "url": "u1"},
        "b.Thing": {"kind": "type", "summary": "", "url": "u2"},
    }
    p = tmp_path / "amb.json"
    p.write_text(json.dumps(doc), encoding="utf-8")
    idx = load_index(p)
    code = "import a.*;\nimport b.*;\n\nThing t;\n"
    assert scan(code, idx) == []


def test_member_form_resolves(index):
    code = 'import javax.crypto.Cipher;\n\nCipher.getInstance("AES");\n'
    occs = scan(code, index)
    keys = [o.key for o in occs]
    assert keys.count("javax.crypto.Cipher#getInstance") == 1
    member = next(o for o in occs if "#" in o.key)
    assert member.anchor.text == "getInstance"
    assert member.anchor.line == 3


def test_member_without_call_not_reported(index):
    code = "import javax.crypto.Cipher;\n\nvar x = Cipher.getInstance;\n"
    assert not any("#" in o.key for o in scan(code, index))


def test_dotted_use_is_not_a_simple_name(index):
    # fully qualified use: the trailing simple name is not standalone
    occs = scan("java.security.SecureRandom r;\n", index)
    assert occs == []


def test_occurrences_in_strings_and_comments_ignored(index):
    code = 'import java.security.SecureRandom;\n\nSecureRandom r; // SecureRandom\nString s = "SecureRandom";\n'
    occs = scan(code, index)
    sr = [o for o in occs if o.key == "java.security.SecureRandom"]
    assert len(sr) == 1
    assert sr[0].anchor.line == 3


def test_static_imports_ignored(index):
    code = "import static java.util.List.of;\n\nList l;\n"
    assert scan(code, index) == []


def test_occurrences_in_document_order(index):
    code = "import java.security.SecureRandom;\nimport javax.crypto.Cipher;\n\nSecureRandom r;\nCipher c;\nSecureRandom t;\n"
    occs = scan(code, index)
    positions = [(o.anchor.line, o.anchor.col_start) for o in occs]
    assert positions == sorted(positions)


def test_make_annotations_groups_by_symbol(index):
    code = "import java.security.SecureRandom;\n\nSecureRandom a;\nSecureRandom b;\n"
    nodes = make_apiref_annotations(scan(code, index), index)
    assert len(nodes) == 1
    node = nodes[0]
    assert node.id == api_node_id("java.security.SecureRandom")
    assert node.kind == "apiref"
    assert node.show_marker is False
    assert len(node.code_anchors) == 2
    assert node.parts[0].label == "reference"
    assert node.parts[0].source_url == "https://docs/sr"
    assert node.title == "java.security.SecureRandom"


def test_member_title_uses_dots(index):
    code = 'import javax.crypto.Cipher;\n\nCipher.getInstance("AES");\n'
    nodes = make_apiref_annotations(scan(code, index), index)
    titles = {n.title for n in nodes}
    assert "javax.crypto.Cipher.getInstance" in titles


def test_node_ids_are_stable_slugs():
    assert api_node_id("javax.crypto.Cipher#getInstance") == "api-javax-crypto-cipher-getinstance"
